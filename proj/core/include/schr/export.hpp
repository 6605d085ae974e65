#pragma once

#include "schr/rdsolver.hpp"

#include <iosfwd>
#include <string>

namespace schr {

/// Round-trippable text for a double: 17 significant digits.
std::string format_double(double v);

/// One row per (sample time, node): t, x, then one column per compartment.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// One row per sample time: t, mass_<compartment>..., min_value, residual.
void write_diagnostics_csv(std::ostream& os, const Trajectory& traj);

} // namespace schr
