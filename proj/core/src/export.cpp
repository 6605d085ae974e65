#include "schr/export.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <ostream>

namespace schr {

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

void write_trajectory_csv(std::ostream& os, const Trajectory& traj)
{
    const auto names = compartment_names(traj.model);
    os << "t,x";
    for (auto n : names) {
        os << ',' << n;
    }
    os << '\n';
    const std::vector<double> x = traj.grid.nodes();
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const Field& f = traj.fields[k];
        for (std::size_t j = 0; j < x.size(); ++j) {
            os << format_double(traj.times[k]) << ',' << format_double(x[j]);
            for (std::size_t i = 0; i < f.compartments(); ++i) {
                os << ',' << format_double(f.component(i)[j]);
            }
            os << '\n';
        }
    }
}

void write_diagnostics_csv(std::ostream& os, const Trajectory& traj)
{
    os << 't';
    for (auto n : compartment_names(traj.model)) {
        os << ",mass_" << n;
    }
    os << ",min_value,residual\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto& d = traj.diagnostics[k];
        os << format_double(traj.times[k]);
        for (double m : d.mass) {
            os << ',' << format_double(m);
        }
        os << ',' << format_double(d.min_value) << ',' << format_double(d.residual) << '\n';
    }
}

} // namespace schr
