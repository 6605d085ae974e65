#pragma once

#include "schr/grid.hpp"
#include "schr/rdsolver.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace schr {

/// Scalar problem u_t = d u_xx + f on [0, L] with zero-flux ends whose exact
/// solution is u(t, x) = exp(-t) (2 + cos(pi x / L)).
///
/// With continuous forcing the discrete solution carries both space and time
/// error. With discrete forcing, f is built from the discrete Laplacian of the
/// exact solution so the semi-discrete system is solved exactly and only the
/// time-stepping error remains.
struct ManufacturedSolution {
    double d = 0.1;
    double length = 2.0;

    double exact(double t, double x) const;
    double forcing(double t, double x) const;
    double discrete_forcing(double t, double x, const Grid1D& grid) const;
};

/// Max nodal error at t_end for one (grid, dt) pair.
double manufactured_error(const ManufacturedSolution& problem, const Grid1D& grid, double dt, double t_end,
                          Stepper stepper, bool discrete_forcing);

enum class ConvergenceKind { spatial, temporal };
std::string_view to_string(ConvergenceKind k) noexcept;
std::optional<ConvergenceKind> parse_convergence_kind(std::string_view name) noexcept;

struct ConvergenceLevel {
    int cells = 0;
    double dt = 0.0;
    double error = 0.0;
    // Observed order against the previous level; empty for the first.
    std::optional<double> order;
};

struct ConvergenceStudy {
    ConvergenceKind kind = ConvergenceKind::spatial;
    Stepper stepper = Stepper::explicit_euler;
    double t_end = 0.0;
    std::vector<ConvergenceLevel> levels;
};

/// Refines the grid at a fixed dt. Needs at least three levels.
ConvergenceStudy spatial_convergence(const ManufacturedSolution& problem, const std::vector<int>& cells, double dt,
                                     double t_end, Stepper stepper);

/// Refines dt on a fixed grid using the discrete forcing. Needs at least three levels.
ConvergenceStudy temporal_convergence(const ManufacturedSolution& problem, const std::vector<double>& dts,
                                      int cells, double t_end, Stepper stepper);

} // namespace schr
