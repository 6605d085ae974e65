#include "schr/manufactured.hpp"

#include "schr/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace schr {

namespace {

double wavenumber(const ManufacturedSolution& m) { return std::numbers::pi / m.length; }

void require_levels(std::size_t n)
{
    if (n < 3) {
        throw ContractViolation(fmt::format("convergence study needs at least 3 refinement levels (got {})", n));
    }
}

} // namespace

double ManufacturedSolution::exact(double t, double x) const
{
    return std::exp(-t) * (2.0 + std::cos(wavenumber(*this) * x));
}

double ManufacturedSolution::forcing(double t, double x) const
{
    const double k = wavenumber(*this);
    const double c = std::cos(k * x);
    // u_t - d u_xx
    return std::exp(-t) * (-(2.0 + c) + d * k * k * c);
}

double ManufacturedSolution::discrete_forcing(double t, double x, const Grid1D& grid) const
{
    const double k = wavenumber(*this);
    const double h = grid.spacing();
    const double c = std::cos(k * x);
    // cos(k x) is an eigenvector of the reflected stencil with eigenvalue -lambda_h.
    const double lambda_h = 2.0 * (1.0 - std::cos(k * h)) / (h * h);
    return std::exp(-t) * (-(2.0 + c) + d * lambda_h * c);
}

double manufactured_error(const ManufacturedSolution& problem, const Grid1D& grid, double dt, double t_end,
                          Stepper stepper, bool discrete_forcing)
{
    if (!(dt > 0.0) || !(t_end >= dt)) {
        throw DomainError("manufactured_error: need dt > 0 and t_end >= dt");
    }
    const std::vector<double> x = grid.nodes();
    std::vector<double> u(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        u[j] = problem.exact(0.0, x[j]);
    }
    std::vector<double> source(x.size());
    const auto steps = std::llround(t_end / dt);
    for (long long n = 0; n < steps; ++n) {
        const double t = static_cast<double>(n) * dt;
        for (std::size_t j = 0; j < x.size(); ++j) {
            source[j] = discrete_forcing ? problem.discrete_forcing(t, x[j], grid) : problem.forcing(t, x[j]);
        }
        if (stepper == Stepper::explicit_euler) {
            explicit_update(u, source, grid, problem.d, dt);
        } else {
            implicit_update(u, source, grid, problem.d, dt);
        }
    }
    const double t_final = static_cast<double>(steps) * dt;
    double err = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        err = std::max(err, std::abs(u[j] - problem.exact(t_final, x[j])));
    }
    return err;
}

std::string_view to_string(ConvergenceKind k) noexcept { return k == ConvergenceKind::spatial ? "spatial" : "temporal"; }

std::optional<ConvergenceKind> parse_convergence_kind(std::string_view name) noexcept
{
    if (name == "spatial") {
        return ConvergenceKind::spatial;
    }
    if (name == "temporal") {
        return ConvergenceKind::temporal;
    }
    return std::nullopt;
}

ConvergenceStudy spatial_convergence(const ManufacturedSolution& problem, const std::vector<int>& cells, double dt,
                                     double t_end, Stepper stepper)
{
    require_levels(cells.size());
    ConvergenceStudy study{ConvergenceKind::spatial, stepper, t_end, {}};
    for (int m : cells) {
        const Grid1D grid(problem.length, m);
        ConvergenceLevel level{m, dt, manufactured_error(problem, grid, dt, t_end, stepper, false), std::nullopt};
        if (!study.levels.empty()) {
            const auto& prev = study.levels.back();
            level.order = std::log(prev.error / level.error) / std::log(static_cast<double>(m) / prev.cells);
        }
        study.levels.push_back(level);
    }
    return study;
}

ConvergenceStudy temporal_convergence(const ManufacturedSolution& problem, const std::vector<double>& dts,
                                      int cells, double t_end, Stepper stepper)
{
    require_levels(dts.size());
    const Grid1D grid(problem.length, cells);
    ConvergenceStudy study{ConvergenceKind::temporal, stepper, t_end, {}};
    for (double dt : dts) {
        ConvergenceLevel level{cells, dt, manufactured_error(problem, grid, dt, t_end, stepper, true), std::nullopt};
        if (!study.levels.empty()) {
            const auto& prev = study.levels.back();
            level.order = std::log(prev.error / level.error) / std::log(prev.dt / dt);
        }
        study.levels.push_back(level);
    }
    return study;
}

} // namespace schr
