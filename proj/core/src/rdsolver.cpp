#include "schr/rdsolver.hpp"

#include "schr/errors.hpp"
#include "schr/stability.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>

namespace schr {

namespace {

void check_length(std::span<const double> u, const Grid1D& grid, std::string_view who)
{
    if (u.size() != grid.node_count()) {
        throw ContractViolation(fmt::format("{}: expected {} nodal values, got {}", who, grid.node_count(), u.size()));
    }
}

// Thomas algorithm for the Neumann matrix I - r Lap_h scaled by dx^2:
// row 0: (1 + 2r, -2r), interior: (-r, 1 + 2r, -r), last: (-2r, 1 + 2r).
void solve_neumann_system(std::span<double> rhs, double r)
{
    const std::size_t n = rhs.size();
    std::vector<double> sup(n, -r);
    std::vector<double> sub(n, -r);
    const double diag = 1.0 + 2.0 * r;
    sup[0] = -2.0 * r;
    sub[n - 1] = -2.0 * r;

    std::vector<double> c(n);
    c[0] = sup[0] / diag;
    rhs[0] /= diag;
    for (std::size_t i = 1; i < n; ++i) {
        const double m = diag - sub[i] * c[i - 1];
        // Strict diagonal dominance rules out a zero pivot.
        assert(m > 0.0);
        c[i] = (i + 1 < n) ? sup[i] / m : 0.0;
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / m;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] -= c[i] * rhs[i + 1];
    }
}

Field reaction_field(const Field& f, const ModelParams& p, int threads)
{
    Field rates(f.grid(), f.model(), f.time());
    const auto nodes = static_cast<long>(f.nodes());
#if defined(SCHR_HAVE_OPENMP)
#pragma omp parallel for num_threads(threads) if (threads > 1) schedule(static)
#else
    (void)threads;
#endif
    for (long j = 0; j < nodes; ++j) {
        rates.set(static_cast<std::size_t>(j), reaction(f.at(static_cast<std::size_t>(j)), p));
    }
    return rates;
}

} // namespace

std::string_view to_string(Stepper s) noexcept { return s == Stepper::explicit_euler ? "explicit" : "imex"; }

std::optional<Stepper> parse_stepper(std::string_view name) noexcept
{
    if (name == "explicit") {
        return Stepper::explicit_euler;
    }
    if (name == "imex") {
        return Stepper::imex;
    }
    return std::nullopt;
}

std::string_view to_string(Termination t) noexcept
{
    switch (t) {
    case Termination::reached_t_end:
        return "reached-t_end";
    case Termination::steady_state:
        return "steady-state";
    case Termination::aborted:
        break;
    }
    return "aborted";
}

void discrete_laplacian(std::span<const double> u, const Grid1D& grid, std::span<double> out)
{
    check_length(u, grid, "discrete_laplacian");
    check_length(out, grid, "discrete_laplacian");
    const std::size_t m = grid.node_count() - 1;
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    out[0] = 2.0 * (u[1] - u[0]) * inv_h2;
    for (std::size_t j = 1; j < m; ++j) {
        out[j] = (u[j + 1] - 2.0 * u[j] + u[j - 1]) * inv_h2;
    }
    out[m] = 2.0 * (u[m - 1] - u[m]) * inv_h2;
}

std::vector<double> discrete_laplacian(std::span<const double> u, const Grid1D& grid)
{
    std::vector<double> out(grid.node_count());
    discrete_laplacian(u, grid, out);
    return out;
}

double stable_dt(const ModelParams& p, Model model, const Grid1D& grid)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double h = grid.spacing();
    const double diffusion_bound = p.d > 0.0 ? h * h / (2.0 * p.d) : inf;

    const Eigen::MatrixXd jac = jacobian(p, drug_free_equilibrium(p, model).point);
    const double rho = jac.cwiseAbs().rowwise().sum().maxCoeff();
    const double reaction_bound = rho > 0.0 ? 0.1 / rho : inf;
    return std::min(diffusion_bound, reaction_bound);
}

void explicit_update(std::span<double> u, std::span<const double> source, const Grid1D& grid, double d, double dt)
{
    check_length(u, grid, "explicit_update");
    check_length(source, grid, "explicit_update");
    const std::vector<double> lap = discrete_laplacian(u, grid);
    for (std::size_t j = 0; j < u.size(); ++j) {
        u[j] += dt * (d * lap[j] + source[j]);
    }
}

void implicit_update(std::span<double> u, std::span<const double> source, const Grid1D& grid, double d, double dt)
{
    check_length(u, grid, "implicit_update");
    check_length(source, grid, "implicit_update");
    for (std::size_t j = 0; j < u.size(); ++j) {
        u[j] += dt * source[j];
    }
    const double h = grid.spacing();
    solve_neumann_system(u, dt * d / (h * h));
}

Field step_explicit(const Field& f, const ModelParams& p, double dt, int threads)
{
    const Field rates = reaction_field(f, p, threads);
    Field next = f;
    for (std::size_t i = 0; i < f.compartments(); ++i) {
        explicit_update(next.component(i), rates.component(i), f.grid(), p.d, dt);
    }
    next.set_time(f.time() + dt);
    return next;
}

Field step_imex(const Field& f, const ModelParams& p, double dt, int threads)
{
    const Field rates = reaction_field(f, p, threads);
    Field next = f;
    for (std::size_t i = 0; i < f.compartments(); ++i) {
        implicit_update(next.component(i), rates.component(i), f.grid(), p.d, dt);
    }
    next.set_time(f.time() + dt);
    return next;
}

void validate(const SimConfig& cfg)
{
    validate(cfg.params, cfg.model);
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
        throw DomainError(fmt::format("dt must be positive (got {})", cfg.dt));
    }
    if (!(cfg.t_end >= cfg.dt)) {
        throw DomainError(fmt::format("t_end must be at least dt (got t_end = {}, dt = {})", cfg.t_end, cfg.dt));
    }
    if (cfg.stride < 1) {
        throw DomainError(fmt::format("stride must be at least 1 (got {})", cfg.stride));
    }
    if (cfg.threads < 1) {
        throw DomainError(fmt::format("threads must be at least 1 (got {})", cfg.threads));
    }
    if (cfg.initial_field) {
        if (cfg.initial_field->model() != cfg.model || !(cfg.initial_field->grid() == cfg.grid)) {
            throw ContractViolation("initial field does not match the configured model and grid");
        }
    } else if (cfg.initial_values.model() != cfg.model) {
        throw ContractViolation("initial values do not match the configured model");
    }
    if (cfg.stepper == Stepper::explicit_euler && !cfg.allow_unstable_dt) {
        const double bound = stable_dt(cfg.params, cfg.model, cfg.grid);
        if (cfg.dt > bound) {
            throw DomainError(fmt::format(
                "dt = {} exceeds the explicit stability bound {} (use the imex stepper or allow_unstable_dt)", cfg.dt,
                bound));
        }
    }
}

Field initial_field(const SimConfig& cfg)
{
    if (cfg.initial_field) {
        return *cfg.initial_field;
    }
    Field f = Field::homogeneous(cfg.grid, cfg.initial_values, 0.0);
    const double k = cfg.perturbation_mode * std::numbers::pi / cfg.grid.length();
    for (std::size_t i = 0; i < f.compartments(); ++i) {
        const double amp = cfg.perturbation_amplitude[i];
        if (amp == 0.0) {
            continue;
        }
        auto u = f.component(i);
        for (std::size_t j = 0; j < u.size(); ++j) {
            u[j] += amp * std::cos(k * cfg.grid.node(j));
        }
    }
    return f;
}

std::vector<double> mass_integral(const Field& f)
{
    std::vector<double> mass(f.compartments());
    for (std::size_t i = 0; i < mass.size(); ++i) {
        mass[i] = trapezoid(f.component(i), f.grid());
    }
    return mass;
}

double steady_state_residual(const Field& f, const ModelParams& p)
{
    const Field rates = reaction_field(f, p, 1);
    double worst = 0.0;
    std::vector<double> lap(f.nodes());
    for (std::size_t i = 0; i < f.compartments(); ++i) {
        discrete_laplacian(f.component(i), f.grid(), lap);
        const auto rate = rates.component(i);
        for (std::size_t j = 0; j < f.nodes(); ++j) {
            worst = std::max(worst, std::abs(p.d * lap[j] + rate[j]));
        }
    }
    return worst;
}

double steady_state_tolerance(const ModelParams& p) noexcept { return 1e-8 * std::max(1.0, p.lambda_recruit); }

Trajectory integrate(const SimConfig& cfg)
{
    validate(cfg);

    Trajectory traj;
    traj.model = cfg.model;
    traj.grid = cfg.grid;
    if (cfg.stepper == Stepper::explicit_euler && cfg.allow_unstable_dt) {
        const double bound = stable_dt(cfg.params, cfg.model, cfg.grid);
        if (cfg.dt > bound) {
            traj.warnings.push_back(
                fmt::format("dt = {} exceeds the explicit stability bound {}; results may be unstable", cfg.dt, bound));
        }
    }

    Field state = initial_field(cfg);
    if (!state.all_finite()) {
        throw DomainError("initial field contains non-finite values");
    }

    const double tol = steady_state_tolerance(cfg.params);
    int quiet_samples = 0;
    double window_min = state.min_value();
    traj.min_value_seen = window_min;

    auto record = [&](const Field& f) {
        SampleDiagnostics diag{mass_integral(f), window_min, steady_state_residual(f, cfg.params)};
        traj.times.push_back(f.time());
        traj.fields.push_back(f);
        traj.diagnostics.push_back(std::move(diag));
        window_min = std::numeric_limits<double>::infinity();
        quiet_samples = traj.diagnostics.back().residual < tol ? quiet_samples + 1 : 0;
    };
    record(state);

    const auto steps = static_cast<long long>(std::llround(cfg.t_end / cfg.dt));
    for (long long k = 1; k <= steps; ++k) {
        state = cfg.stepper == Stepper::explicit_euler ? step_explicit(state, cfg.params, cfg.dt, cfg.threads)
                                                       : step_imex(state, cfg.params, cfg.dt, cfg.threads);
        state.set_time(static_cast<double>(k) * cfg.dt);

        if (!state.all_finite()) {
            window_min = std::numeric_limits<double>::quiet_NaN();
            record(state);
            traj.termination = Termination::aborted;
            traj.abort_reason = fmt::format("non-finite state at t = {}", state.time());
            return traj;
        }
        const double lowest = state.min_value();
        window_min = std::min(window_min, lowest);
        traj.min_value_seen = std::min(traj.min_value_seen, lowest);
        if (lowest < -kNegativityTolerance) {
            record(state);
            traj.termination = Termination::aborted;
            traj.abort_reason = fmt::format("positivity violated at t = {} (min value {})", state.time(), lowest);
            return traj;
        }
        if (lowest < 0.0) {
            for (std::size_t i = 0; i < state.compartments(); ++i) {
                for (double& v : state.component(i)) {
                    v = std::max(v, 0.0);
                }
            }
        }

        if (k % cfg.stride == 0 || k == steps) {
            record(state);
            if (cfg.steady_state_stop && quiet_samples >= kSteadyStateSamples) {
                traj.termination = Termination::steady_state;
                return traj;
            }
        }
    }
    traj.termination = Termination::reached_t_end;
    return traj;
}

} // namespace schr
