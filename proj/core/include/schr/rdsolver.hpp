#pragma once

#include "schr/field.hpp"
#include "schr/grid.hpp"
#include "schr/kinetics.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace schr {

enum class Stepper { explicit_euler, imex };
std::string_view to_string(Stepper s) noexcept;
std::optional<Stepper> parse_stepper(std::string_view name) noexcept;

/// Second-order Laplacian with reflected ghost nodes (zero normal derivative).
std::vector<double> discrete_laplacian(std::span<const double> u, const Grid1D& grid);
void discrete_laplacian(std::span<const double> u, const Grid1D& grid, std::span<double> out);

/// Sufficient forward-Euler step bound: min(dx^2 / (2 d), 0.1 / rho) with rho
/// the largest absolute row sum of the reaction Jacobian at the drug-free
/// state. Infinite when neither term constrains the step.
double stable_dt(const ModelParams& p, Model model, const Grid1D& grid);

// Single-component kernels shared by the model steppers and the
// manufactured-solution studies.

/// u <- u + dt (d Lap(u) + source).
void explicit_update(std::span<double> u, std::span<const double> source, const Grid1D& grid, double d, double dt);
/// Solves (I - dt d Lap) u_new = u + dt source in place.
void implicit_update(std::span<double> u, std::span<const double> source, const Grid1D& grid, double d, double dt);

/// Forward Euler on diffusion plus reaction.
Field step_explicit(const Field& f, const ModelParams& p, double dt, int threads = 1);
/// Backward Euler on diffusion, forward Euler on reaction.
Field step_imex(const Field& f, const ModelParams& p, double dt, int threads = 1);

/// Values below zero but above -kNegativityTolerance are treated as roundoff
/// and clamped; anything lower aborts an integration.
inline constexpr double kNegativityTolerance = 1e-12;

struct SimConfig {
    ModelParams params;
    Model model = Model::basic;
    Grid1D grid;
    CompartmentVector initial_values{Model::basic};
    // Optional Neumann-compatible perturbation A_i cos(k pi x / L) per compartment.
    std::array<double, 6> perturbation_amplitude{};
    int perturbation_mode = 1;
    // Overrides initial_values when set.
    std::optional<Field> initial_field;

    double dt = 1e-2;
    double t_end = 500.0;
    int stride = 100;
    Stepper stepper = Stepper::explicit_euler;
    bool steady_state_stop = false;
    bool allow_unstable_dt = false;
    int threads = 1;

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Throws DomainError/ContractViolation describing the first broken constraint.
void validate(const SimConfig& cfg);

Field initial_field(const SimConfig& cfg);

struct SampleDiagnostics {
    std::vector<double> mass;
    // Smallest value produced by any step since the previous sample, before clamping.
    double min_value = 0.0;
    double residual = 0.0;
};

enum class Termination { reached_t_end, steady_state, aborted };
std::string_view to_string(Termination t) noexcept;

struct Trajectory {
    Model model = Model::basic;
    Grid1D grid;
    std::vector<double> times;
    std::vector<Field> fields;
    std::vector<SampleDiagnostics> diagnostics;
    Termination termination = Termination::reached_t_end;
    std::string abort_reason;
    std::vector<std::string> warnings;
    double min_value_seen = 0.0;

    std::size_t size() const noexcept { return times.size(); }
    const Field& final_field() const { return fields.back(); }
};

/// Steps from t = 0 to t_end, sampling every `stride` steps and at the end.
/// Deterministic for a fixed configuration.
Trajectory integrate(const SimConfig& cfg);

/// Trapezoid integral of each compartment.
std::vector<double> mass_integral(const Field& f);

/// Sup-norm over nodes and compartments of d Lap(u) + reaction(u).
double steady_state_residual(const Field& f, const ModelParams& p);

/// Early-stop threshold on steady_state_residual: 1e-8 * max(1, Lambda).
double steady_state_tolerance(const ModelParams& p) noexcept;
inline constexpr int kSteadyStateSamples = 10;

} // namespace schr
