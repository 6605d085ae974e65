#pragma once

#include "schr/field.hpp"
#include "schr/kinetics.hpp"
#include "schr/rdsolver.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace schr {

/// Integral of C over the domain (basic model, drug-free regime).
double lyapunov_g1(const Field& f);

/// Integral of (S - S* - S* ln(S/S*)) + (C - C* - C* ln(C/C*)).
/// Throws DomainError if S or C is not strictly positive somewhere.
double lyapunov_g2(const Field& f, const EquilibriumPoint& e);

using LyapunovWeights = std::array<double, 3>;

/// Integral of C + a1 U_c + a2 H + a3 U_h (extended model, drug-free regime).
double lyapunov_extended_free(const Field& f, const LyapunovWeights& alphas);

/// Coefficients of C, U_c, H, U_h in the time derivative of the weighted sum,
/// evaluated at S = Lambda / eta1. All four negative means the weights certify decay.
std::array<double, 4> free_functional_coefficients(const ModelParams& p, const LyapunovWeights& alphas);

/// Searches a log-spaced grid of weights, then refines around the best point,
/// maximising the smallest margin -coefficient. Returns nullopt when no
/// weights make every coefficient negative.
std::optional<LyapunovWeights> choose_alphas(const ModelParams& p);

/// Integral of the squared deviation from E* over S, C, U_c, H, U_h.
double lyapunov_extended_endemic(const Field& f, const EquilibriumPoint& e);

enum class LyapunovFunctional { g1, g2, extended_free, extended_endemic };
std::string_view to_string(LyapunovFunctional f) noexcept;
std::optional<LyapunovFunctional> parse_functional(std::string_view name) noexcept;

struct LyapunovContext {
    std::optional<EquilibriumPoint> equilibrium;
    std::optional<LyapunovWeights> alphas;
};

/// Sampled functional values and forward-difference slopes. values, times and
/// flagged align with the trajectory samples; slopes[k] is the slope between
/// samples k and k + 1.
struct LyapunovTrace {
    LyapunovFunctional functional = LyapunovFunctional::g1;
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> slopes;
    std::vector<bool> flagged;

    /// Share of slopes starting at t >= after that are <= 0. Slopes touching a
    /// flagged sample count as positive.
    double fraction_nonpositive(double after = 0.0) const;
};

/// Evaluates the functional at every sample. A sample where the functional's
/// preconditions fail is flagged and carries NaN instead of aborting.
LyapunovTrace dissipation_report(const Trajectory& traj, LyapunovFunctional functional, const LyapunovContext& ctx);

} // namespace schr
