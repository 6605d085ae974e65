#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>

namespace schr {

/// Which reaction system a state or computation refers to.
///  - basic:    (S, C, H, R)
///  - extended: (S, C, U_c, H, U_h, R)
enum class Model { basic, extended };

constexpr std::size_t compartment_count(Model m) noexcept { return m == Model::basic ? 4 : 6; }

std::span<const std::string_view> compartment_names(Model m) noexcept;
std::string_view model_name(Model m) noexcept;

namespace idx {
namespace basic {
inline constexpr std::size_t S = 0, C = 1, H = 2, R = 3;
}
namespace extended {
inline constexpr std::size_t S = 0, C = 1, Uc = 2, H = 3, Uh = 4, R = 5;
}
} // namespace idx

/// Rate constants for both models plus the common diffusion coefficient.
///
/// Index conventions are zero-based: eta[0] is the susceptible death rate,
/// eta[1] cocaine users, eta[2] heroin users, eta[3] recovered, eta[4] and
/// eta[5] the cocaine and heroin treatment classes. gamma[0..1] are the C and
/// H recovery rates, gamma[2..3] those of U_c and U_h. mu[0] moves C into
/// treatment and mu[1] returns U_c to C; kappa[0..1] likewise for H and U_h.
/// The basic model ignores the extended-only entries.
struct ModelParams {
    double lambda_recruit = 0.0;
    double beta = 0.0;
    std::array<double, 6> eta{};
    double sigma = 0.0;
    std::array<double, 4> gamma{};
    std::array<double, 2> mu{};
    std::array<double, 2> kappa{};
    double d = 0.0;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// Aggregated outflow rates that appear throughout the closed forms.
inline double cocaine_outflow(const ModelParams& p) noexcept { return p.eta[1] + p.sigma + p.gamma[0]; }
inline double heroin_outflow(const ModelParams& p) noexcept { return p.eta[2] + p.gamma[1]; }
inline double treated_cocaine_outflow(const ModelParams& p) noexcept { return p.mu[1] + p.eta[4] + p.gamma[2]; }
inline double treated_heroin_outflow(const ModelParams& p) noexcept { return p.kappa[1] + p.eta[5] + p.gamma[3]; }
/// Determinant of the linear (H, U_h) block; must stay positive for the extended model.
inline double heroin_block_determinant(const ModelParams& p) noexcept
{
    return (p.kappa[0] + heroin_outflow(p)) * treated_heroin_outflow(p) - p.kappa[0] * p.kappa[1];
}

/// Throws DomainError naming the offending field when the parameters cannot
/// be used with the given model.
void validate(const ModelParams& p, Model model);

/// Fixed-capacity state vector tagged with its compartment layout.
class CompartmentVector {
public:
    explicit CompartmentVector(Model model) noexcept : model_(model) {}
    CompartmentVector(Model model, std::initializer_list<double> values);
    CompartmentVector(Model model, std::span<const double> values);

    Model model() const noexcept { return model_; }
    std::size_t size() const noexcept { return compartment_count(model_); }

    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    std::span<double> values() noexcept { return {values_.data(), size()}; }
    std::span<const double> values() const noexcept { return {values_.data(), size()}; }

    double sup_norm() const noexcept;
    bool all_finite() const noexcept;

    friend bool operator==(const CompartmentVector& a, const CompartmentVector& b) noexcept;

private:
    Model model_;
    std::array<double, 6> values_{};
};

enum class EquilibriumKind { drug_free, drug_addiction };
enum class Provenance { closed_form, root_found };

std::string_view to_string(EquilibriumKind k) noexcept;
std::string_view to_string(Provenance p) noexcept;

struct EquilibriumPoint {
    CompartmentVector point;
    EquilibriumKind kind;
    Provenance provenance;
};

/// Pointwise reaction terms of the four-compartment system.
CompartmentVector reaction_basic(const CompartmentVector& y, const ModelParams& p);
/// Pointwise reaction terms of the six-compartment system with treatment classes.
CompartmentVector reaction_extended(const CompartmentVector& y, const ModelParams& p);
/// Dispatches on the layout of y.
CompartmentVector reaction(const CompartmentVector& y, const ModelParams& p);

/// beta*Lambda / (eta1 * (eta2 + sigma + gamma1)).
double r0_basic(const ModelParams& p);
/// beta*Lambda / (eta1 * (eta2 + sigma + gamma1 + mu1)). Ignores the U_c -> C
/// return flow; see effective_threshold_extended for the exact invasion number.
double r0_extended(const ModelParams& p);
/// Spectral radius of the next-generation matrix on the infected (C, U_c)
/// block at the drug-free state. Coincides with r0_extended when mu2 == 0 and
/// decides the sign of the extended C*.
double effective_threshold_extended(const ModelParams& p);

EquilibriumPoint drug_free_equilibrium(const ModelParams& p, Model model);
EquilibriumPoint endemic_equilibrium_basic(const ModelParams& p);
EquilibriumPoint endemic_equilibrium_extended(const ModelParams& p);
EquilibriumPoint endemic_equilibrium(const ModelParams& p, Model model);

/// Sup-norm of the reaction term at the equilibrium.
double equilibrium_residual(const EquilibriumPoint& e, const ModelParams& p);

/// Acceptance threshold for equilibrium_residual: 1e-10 * max(1, Lambda).
double residual_tolerance(const ModelParams& p) noexcept;

struct NewtonOptions {
    int max_iterations = 100;
    double tolerance = 1e-12;
};

/// Damped Newton iteration on the reaction term, seeded at `seed`. Uses a
/// central-difference Jacobian so that it shares no code with the closed
/// forms or the analytic Jacobian. Throws DomainError when it fails to
/// converge. The kind is inferred from the infected entries of the root.
EquilibriumPoint newton_equilibrium(const ModelParams& p, const CompartmentVector& seed,
                                    const NewtonOptions& opts = {});

} // namespace schr
