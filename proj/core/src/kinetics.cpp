#include "schr/kinetics.hpp"

#include "schr/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace schr {

namespace {

constexpr std::array<std::string_view, 4> kBasicNames{"S", "C", "H", "R"};
constexpr std::array<std::string_view, 6> kExtendedNames{"S", "C", "U_c", "H", "U_h", "R"};

void require_nonnegative(double value, std::string_view name)
{
    if (!std::isfinite(value) || value < 0.0) {
        throw DomainError(fmt::format("parameter '{}' must be finite and non-negative (got {})", name, value));
    }
}

void require_positive(double value, std::string_view what)
{
    if (!(value > 0.0)) {
        throw DomainError(fmt::format("{} must be strictly positive (got {})", what, value));
    }
}

void require_layout(const CompartmentVector& y, Model expected)
{
    if (y.model() != expected) {
        throw ContractViolation(fmt::format("expected {} layout, got {}", model_name(expected), model_name(y.model())));
    }
}

} // namespace

std::span<const std::string_view> compartment_names(Model m) noexcept
{
    if (m == Model::basic) {
        return kBasicNames;
    }
    return kExtendedNames;
}

std::string_view model_name(Model m) noexcept { return m == Model::basic ? "basic" : "extended"; }

std::string_view to_string(EquilibriumKind k) noexcept
{
    return k == EquilibriumKind::drug_free ? "drug-free" : "drug-addiction";
}

std::string_view to_string(Provenance p) noexcept
{
    return p == Provenance::closed_form ? "closed-form" : "root-found";
}

void validate(const ModelParams& p, Model model)
{
    require_nonnegative(p.lambda_recruit, "lambda");
    require_nonnegative(p.beta, "beta");
    require_nonnegative(p.sigma, "sigma");
    require_nonnegative(p.d, "d");
    for (std::size_t i = 0; i < p.eta.size(); ++i) {
        require_nonnegative(p.eta[i], fmt::format("eta{}", i + 1));
    }
    for (std::size_t i = 0; i < p.gamma.size(); ++i) {
        require_nonnegative(p.gamma[i], fmt::format("gamma{}", i + 1));
    }
    for (std::size_t i = 0; i < 2; ++i) {
        require_nonnegative(p.mu[i], fmt::format("mu{}", i + 1));
        require_nonnegative(p.kappa[i], fmt::format("kappa{}", i + 1));
    }

    require_positive(p.eta[0], "eta1");
    require_positive(cocaine_outflow(p), "eta2 + sigma + gamma1");
    if (model == Model::extended) {
        require_positive(treated_cocaine_outflow(p), "mu2 + eta5 + gamma3");
        require_positive(treated_heroin_outflow(p), "kappa2 + eta6 + gamma4");
        require_positive(heroin_block_determinant(p), "(kappa1 + eta3 + gamma2)(kappa2 + eta6 + gamma4) - kappa1*kappa2");
    }
}

CompartmentVector::CompartmentVector(Model model, std::initializer_list<double> values)
    : CompartmentVector(model, std::span<const double>(values.begin(), values.size()))
{
}

CompartmentVector::CompartmentVector(Model model, std::span<const double> values) : model_(model)
{
    if (values.size() != compartment_count(model)) {
        throw ContractViolation(fmt::format("{} layout needs {} compartments, got {}", model_name(model),
                                            compartment_count(model), values.size()));
    }
    std::copy(values.begin(), values.end(), values_.begin());
}

double CompartmentVector::sup_norm() const noexcept
{
    double m = 0.0;
    for (double v : values()) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

bool CompartmentVector::all_finite() const noexcept
{
    return std::all_of(values().begin(), values().end(), [](double v) { return std::isfinite(v); });
}

bool operator==(const CompartmentVector& a, const CompartmentVector& b) noexcept
{
    return a.model_ == b.model_ && std::equal(a.values().begin(), a.values().end(), b.values().begin());
}

CompartmentVector reaction_basic(const CompartmentVector& y, const ModelParams& p)
{
    using namespace idx::basic;
    require_layout(y, Model::basic);
    const double infection = p.beta * y[S] * y[C];
    CompartmentVector out(Model::basic);
    out[S] = p.lambda_recruit - infection - p.eta[0] * y[S];
    out[C] = infection - cocaine_outflow(p) * y[C];
    out[H] = -heroin_outflow(p) * y[H] + p.sigma * y[C];
    out[R] = p.gamma[0] * y[C] + p.gamma[1] * y[H] - p.eta[3] * y[R];
    return out;
}

CompartmentVector reaction_extended(const CompartmentVector& y, const ModelParams& p)
{
    using namespace idx::extended;
    require_layout(y, Model::extended);
    const double infection = p.beta * y[S] * y[C];
    CompartmentVector out(Model::extended);
    out[S] = p.lambda_recruit - infection - p.eta[0] * y[S];
    out[C] = infection - cocaine_outflow(p) * y[C] + p.mu[1] * y[Uc] - p.mu[0] * y[C];
    out[Uc] = p.mu[0] * y[C] - treated_cocaine_outflow(p) * y[Uc];
    out[H] = -heroin_outflow(p) * y[H] + p.sigma * y[C] + p.kappa[1] * y[Uh] - p.kappa[0] * y[H];
    out[Uh] = p.kappa[0] * y[H] - treated_heroin_outflow(p) * y[Uh];
    out[R] = p.gamma[0] * y[C] + p.gamma[1] * y[H] - p.eta[3] * y[R] + p.gamma[2] * y[Uc] + p.gamma[3] * y[Uh];
    return out;
}

CompartmentVector reaction(const CompartmentVector& y, const ModelParams& p)
{
    return y.model() == Model::basic ? reaction_basic(y, p) : reaction_extended(y, p);
}

double r0_basic(const ModelParams& p)
{
    const double denom = p.eta[0] * cocaine_outflow(p);
    if (!(denom > 0.0)) {
        throw DomainError("r0_basic: eta1 * (eta2 + sigma + gamma1) must be positive");
    }
    return p.beta * p.lambda_recruit / denom;
}

double r0_extended(const ModelParams& p)
{
    const double denom = p.eta[0] * (cocaine_outflow(p) + p.mu[0]);
    if (!(denom > 0.0)) {
        throw DomainError("r0_extended: eta1 * (eta2 + sigma + gamma1 + mu1) must be positive");
    }
    return p.beta * p.lambda_recruit / denom;
}

double effective_threshold_extended(const ModelParams& p)
{
    if (!(p.eta[0] > 0.0)) {
        throw DomainError("effective_threshold_extended: eta1 must be positive");
    }
    const double s0 = p.lambda_recruit / p.eta[0];
    // Transition block V on (C, U_c) and new-infection block F = diag(beta*s0, 0).
    const double v11 = cocaine_outflow(p) + p.mu[0];
    const double v12 = -p.mu[1];
    const double v21 = -p.mu[0];
    const double v22 = treated_cocaine_outflow(p);
    const double det = v11 * v22 - v12 * v21;
    if (!(std::abs(det) > 0.0)) {
        throw DomainError("effective_threshold_extended: singular transition block");
    }
    // K = F * V^{-1}; only the first row of F is nonzero.
    const double k11 = p.beta * s0 * v22 / det;
    const double k12 = -p.beta * s0 * v12 / det;
    const double k21 = 0.0;
    const double k22 = 0.0;
    const double tr = k11 + k22;
    const double disc = tr * tr - 4.0 * (k11 * k22 - k12 * k21);
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        return std::max(std::abs(0.5 * (tr + sq)), std::abs(0.5 * (tr - sq)));
    }
    return std::sqrt(k11 * k22 - k12 * k21);
}

EquilibriumPoint drug_free_equilibrium(const ModelParams& p, Model model)
{
    if (!(p.eta[0] > 0.0)) {
        throw DomainError("drug-free equilibrium requires eta1 > 0");
    }
    CompartmentVector point(model);
    point[0] = p.lambda_recruit / p.eta[0];
    return {point, EquilibriumKind::drug_free, Provenance::closed_form};
}

EquilibriumPoint endemic_equilibrium_basic(const ModelParams& p)
{
    using namespace idx::basic;
    const double r0 = r0_basic(p);
    if (!(r0 > 1.0)) {
        throw NoEndemicEquilibrium(fmt::format("basic model has no drug-addiction equilibrium (R0 = {} <= 1)", r0));
    }
    require_positive(heroin_outflow(p), "eta3 + gamma2");
    require_positive(p.eta[3], "eta4");

    const double excess = r0 - 1.0;
    const double scale = p.eta[0] / p.beta;
    CompartmentVector point(Model::basic);
    point[S] = p.lambda_recruit / (p.eta[0] * r0);
    point[C] = scale * excess;
    point[H] = scale * p.sigma / heroin_outflow(p) * excess;
    point[R] = scale / p.eta[3] * (p.gamma[0] + p.sigma * p.gamma[1] / heroin_outflow(p)) * excess;
    return {point, EquilibriumKind::drug_addiction, Provenance::closed_form};
}

EquilibriumPoint endemic_equilibrium_extended(const ModelParams& p)
{
    using namespace idx::extended;
    validate(p, Model::extended);
    if (!(p.beta > 0.0)) {
        throw NoEndemicEquilibrium("extended model has no drug-addiction equilibrium when beta = 0");
    }
    require_positive(p.eta[3], "eta4");

    const double uc_out = treated_cocaine_outflow(p);
    const double uh_out = treated_heroin_outflow(p);
    // Grouped form of Lambda/(eta1 R0) - mu1 mu2 / (beta (mu2 + eta5 + gamma3)).
    const double s_star = ((cocaine_outflow(p) + p.mu[0]) - p.mu[0] * p.mu[1] / uc_out) / p.beta;
    const double c_star = (p.lambda_recruit - p.eta[0] * s_star) / (p.beta * s_star);
    if (!(c_star > 0.0)) {
        throw NoEndemicEquilibrium(
            fmt::format("extended model has no drug-addiction equilibrium (C* = {} <= 0)", c_star));
    }

    CompartmentVector point(Model::extended);
    point[S] = s_star;
    point[C] = c_star;
    point[Uc] = p.mu[0] * c_star / uc_out;
    point[H] = p.sigma * uh_out * c_star / heroin_block_determinant(p);
    point[Uh] = p.kappa[0] * point[H] / uh_out;
    point[R] = (p.gamma[0] * point[C] + p.gamma[1] * point[H] + p.gamma[2] * point[Uc] + p.gamma[3] * point[Uh]) /
               p.eta[3];
    return {point, EquilibriumKind::drug_addiction, Provenance::closed_form};
}

EquilibriumPoint endemic_equilibrium(const ModelParams& p, Model model)
{
    return model == Model::basic ? endemic_equilibrium_basic(p) : endemic_equilibrium_extended(p);
}

double equilibrium_residual(const EquilibriumPoint& e, const ModelParams& p)
{
    return reaction(e.point, p).sup_norm();
}

double residual_tolerance(const ModelParams& p) noexcept { return 1e-10 * std::max(1.0, p.lambda_recruit); }

} // namespace schr
