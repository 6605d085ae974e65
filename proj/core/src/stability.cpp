#include "schr/stability.hpp"

#include "schr/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace schr {

Eigen::Matrix4d jacobian_basic(const ModelParams& p, const CompartmentVector& y)
{
    using namespace idx::basic;
    if (y.model() != Model::basic) {
        throw ContractViolation("jacobian_basic: expected basic layout");
    }
    Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
    j(S, S) = -p.eta[0] - p.beta * y[C];
    j(S, C) = -p.beta * y[S];
    j(C, S) = p.beta * y[C];
    j(C, C) = p.beta * y[S] - cocaine_outflow(p);
    j(H, C) = p.sigma;
    j(H, H) = -heroin_outflow(p);
    j(R, C) = p.gamma[0];
    j(R, H) = p.gamma[1];
    j(R, R) = -p.eta[3];
    return j;
}

Eigen::Matrix<double, 6, 6> jacobian_extended(const ModelParams& p, const CompartmentVector& y)
{
    using namespace idx::extended;
    if (y.model() != Model::extended) {
        throw ContractViolation("jacobian_extended: expected extended layout");
    }
    Eigen::Matrix<double, 6, 6> j = Eigen::Matrix<double, 6, 6>::Zero();
    j(S, S) = -p.eta[0] - p.beta * y[C];
    j(S, C) = -p.beta * y[S];
    j(C, S) = p.beta * y[C];
    j(C, C) = p.beta * y[S] - cocaine_outflow(p) - p.mu[0];
    j(C, Uc) = p.mu[1];
    j(Uc, C) = p.mu[0];
    j(Uc, Uc) = -treated_cocaine_outflow(p);
    j(H, C) = p.sigma;
    j(H, H) = -heroin_outflow(p) - p.kappa[0];
    j(H, Uh) = p.kappa[1];
    j(Uh, H) = p.kappa[0];
    j(Uh, Uh) = -treated_heroin_outflow(p);
    j(R, C) = p.gamma[0];
    j(R, Uc) = p.gamma[2];
    j(R, H) = p.gamma[1];
    j(R, Uh) = p.gamma[3];
    j(R, R) = -p.eta[3];
    return j;
}

Eigen::MatrixXd jacobian(const ModelParams& p, const CompartmentVector& y)
{
    if (y.model() == Model::basic) {
        return jacobian_basic(p, y);
    }
    return jacobian_extended(p, y);
}

NgmDecomposition ngm_decompose(const ModelParams& p, const CompartmentVector& y)
{
    // S and C occupy indices 0 and 1 in both layouts.
    constexpr Eigen::Index s = 0;
    constexpr Eigen::Index c = 1;
    const Eigen::MatrixXd jac = jacobian(p, y);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(jac.rows(), jac.cols());
    t(s, s) = -p.beta * y[c];
    t(s, c) = -p.beta * y[s];
    t(c, s) = p.beta * y[c];
    t(c, c) = p.beta * y[s];
    return {t, jac - t, y};
}

double ngm_trace(const NgmDecomposition& ngm)
{
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(ngm.transition);
    if (!lu.isInvertible()) {
        throw DomainError("ngm_trace: transition matrix is singular");
    }
    return (-ngm.transmission * lu.inverse()).trace();
}

ModeSpectrum neumann_modes(double length, int j_max)
{
    if (!(length > 0.0)) {
        throw DomainError(fmt::format("neumann_modes: domain length must be positive (got {})", length));
    }
    if (j_max < 0) {
        throw DomainError("neumann_modes: j_max must be non-negative");
    }
    ModeSpectrum spectrum{length, {}};
    spectrum.eigenvalues.reserve(static_cast<std::size_t>(j_max) + 1);
    for (int j = 0; j <= j_max; ++j) {
        const double k = j * std::numbers::pi / length;
        spectrum.eigenvalues.push_back(k * k);
    }
    return spectrum;
}

ModeRoots roots_drug_free(const ModelParams& p, double lambda_j, int mode_index)
{
    const double shift = -p.d * lambda_j;
    ModeRoots out{mode_index, lambda_j, {}, std::nullopt, std::nullopt};
    out.roots = {
        {shift - p.eta[0], 0.0},
        {shift - cocaine_outflow(p) * (1.0 - r0_basic(p)), 0.0},
        {shift - heroin_outflow(p), 0.0},
    };
    return out;
}

ModeRoots roots_endemic(const ModelParams& p, const EquilibriumPoint& e, double lambda_j, int mode_index)
{
    using namespace idx::basic;
    if (e.point.model() != Model::basic) {
        throw ContractViolation("roots_endemic: expected a basic-model equilibrium");
    }
    const double s_star = e.point[S];
    const double c_star = e.point[C];
    const double a = cocaine_outflow(p);
    const double alpha1 = p.eta[0] + a + p.beta * (c_star - s_star);
    const double alpha2 = (p.eta[0] + p.beta * c_star) * a - p.eta[0] * p.beta * s_star;

    // Y = X + d lambda solves Y^2 + alpha1 Y + alpha2 = 0.
    const std::complex<double> disc = std::sqrt(std::complex<double>(alpha1 * alpha1 - 4.0 * alpha2, 0.0));
    // Cancellation-free pairing for real roots; conjugate pair otherwise.
    std::complex<double> y1;
    std::complex<double> y2;
    if (disc.imag() == 0.0 && disc.real() != 0.0) {
        const double q = -0.5 * (alpha1 + std::copysign(disc.real(), alpha1));
        y1 = q;
        y2 = alpha2 / q;
    } else {
        y1 = 0.5 * (-alpha1 + disc);
        y2 = 0.5 * (-alpha1 - disc);
    }

    const double shift = -p.d * lambda_j;
    ModeRoots out{mode_index, lambda_j, {}, alpha1, alpha2};
    out.roots = {y1 + shift, y2 + shift, {shift - heroin_outflow(p), 0.0}};
    return out;
}

ModeRoots roots_numeric(const ModelParams& p, const EquilibriumPoint& e, double lambda_j, int mode_index)
{
    const Eigen::MatrixXd full = jacobian(p, e.point);
    // R never feeds back, so drop the last row and column.
    const Eigen::Index n = full.rows() - 1;
    Eigen::MatrixXd a = full.topLeftCorner(n, n);
    a.diagonal().array() -= p.d * lambda_j;

    const Eigen::EigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) {
        throw DomainError("roots_numeric: eigenvalue iteration failed");
    }
    const Eigen::VectorXcd values = solver.eigenvalues();
    const Eigen::MatrixXcd vectors = solver.eigenvectors();
    const double scale = std::max(1.0, a.lpNorm<Eigen::Infinity>());

    ModeRoots out{mode_index, lambda_j, {}, std::nullopt, std::nullopt};
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::VectorXcd v = vectors.col(k).normalized();
        const double res = (a.cast<std::complex<double>>() * v - values[k] * v).norm();
        if (res > 1e-10 * scale) {
            throw DomainError(fmt::format("roots_numeric: eigenpair residual {} exceeds tolerance", res));
        }
        out.roots.push_back(values[k]);
    }
    return out;
}

std::complex<double> characteristic_basic(const ModelParams& p, const CompartmentVector& y, double lambda_j,
                                          std::complex<double> x)
{
    const double s = y[0];
    const double c = y[1];
    const std::complex<double> z = x + p.d * lambda_j;
    const std::complex<double> quad =
        (z + p.eta[0] + p.beta * c) * (z + cocaine_outflow(p) - p.beta * s) + p.beta * p.beta * s * c;
    return (z + heroin_outflow(p)) * quad;
}

std::string_view to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::locally_asymptotically_stable:
        return "locally-asymptotically-stable";
    case Verdict::unstable:
        return "unstable";
    case Verdict::inconclusive:
        break;
    }
    return "inconclusive";
}

Verdict verdict_from_roots(const std::vector<ModeRoots>& modes, double margin)
{
    bool all_negative = true;
    for (const auto& m : modes) {
        for (const auto& r : m.roots) {
            if (r.real() > margin) {
                return Verdict::unstable;
            }
            all_negative = all_negative && r.real() < -margin;
        }
    }
    return all_negative ? Verdict::locally_asymptotically_stable : Verdict::inconclusive;
}

StabilityReport classify(const ModelParams& p, const EquilibriumPoint& e, const ModeSpectrum& modes)
{
    if (modes.eigenvalues.empty()) {
        throw ContractViolation("classify: mode spectrum is empty");
    }
    const Model model = e.point.model();
    StabilityReport report;
    report.model = model;
    report.equilibrium = e;
    if (model == Model::basic) {
        report.r0 = r0_basic(p);
    } else {
        report.r0 = r0_extended(p);
        report.effective_threshold = effective_threshold_extended(p);
    }

    report.modes.reserve(modes.eigenvalues.size());
    for (std::size_t j = 0; j < modes.eigenvalues.size(); ++j) {
        const double lambda = modes.eigenvalues[j];
        const int index = static_cast<int>(j);
        if (model == Model::extended) {
            report.modes.push_back(roots_numeric(p, e, lambda, index));
        } else if (e.kind == EquilibriumKind::drug_free) {
            report.modes.push_back(roots_drug_free(p, lambda, index));
        } else {
            report.modes.push_back(roots_endemic(p, e, lambda, index));
        }
    }
    report.verdict = verdict_from_roots(report.modes);
    return report;
}

} // namespace schr
