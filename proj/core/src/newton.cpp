#include "schr/errors.hpp"
#include "schr/kinetics.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace schr {

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

Vec residual_at(const Vec& y, Model model, const ModelParams& p)
{
    const CompartmentVector f = reaction(CompartmentVector(model, std::span<const double>(y.data(), y.size())), p);
    Vec out(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        out[i] = f[static_cast<std::size_t>(i)];
    }
    return out;
}

// Central differences are exact (up to roundoff) for the quadratic reaction terms.
Mat fd_jacobian(const Vec& y, Model model, const ModelParams& p)
{
    const Eigen::Index n = y.size();
    Mat jac(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(y[j]));
        Vec up = y;
        Vec down = y;
        up[j] += h;
        down[j] -= h;
        jac.col(j) = (residual_at(up, model, p) - residual_at(down, model, p)) / (2.0 * h);
    }
    return jac;
}

} // namespace

EquilibriumPoint newton_equilibrium(const ModelParams& p, const CompartmentVector& seed, const NewtonOptions& opts)
{
    const Model model = seed.model();
    const auto n = static_cast<Eigen::Index>(seed.size());
    Vec y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        y[i] = seed[static_cast<std::size_t>(i)];
    }

    const double f_scale = std::max(1.0, p.lambda_recruit);
    Vec f = residual_at(y, model, p);
    bool converged = f.lpNorm<Eigen::Infinity>() <= opts.tolerance * f_scale;

    for (int it = 0; it < opts.max_iterations && !converged; ++it) {
        const Mat jac = fd_jacobian(y, model, p);
        const Eigen::FullPivLU<Mat> lu(jac);
        if (!lu.isInvertible()) {
            throw DomainError(fmt::format("newton_equilibrium: singular Jacobian at iteration {}", it));
        }
        const Vec step = lu.solve(-f);

        // Backtrack until the residual decreases.
        const double f_norm = f.norm();
        double t = 1.0;
        Vec trial = y + step;
        Vec f_trial = residual_at(trial, model, p);
        while (f_trial.norm() >= f_norm && t > 1e-6) {
            t *= 0.5;
            trial = y + t * step;
            f_trial = residual_at(trial, model, p);
        }
        y = trial;
        f = f_trial;

        const double step_size = t * step.lpNorm<Eigen::Infinity>();
        converged = f.lpNorm<Eigen::Infinity>() <= opts.tolerance * f_scale ||
                    step_size <= opts.tolerance * std::max(1.0, y.lpNorm<Eigen::Infinity>());
    }

    if (!converged || !y.allFinite() || f.lpNorm<Eigen::Infinity>() > residual_tolerance(p)) {
        throw DomainError(fmt::format("newton_equilibrium: no convergence after {} iterations (residual {})",
                                      opts.max_iterations, f.lpNorm<Eigen::Infinity>()));
    }

    CompartmentVector point(model, std::span<const double>(y.data(), static_cast<std::size_t>(n)));
    const double zero_tol = 1e-9 * std::max(1.0, point.sup_norm());
    bool infected_free = true;
    for (std::size_t i = 1; i < point.size(); ++i) {
        infected_free = infected_free && std::abs(point[i]) <= zero_tol;
    }
    if (infected_free) {
        for (std::size_t i = 1; i < point.size(); ++i) {
            point[i] = 0.0;
        }
        return {point, EquilibriumKind::drug_free, Provenance::root_found};
    }
    return {point, EquilibriumKind::drug_addiction, Provenance::root_found};
}

} // namespace schr
