#pragma once

// Test-only reference computations. Nothing here calls the closed forms or
// kernels it is used to check.

#include "schr/kinetics.hpp"
#include "schr/presets.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>

namespace oracle {

// Reference rates, transcribed by hand, independent of the preset code.
struct RateRow {
    double lambda, beta, eta, sigma, gamma12, d;
};
inline constexpr RateRow kEndemicRates{2.15, 0.002, 0.01, 0.2, 0.05, 0.1};
inline constexpr RateRow kDrugFreeRates{2.15, 0.001, 0.03, 0.001, 0.05, 0.1};
inline constexpr double kTreatedEta = 0.01;
inline constexpr double kTreatedGamma = 0.03;
inline constexpr double kMuEndemic = 0.01;
inline constexpr double kMuDrugFree = 0.05;
inline constexpr double kKappa = 0.01;

inline schr::ModelParams basic_params(const RateRow& r)
{
    schr::ModelParams p;
    p.lambda_recruit = r.lambda;
    p.beta = r.beta;
    p.eta = {r.eta, r.eta, r.eta, r.eta, 0.0, 0.0};
    p.sigma = r.sigma;
    p.gamma = {r.gamma12, r.gamma12, 0.0, 0.0};
    p.d = r.d;
    return p;
}

inline schr::ModelParams extended_params(const RateRow& r, double mu)
{
    schr::ModelParams p = basic_params(r);
    p.eta[4] = p.eta[5] = kTreatedEta;
    p.gamma[2] = p.gamma[3] = kTreatedGamma;
    p.mu = {mu, mu};
    p.kappa = {kKappa, kKappa};
    return p;
}

inline schr::ModelParams endemic_basic() { return basic_params(kEndemicRates); }
inline schr::ModelParams drug_free_basic() { return basic_params(kDrugFreeRates); }
inline schr::ModelParams endemic_extended() { return extended_params(kEndemicRates, kMuEndemic); }
inline schr::ModelParams drug_free_extended() { return extended_params(kDrugFreeRates, kMuDrugFree); }

// Second, term-by-term transcription of the right-hand sides.
inline std::array<double, 4> rhs_basic(double s, double c, double h, double r, const schr::ModelParams& p)
{
    const double lam = p.lambda_recruit, b = p.beta, e1 = p.eta[0], e2 = p.eta[1], e3 = p.eta[2], e4 = p.eta[3];
    const double sg = p.sigma, g1 = p.gamma[0], g2 = p.gamma[1];
    return {
        lam - b * s * c - e1 * s,
        b * s * c - e2 * c - sg * c - g1 * c,
        sg * c - e3 * h - g2 * h,
        g1 * c + g2 * h - e4 * r,
    };
}

inline std::array<double, 6> rhs_extended(const std::array<double, 6>& y, const schr::ModelParams& p)
{
    const auto [s, c, uc, h, uh, r] = y;
    const double lam = p.lambda_recruit, b = p.beta;
    const auto& e = p.eta;
    const auto& g = p.gamma;
    const double m1 = p.mu[0], m2 = p.mu[1], k1 = p.kappa[0], k2 = p.kappa[1], sg = p.sigma;
    return {
        lam - b * s * c - e[0] * s,
        b * s * c - e[1] * c - sg * c - g[0] * c - m1 * c + m2 * uc,
        m1 * c - m2 * uc - e[4] * uc - g[2] * uc,
        sg * c + k2 * uh - e[2] * h - g[1] * h - k1 * h,
        k1 * h - k2 * uh - e[5] * uh - g[3] * uh,
        g[0] * c + g[1] * h + g[2] * uc + g[3] * uh - e[3] * r,
    };
}

// Central-difference Jacobian of the library reaction term.
inline Eigen::MatrixXd fd_jacobian(const schr::CompartmentVector& y, const schr::ModelParams& p)
{
    const auto n = static_cast<Eigen::Index>(y.size());
    Eigen::MatrixXd j(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        const auto k = static_cast<std::size_t>(col);
        const double h = 1e-6 * std::max(1.0, std::abs(y[k]));
        schr::CompartmentVector up = y, down = y;
        up[k] += h;
        down[k] -= h;
        const auto fu = schr::reaction(up, p);
        const auto fd = schr::reaction(down, p);
        for (Eigen::Index row = 0; row < n; ++row) {
            const auto r = static_cast<std::size_t>(row);
            j(row, col) = (fu[r] - fd[r]) / (2.0 * h);
        }
    }
    return j;
}

// Brute-force spectral radius of the 2x2 next-generation block F V^{-1} on (C, U_c).
inline double ngm_block_radius(const schr::ModelParams& p)
{
    const double s0 = p.lambda_recruit / p.eta[0];
    Eigen::Matrix2d f;
    f << p.beta * s0, 0.0, 0.0, 0.0;
    Eigen::Matrix2d v;
    v << p.eta[1] + p.sigma + p.gamma[0] + p.mu[0], -p.mu[1], -p.mu[0], p.mu[1] + p.eta[4] + p.gamma[2];
    const Eigen::Matrix2d k = f * v.inverse();
    return k.eigenvalues().cwiseAbs().maxCoeff();
}

// det(X I - N) for the reduced (S, C, H) linearisation at (s, c), shifted by -d lambda.
inline std::complex<double> char_det(const schr::ModelParams& p, double s, double c, double lambda,
                                     std::complex<double> x)
{
    Eigen::Matrix3cd n = Eigen::Matrix3cd::Zero();
    n(0, 0) = -p.eta[0] - p.beta * c;
    n(0, 1) = -p.beta * s;
    n(1, 0) = p.beta * c;
    n(1, 1) = p.beta * s - (p.eta[1] + p.sigma + p.gamma[0]);
    n(2, 1) = p.sigma;
    n(2, 2) = -(p.eta[2] + p.gamma[1]);
    n.diagonal().array() -= p.d * lambda;
    return (x * Eigen::Matrix3cd::Identity() - n).determinant();
}

// Random parameter sets. Rates are drawn log-uniformly; beta is solved for a
// target reproduction number.
class ParamGen {
public:
    explicit ParamGen(std::uint64_t seed) : rng_(seed) {}

    double log_uniform(double lo, double hi)
    {
        std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
        return std::exp(u(rng_));
    }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    schr::ModelParams basic_with_r0(double r0)
    {
        schr::ModelParams p;
        p.lambda_recruit = log_uniform(0.1, 1000.0);
        for (std::size_t i = 0; i < 4; ++i) {
            p.eta[i] = log_uniform(0.002, 0.2);
        }
        p.sigma = log_uniform(1e-4, 0.5);
        p.gamma[0] = log_uniform(1e-3, 0.3);
        p.gamma[1] = log_uniform(1e-3, 0.3);
        p.d = log_uniform(1e-3, 1.0);
        p.beta = r0 * p.eta[0] * (p.eta[1] + p.sigma + p.gamma[0]) / p.lambda_recruit;
        return p;
    }

    schr::ModelParams extended_any()
    {
        schr::ModelParams p = basic_with_r0(uniform(0.2, 4.0));
        p.eta[4] = log_uniform(0.002, 0.2);
        p.eta[5] = log_uniform(0.002, 0.2);
        p.gamma[2] = log_uniform(1e-3, 0.3);
        p.gamma[3] = log_uniform(1e-3, 0.3);
        p.mu = {log_uniform(1e-3, 0.2), log_uniform(1e-3, 0.2)};
        p.kappa = {log_uniform(1e-3, 0.2), log_uniform(1e-3, 0.2)};
        return p;
    }

    schr::CompartmentVector state(schr::Model m, double scale)
    {
        schr::CompartmentVector y(m);
        for (double& v : y.values()) {
            v = uniform(0.0, scale);
        }
        return y;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace oracle
