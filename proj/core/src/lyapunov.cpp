#include "schr/lyapunov.hpp"

#include "schr/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace schr {

namespace {

void require_model(const Field& f, Model m, std::string_view who)
{
    if (f.model() != m) {
        throw ContractViolation(fmt::format("{}: expected a {} field", who, model_name(m)));
    }
}

void require_matching(const Field& f, const EquilibriumPoint& e, std::string_view who)
{
    if (e.point.model() != f.model()) {
        throw ContractViolation(fmt::format("{}: equilibrium layout does not match the field", who));
    }
}

double volterra(double u, double u_star) { return u - u_star - u_star * std::log(u / u_star); }

double min_margin(const ModelParams& p, const LyapunovWeights& a)
{
    const auto c = free_functional_coefficients(p, a);
    return -*std::max_element(c.begin(), c.end());
}

} // namespace

double lyapunov_g1(const Field& f)
{
    require_model(f, Model::basic, "lyapunov_g1");
    return trapezoid(f.component(idx::basic::C), f.grid());
}

double lyapunov_g2(const Field& f, const EquilibriumPoint& e)
{
    require_model(f, Model::basic, "lyapunov_g2");
    require_matching(f, e, "lyapunov_g2");
    using namespace idx::basic;
    const double s_star = e.point[S];
    const double c_star = e.point[C];
    if (!(s_star > 0.0) || !(c_star > 0.0)) {
        throw DomainError("lyapunov_g2: equilibrium must have positive S* and C*");
    }
    const auto s = f.component(S);
    const auto c = f.component(C);
    std::vector<double> integrand(f.nodes());
    for (std::size_t j = 0; j < integrand.size(); ++j) {
        if (!(s[j] > 0.0) || !(c[j] > 0.0)) {
            throw DomainError(fmt::format("lyapunov_g2: S and C must be positive (node {}: S = {}, C = {})", j, s[j],
                                          c[j]));
        }
        integrand[j] = volterra(s[j], s_star) + volterra(c[j], c_star);
    }
    return trapezoid(integrand, f.grid());
}

double lyapunov_extended_free(const Field& f, const LyapunovWeights& alphas)
{
    require_model(f, Model::extended, "lyapunov_extended_free");
    for (double a : alphas) {
        if (!(a > 0.0)) {
            throw DomainError(fmt::format("lyapunov_extended_free: weights must be positive (got {})", a));
        }
    }
    using namespace idx::extended;
    std::vector<double> integrand(f.nodes());
    for (std::size_t j = 0; j < integrand.size(); ++j) {
        integrand[j] = f.component(C)[j] + alphas[0] * f.component(Uc)[j] + alphas[1] * f.component(H)[j] +
                       alphas[2] * f.component(Uh)[j];
    }
    return trapezoid(integrand, f.grid());
}

std::array<double, 4> free_functional_coefficients(const ModelParams& p, const LyapunovWeights& a)
{
    const double s_free = p.lambda_recruit / p.eta[0];
    return {
        p.beta * s_free - (cocaine_outflow(p) + p.mu[0]) + a[0] * p.mu[0] + a[1] * p.sigma,
        p.mu[1] - a[0] * treated_cocaine_outflow(p),
        -a[1] * (heroin_outflow(p) + p.kappa[0]) + a[2] * p.kappa[0],
        a[1] * p.kappa[1] - a[2] * treated_heroin_outflow(p),
    };
}

std::optional<LyapunovWeights> choose_alphas(const ModelParams& p)
{
    validate(p, Model::extended);

    constexpr double lo = -4.0;
    constexpr double hi = 3.0;
    constexpr int coarse = 36;
    const double cell = (hi - lo) / (coarse - 1);

    LyapunovWeights best{};
    double best_margin = -std::numeric_limits<double>::infinity();
    std::array<double, 3> best_log{};
    for (int i = 0; i < coarse; ++i) {
        for (int j = 0; j < coarse; ++j) {
            for (int k = 0; k < coarse; ++k) {
                const std::array<double, 3> lg{lo + i * cell, lo + j * cell, lo + k * cell};
                const LyapunovWeights a{std::pow(10.0, lg[0]), std::pow(10.0, lg[1]), std::pow(10.0, lg[2])};
                const double m = min_margin(p, a);
                if (m > best_margin) {
                    best_margin = m;
                    best = a;
                    best_log = lg;
                }
            }
        }
    }

    // Local refinement: shrink a box around the incumbent.
    constexpr int fine = 11;
    double half = cell;
    for (int round = 0; round < 12; ++round) {
        const std::array<double, 3> centre = best_log;
        for (int i = 0; i < fine; ++i) {
            for (int j = 0; j < fine; ++j) {
                for (int k = 0; k < fine; ++k) {
                    const double step = 2.0 * half / (fine - 1);
                    const std::array<double, 3> lg{centre[0] - half + i * step, centre[1] - half + j * step,
                                                   centre[2] - half + k * step};
                    const LyapunovWeights a{std::pow(10.0, lg[0]), std::pow(10.0, lg[1]), std::pow(10.0, lg[2])};
                    const double m = min_margin(p, a);
                    if (m > best_margin) {
                        best_margin = m;
                        best = a;
                        best_log = lg;
                    }
                }
            }
        }
        half *= 0.5;
    }

    if (!(best_margin > 0.0)) {
        return std::nullopt;
    }
    return best;
}

double lyapunov_extended_endemic(const Field& f, const EquilibriumPoint& e)
{
    require_model(f, Model::extended, "lyapunov_extended_endemic");
    require_matching(f, e, "lyapunov_extended_endemic");
    using namespace idx::extended;
    constexpr std::array<std::size_t, 5> tracked{S, C, Uc, H, Uh};
    std::vector<double> integrand(f.nodes(), 0.0);
    for (std::size_t i : tracked) {
        const auto u = f.component(i);
        for (std::size_t j = 0; j < integrand.size(); ++j) {
            const double dev = u[j] - e.point[i];
            integrand[j] += dev * dev;
        }
    }
    return trapezoid(integrand, f.grid());
}

std::string_view to_string(LyapunovFunctional f) noexcept
{
    switch (f) {
    case LyapunovFunctional::g1:
        return "g1";
    case LyapunovFunctional::g2:
        return "g2";
    case LyapunovFunctional::extended_free:
        return "extended-free";
    case LyapunovFunctional::extended_endemic:
        break;
    }
    return "extended-endemic";
}

std::optional<LyapunovFunctional> parse_functional(std::string_view name) noexcept
{
    for (auto f : {LyapunovFunctional::g1, LyapunovFunctional::g2, LyapunovFunctional::extended_free,
                   LyapunovFunctional::extended_endemic}) {
        if (to_string(f) == name) {
            return f;
        }
    }
    return std::nullopt;
}

double LyapunovTrace::fraction_nonpositive(double after) const
{
    std::size_t total = 0;
    std::size_t good = 0;
    for (std::size_t k = 0; k < slopes.size(); ++k) {
        if (times[k] < after) {
            continue;
        }
        ++total;
        if (!flagged[k] && !flagged[k + 1] && slopes[k] <= 0.0) {
            ++good;
        }
    }
    return total == 0 ? 1.0 : static_cast<double>(good) / static_cast<double>(total);
}

LyapunovTrace dissipation_report(const Trajectory& traj, LyapunovFunctional functional, const LyapunovContext& ctx)
{
    const bool needs_equilibrium =
        functional == LyapunovFunctional::g2 || functional == LyapunovFunctional::extended_endemic;
    if (needs_equilibrium && !ctx.equilibrium) {
        throw ContractViolation(fmt::format("dissipation_report: {} needs an equilibrium", to_string(functional)));
    }
    if (functional == LyapunovFunctional::extended_free && !ctx.alphas) {
        throw ContractViolation("dissipation_report: extended-free needs weights");
    }

    LyapunovTrace trace;
    trace.functional = functional;
    trace.times = traj.times;
    trace.values.reserve(traj.size());
    trace.flagged.reserve(traj.size());
    for (const Field& f : traj.fields) {
        try {
            double v = 0.0;
            switch (functional) {
            case LyapunovFunctional::g1:
                v = lyapunov_g1(f);
                break;
            case LyapunovFunctional::g2:
                v = lyapunov_g2(f, *ctx.equilibrium);
                break;
            case LyapunovFunctional::extended_free:
                v = lyapunov_extended_free(f, *ctx.alphas);
                break;
            case LyapunovFunctional::extended_endemic:
                v = lyapunov_extended_endemic(f, *ctx.equilibrium);
                break;
            }
            trace.values.push_back(v);
            trace.flagged.push_back(!std::isfinite(v));
        } catch (const DomainError&) {
            trace.values.push_back(std::numeric_limits<double>::quiet_NaN());
            trace.flagged.push_back(true);
        }
    }
    for (std::size_t k = 0; k + 1 < trace.values.size(); ++k) {
        trace.slopes.push_back((trace.values[k + 1] - trace.values[k]) / (trace.times[k + 1] - trace.times[k]));
    }
    return trace;
}

} // namespace schr
