#include "schr/presets.hpp"

#include "schr/errors.hpp"

#include <fmt/format.h>

#include <array>

namespace schr {

namespace {

constexpr std::array<std::string_view, 4> kNames{"basic-drug-free", "basic-endemic", "extended-drug-free",
                                                 "extended-endemic"};

// Shared rates: Lambda = 2.15, gamma1 = gamma2 = 0.05, d = 0.1, equal
// eta1..eta4. The regime switches eta, sigma and beta (and mu for the
// extended model).
ModelParams base_rates(bool endemic)
{
    ModelParams p;
    p.lambda_recruit = 2.15;
    p.beta = endemic ? 0.002 : 0.001;
    const double eta = endemic ? 0.01 : 0.03;
    p.eta = {eta, eta, eta, eta, 0.0, 0.0};
    p.sigma = endemic ? 0.2 : 0.001;
    p.gamma = {0.05, 0.05, 0.0, 0.0};
    p.d = 0.1;
    return p;
}

Scenario make(std::string_view name, Model model, bool endemic)
{
    Scenario s;
    s.name = std::string(name);
    s.outputs = {OutputKind::trajectory, OutputKind::diagnostics, OutputKind::stability, OutputKind::lyapunov,
                 OutputKind::plot};
    s.out_dir = "out/" + s.name;

    SimConfig& c = s.config;
    c.model = model;
    c.params = base_rates(endemic);
    if (model == Model::extended) {
        c.params.eta[4] = 0.01;
        c.params.eta[5] = 0.01;
        c.params.gamma[2] = 0.03;
        c.params.gamma[3] = 0.03;
        const double mu = endemic ? 0.01 : 0.05;
        c.params.mu = {mu, mu};
        c.params.kappa = {0.01, 0.01};
        c.initial_values = CompartmentVector(Model::extended, {30.0, 10.0, 3.0, 5.0, 3.0, 0.0});
    } else {
        c.initial_values = CompartmentVector(Model::basic, {30.0, 10.0, 5.0, 0.0});
    }
    c.grid = Grid1D(2.0, 40);
    c.dt = 1e-2;
    c.t_end = 500.0;
    c.stride = 100;
    c.stepper = Stepper::explicit_euler;
    c.steady_state_stop = false;
    return s;
}

} // namespace

std::span<const std::string_view> preset_names() noexcept { return kNames; }

Scenario preset(std::string_view name)
{
    if (name == kNames[0]) {
        return make(name, Model::basic, false);
    }
    if (name == kNames[1]) {
        return make(name, Model::basic, true);
    }
    if (name == kNames[2]) {
        return make(name, Model::extended, false);
    }
    if (name == kNames[3]) {
        return make(name, Model::extended, true);
    }
    throw ConfigError(fmt::format("unknown preset '{}' (known: {})", name, fmt::join(kNames, ", ")));
}

std::vector<Scenario> preset_catalog()
{
    std::vector<Scenario> out;
    for (auto n : kNames) {
        out.push_back(preset(n));
    }
    return out;
}

} // namespace schr
