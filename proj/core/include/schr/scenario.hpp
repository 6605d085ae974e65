#pragma once

#include "schr/lyapunov.hpp"
#include "schr/rdsolver.hpp"
#include "schr/stability.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace schr {

enum class OutputKind { trajectory, diagnostics, stability, lyapunov, plot };
std::string_view to_string(OutputKind k) noexcept;
std::optional<OutputKind> parse_output_kind(std::string_view name) noexcept;

struct Scenario {
    std::string name;
    SimConfig config;
    std::vector<OutputKind> outputs;
    std::filesystem::path out_dir;
    int j_max = kDefaultModeCount;
    // Functional for the lyapunov output; chosen from the regime when empty.
    std::optional<LyapunovFunctional> functional;

    bool wants(OutputKind k) const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parses the INI-style scenario format:
///
///   [scenario]  name, model, outputs, out_dir, jmax, functional
///   [params]    lambda, beta, sigma, d, eta1..eta6, gamma1..gamma4, mu1, mu2, kappa1, kappa2
///   [grid]      length, cells
///   [time]      dt, t_end, stride, stepper, steady_state_stop, allow_unstable_dt, threads
///   [initial]   one key per compartment name, optional amplitude_<name> and mode
///
/// Unknown sections or keys are rejected. Extended-only parameters are
/// required for the extended model and optional (default 0) for the basic one.
/// Throws ConfigError naming the missing key, unknown key or broken constraint.
Scenario parse_scenario(std::istream& is, std::string_view source = "<input>");
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical config text; parse_scenario(render_scenario(s)) == s.
std::string render_scenario(const Scenario& s);

/// Checks every scenario invariant, throwing ConfigError.
void validate(const Scenario& s);

} // namespace schr
