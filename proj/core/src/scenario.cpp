#include "schr/scenario.hpp"

#include "schr/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace schr {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

// Flattened "section.key" -> value view of the parsed file, tracking which
// keys were consumed so leftovers can be reported as unknown.
class KeyTable {
public:
    KeyTable(const pt::ptree& tree, std::string_view source) : source_(source)
    {
        for (const auto& [section, body] : tree) {
            if (body.empty() && !body.data().empty()) {
                throw ConfigError(fmt::format("{}: key '{}' must live inside a [section]", source_, section));
            }
            for (const auto& [key, value] : body) {
                entries_[section + "." + key] = trim(value.data());
            }
        }
    }

    std::optional<std::string> take(const std::string& key)
    {
        const auto it = entries_.find(key);
        if (it == entries_.end()) {
            return std::nullopt;
        }
        used_.insert(key);
        return it->second;
    }

    std::string require(const std::string& key)
    {
        auto v = take(key);
        if (!v) {
            throw ConfigError(fmt::format("{}: missing required key '{}'", source_, key));
        }
        return *v;
    }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt)
    {
        auto v = fallback ? take(key) : std::optional<std::string>(require(key));
        if (!v) {
            return *fallback;
        }
        double out = 0.0;
        const char* end = v->data() + v->size();
        const auto [ptr, ec] = std::from_chars(v->data(), end, out);
        if (ec != std::errc() || ptr != end) {
            throw ConfigError(fmt::format("{}: key '{}' is not a number: '{}'", source_, key, *v));
        }
        return out;
    }

    int integer(const std::string& key, int fallback)
    {
        auto v = take(key);
        if (!v) {
            return fallback;
        }
        int out = 0;
        const char* end = v->data() + v->size();
        const auto [ptr, ec] = std::from_chars(v->data(), end, out);
        if (ec != std::errc() || ptr != end) {
            throw ConfigError(fmt::format("{}: key '{}' is not an integer: '{}'", source_, key, *v));
        }
        return out;
    }

    bool boolean(const std::string& key, bool fallback)
    {
        auto v = take(key);
        if (!v) {
            return fallback;
        }
        if (*v == "true") {
            return true;
        }
        if (*v == "false") {
            return false;
        }
        throw ConfigError(fmt::format("{}: key '{}' must be true or false (got '{}')", source_, key, *v));
    }

    void reject_unused() const
    {
        for (const auto& [key, value] : entries_) {
            if (!used_.contains(key)) {
                throw ConfigError(fmt::format("{}: unknown key '{}'", source_, key));
            }
        }
    }

    const std::string& source() const { return source_; }

private:
    std::string source_;
    std::map<std::string, std::string> entries_;
    std::set<std::string> used_;
};

std::vector<std::string> split_list(std::string_view s)
{
    std::vector<std::string> out;
    std::stringstream ss{std::string(s)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

constexpr std::array<OutputKind, 5> kAllOutputs{OutputKind::trajectory, OutputKind::diagnostics,
                                               OutputKind::stability, OutputKind::lyapunov, OutputKind::plot};

} // namespace

std::string_view to_string(OutputKind k) noexcept
{
    switch (k) {
    case OutputKind::trajectory:
        return "trajectory";
    case OutputKind::diagnostics:
        return "diagnostics";
    case OutputKind::stability:
        return "stability";
    case OutputKind::lyapunov:
        return "lyapunov";
    case OutputKind::plot:
        break;
    }
    return "plot";
}

std::optional<OutputKind> parse_output_kind(std::string_view name) noexcept
{
    for (auto k : kAllOutputs) {
        if (to_string(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

bool Scenario::wants(OutputKind k) const { return std::find(outputs.begin(), outputs.end(), k) != outputs.end(); }

void validate(const Scenario& s)
{
    if (s.name.empty()) {
        throw ConfigError("scenario name must be nonempty");
    }
    if (s.outputs.empty()) {
        throw ConfigError("scenario must request at least one output");
    }
    if (s.j_max < 0) {
        throw ConfigError(fmt::format("jmax must be non-negative (got {})", s.j_max));
    }
    try {
        validate(s.config);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    } catch (const ContractViolation& e) {
        throw ConfigError(e.what());
    }
}

Scenario parse_scenario(std::istream& is, std::string_view source)
{
    pt::ptree tree;
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(fmt::format("{}: {}", source, e.what()));
    }
    KeyTable keys(tree, source);

    Scenario s;
    s.name = keys.require("scenario.name");
    const std::string model = keys.require("scenario.model");
    if (model == "basic") {
        s.config.model = Model::basic;
    } else if (model == "extended") {
        s.config.model = Model::extended;
    } else {
        throw ConfigError(fmt::format("{}: scenario.model must be 'basic' or 'extended' (got '{}')", source, model));
    }
    const bool extended = s.config.model == Model::extended;

    if (auto outputs = keys.take("scenario.outputs")) {
        for (const auto& item : split_list(*outputs)) {
            const auto kind = parse_output_kind(item);
            if (!kind) {
                throw ConfigError(fmt::format("{}: unknown output '{}' in scenario.outputs", source, item));
            }
            s.outputs.push_back(*kind);
        }
    } else {
        s.outputs.assign(kAllOutputs.begin(), kAllOutputs.end());
    }
    s.out_dir = keys.take("scenario.out_dir").value_or("out/" + s.name);
    s.j_max = keys.integer("scenario.jmax", kDefaultModeCount);
    if (auto f = keys.take("scenario.functional")) {
        s.functional = parse_functional(*f);
        if (!s.functional) {
            throw ConfigError(fmt::format("{}: unknown functional '{}'", source, *f));
        }
    }

    ModelParams& p = s.config.params;
    p.lambda_recruit = keys.number("params.lambda");
    p.beta = keys.number("params.beta");
    p.sigma = keys.number("params.sigma");
    p.d = keys.number("params.d");
    for (std::size_t i = 0; i < 6; ++i) {
        const auto key = fmt::format("params.eta{}", i + 1);
        p.eta[i] = (i < 4 || extended) ? keys.number(key) : keys.number(key, 0.0);
    }
    for (std::size_t i = 0; i < 4; ++i) {
        const auto key = fmt::format("params.gamma{}", i + 1);
        p.gamma[i] = (i < 2 || extended) ? keys.number(key) : keys.number(key, 0.0);
    }
    for (std::size_t i = 0; i < 2; ++i) {
        const auto mu_key = fmt::format("params.mu{}", i + 1);
        const auto kappa_key = fmt::format("params.kappa{}", i + 1);
        p.mu[i] = extended ? keys.number(mu_key) : keys.number(mu_key, 0.0);
        p.kappa[i] = extended ? keys.number(kappa_key) : keys.number(kappa_key, 0.0);
    }

    const double length = keys.number("grid.length", 2.0);
    const int cells = keys.integer("grid.cells", 40);
    try {
        s.config.grid = Grid1D(length, cells);
    } catch (const DomainError& e) {
        throw ConfigError(fmt::format("{}: {}", source, e.what()));
    }

    s.config.dt = keys.number("time.dt", 1e-2);
    s.config.t_end = keys.number("time.t_end", 500.0);
    s.config.stride = keys.integer("time.stride", 100);
    if (auto stepper = keys.take("time.stepper")) {
        const auto parsed = parse_stepper(*stepper);
        if (!parsed) {
            throw ConfigError(
                fmt::format("{}: time.stepper must be 'explicit' or 'imex' (got '{}')", source, *stepper));
        }
        s.config.stepper = *parsed;
    }
    s.config.steady_state_stop = keys.boolean("time.steady_state_stop", false);
    s.config.allow_unstable_dt = keys.boolean("time.allow_unstable_dt", false);
    s.config.threads = keys.integer("time.threads", 1);

    s.config.initial_values = CompartmentVector(s.config.model);
    const auto names = compartment_names(s.config.model);
    for (std::size_t i = 0; i < names.size(); ++i) {
        const std::string name(names[i]);
        s.config.initial_values[i] = keys.number("initial." + name);
        s.config.perturbation_amplitude[i] = keys.number("initial.amplitude_" + name, 0.0);
    }
    s.config.perturbation_mode = keys.integer("initial.mode", 1);

    keys.reject_unused();
    try {
        validate(s);
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}: {}", source, e.what()));
    }
    for (double v : s.config.initial_values.values()) {
        if (!std::isfinite(v) || v < 0.0) {
            throw ConfigError(fmt::format("{}: initial values must be finite and non-negative", source));
        }
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("cannot open scenario file '{}'", path.string()));
    }
    return parse_scenario(in, path.string());
}

namespace {

// Shortest text that parses back to the same double.
std::string shortest(double v) { return fmt::format("{}", v); }

} // namespace

std::string render_scenario(const Scenario& s)
{
    const auto& c = s.config;
    const auto& p = c.params;
    const bool extended = c.model == Model::extended;
    std::string out;
    auto line = [&out](std::string_view key, const std::string& value) {
        out += fmt::format("{} = {}\n", key, value);
    };

    out += "[scenario]\n";
    line("name", s.name);
    line("model", std::string(model_name(c.model)));
    std::vector<std::string> outputs;
    for (auto k : s.outputs) {
        outputs.emplace_back(to_string(k));
    }
    line("outputs", fmt::format("{}", fmt::join(outputs, ", ")));
    line("out_dir", s.out_dir.generic_string());
    line("jmax", std::to_string(s.j_max));
    if (s.functional) {
        line("functional", std::string(to_string(*s.functional)));
    }

    out += "\n[params]\n";
    line("lambda", shortest(p.lambda_recruit));
    line("beta", shortest(p.beta));
    line("sigma", shortest(p.sigma));
    line("d", shortest(p.d));
    const std::size_t eta_count = extended ? 6 : 4;
    for (std::size_t i = 0; i < eta_count; ++i) {
        line(fmt::format("eta{}", i + 1), shortest(p.eta[i]));
    }
    const std::size_t gamma_count = extended ? 4 : 2;
    for (std::size_t i = 0; i < gamma_count; ++i) {
        line(fmt::format("gamma{}", i + 1), shortest(p.gamma[i]));
    }
    if (extended) {
        line("mu1", shortest(p.mu[0]));
        line("mu2", shortest(p.mu[1]));
        line("kappa1", shortest(p.kappa[0]));
        line("kappa2", shortest(p.kappa[1]));
    }

    out += "\n[grid]\n";
    line("length", shortest(c.grid.length()));
    line("cells", std::to_string(c.grid.cells()));

    out += "\n[time]\n";
    line("dt", shortest(c.dt));
    line("t_end", shortest(c.t_end));
    line("stride", std::to_string(c.stride));
    line("stepper", std::string(to_string(c.stepper)));
    line("steady_state_stop", c.steady_state_stop ? "true" : "false");
    line("allow_unstable_dt", c.allow_unstable_dt ? "true" : "false");
    line("threads", std::to_string(c.threads));

    out += "\n[initial]\n";
    const auto names = compartment_names(c.model);
    for (std::size_t i = 0; i < names.size(); ++i) {
        line(names[i], shortest(c.initial_values[i]));
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (c.perturbation_amplitude[i] != 0.0) {
            line(fmt::format("amplitude_{}", names[i]), shortest(c.perturbation_amplitude[i]));
        }
    }
    line("mode", std::to_string(c.perturbation_mode));
    return out;
}

} // namespace schr
