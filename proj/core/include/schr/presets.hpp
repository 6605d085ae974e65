#pragma once

#include "schr/scenario.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace schr {

/// basic-drug-free, basic-endemic, extended-drug-free, extended-endemic.
std::span<const std::string_view> preset_names() noexcept;

/// Built-in scenario with the reference initial data and rates.
/// Throws ConfigError for an unknown name.
Scenario preset(std::string_view name);

std::vector<Scenario> preset_catalog();

} // namespace schr
