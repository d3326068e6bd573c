#pragma once

#include <string>

#include "avstress/crosswalk.hpp"

namespace avstress {

// JSON scenario files mirror ScenarioConfig field names; omitted fields keep
// their defaults, unknown keys throw std::runtime_error.
ScenarioConfig scenario_from_json(const std::string& text);
ScenarioConfig load_scenario_file(const std::string& path);
std::string scenario_to_json(const ScenarioConfig& cfg);

}  // namespace avstress
