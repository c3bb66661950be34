#pragma once

// Scenario files for `bcsdn simulate`. See docs/formats.md.

#include <filesystem>

#include <json.hpp>

#include "bcsdn/simnet/simnet.hpp"

namespace bcsdn::simnet {

SimScenario scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SimScenario& scenario);

/// Loads and validates a scenario. Throws InputError.
SimScenario load_scenario(const std::filesystem::path& path);

MechanismKind parse_mechanism(std::string_view text);
Adversary parse_adversary(std::string_view text);

}  // namespace bcsdn::simnet
