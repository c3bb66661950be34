#pragma once

// JSON loading and dumping for policies, topologies, packets and controller
// flow requests. Schemas are documented in docs/formats.md.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bcsdn/conformance.hpp"
#include "bcsdn/flow.hpp"

namespace bcsdn {

/// Malformed or invalid input file. The message names the offending field.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json load_json_file(const std::filesystem::path& path);

Packet packet_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Packet& packet);

FlowRule rule_from_json(const nlohmann::json& j, const Packet& default_match);
nlohmann::json to_json(const FlowRule& rule);

conformance::ConformancePolicy policy_from_json(const nlohmann::json& j);
nlohmann::json to_json(const conformance::ConformancePolicy& policy);

conformance::NetworkTopology topology_from_json(const nlohmann::json& j);
nlohmann::json to_json(const conformance::NetworkTopology& topology);

/// A controller's computed rules for one packet, as checked by `verify`.
struct FlowRequest {
  std::string controller_id = "controller";
  Packet packet;
  std::vector<FlowRule> rules;
  std::uint64_t topology_version = 0;
};

FlowRequest flow_request_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FlowRequest& request);

}  // namespace bcsdn
