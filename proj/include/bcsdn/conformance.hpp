#pragma once

// Flow conformance checking: the smart contract the verifying agents run
// against a proposed flow. Two depths are supported. The simple plan checks
// the flow's endpoint identifiers against allow/deny rules; the complex plan
// additionally walks the hop sequence induced by the controller's rules over
// the local topology snapshot.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "bcsdn/flow.hpp"

namespace bcsdn::conformance {

/// Dotted quad where each octet is a number or `*`. A bare `*` or `any`
/// matches every address.
struct AddressPattern {
  std::array<std::optional<std::uint8_t>, 4> octets{};

  static std::optional<AddressPattern> parse(std::string_view text);
  bool matches(Ipv4 ip) const;
  std::string to_string() const;
  bool operator==(const AddressPattern&) const = default;
};

/// Colon-separated hex octets, each a value or `*`.
struct MacPattern {
  std::array<std::optional<std::uint8_t>, 6> octets{};

  static std::optional<MacPattern> parse(std::string_view text);
  bool matches(const MacAddress& mac) const;
  std::string to_string() const;
  bool operator==(const MacPattern&) const = default;
};

using EndpointPattern = std::variant<AddressPattern, MacPattern>;

std::optional<EndpointPattern> parse_endpoint_pattern(std::string_view text);
std::string to_string(const EndpointPattern& pattern);

struct PortRange {
  std::uint16_t lo = 0;
  std::uint16_t hi = 65535;

  bool contains(std::uint16_t port) const { return lo <= port && port <= hi; }
  bool operator==(const PortRange&) const = default;
};

/// Allowed (source, destination) pair. `ports` constrains the destination
/// port; an empty protocol set allows any protocol.
struct EndpointRule {
  AddressPattern source;
  AddressPattern destination;
  PortRange ports;
  std::vector<std::uint8_t> protocols;

  bool matches(const Packet& packet) const;
  bool operator==(const EndpointRule&) const = default;
};

using Link = std::pair<std::string, std::string>;

/// Undirected link with endpoints in lexicographic order.
Link make_link(std::string a, std::string b);

struct ConformancePolicy {
  std::uint64_t version = 1;
  std::vector<EndpointRule> allowed_endpoint_pairs;
  std::vector<EndpointPattern> denied_endpoints;
  std::set<std::string> forbidden_nodes;
  std::set<Link> forbidden_links;
  std::uint32_t max_path_length = 16;

  void validate() const;
  bool operator==(const ConformancePolicy&) const = default;
};

struct NetworkTopology {
  std::uint64_t version = 1;
  std::set<std::string> nodes;
  std::set<Link> links;
  /// Host address -> node the host is attached to.
  std::map<Ipv4, std::string> hosts;

  void validate() const;
  bool has_link(const std::string& a, const std::string& b) const;
  std::optional<std::string> attachment(Ipv4 ip) const;
  bool operator==(const NetworkTopology&) const = default;
};

enum class VerificationPlan { simple, complex };

std::string_view to_string(VerificationPlan plan);

enum class Reason {
  none,
  not_allowed,
  denied_endpoint,
  unknown_node,
  loop,
  nonexistent_link,
  wrong_endpoints,
  forbidden_node,
  forbidden_link,
  path_too_long,
};

std::string_view to_string(Reason reason);

struct ReadEntry {
  std::string key;
  std::uint64_t version = 0;
  auto operator<=>(const ReadEntry&) const = default;
};

struct WriteEntry {
  std::string key;
  std::string value;
  auto operator<=>(const WriteEntry&) const = default;
};

struct Verdict {
  bool assertion = false;
  Reason reason = Reason::none;
  std::vector<ReadEntry> readset;
  std::vector<WriteEntry> writeset;

  bool operator==(const Verdict&) const = default;
};

class ConformanceError : public std::runtime_error {
 public:
  enum class Kind { malformed_proposal, stale_topology, malformed_rule_set };

  ConformanceError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

std::string_view to_string(ConformanceError::Kind kind);

inline constexpr std::string_view kPolicyKey = "policy";
std::string flow_key(const FlowId& fid);

/// Switch sequence induced by the ordered rule list. Throws
/// ConformanceError(malformed_rule_set) when hops do not chain.
std::vector<std::string> induced_path(const Tx& tx);

Verdict verify_simple(const FlowProposal& proposal, const ConformancePolicy& policy);
Verdict verify_complex(const FlowProposal& proposal, const ConformancePolicy& policy,
                       const NetworkTopology& topology);
Verdict invoke_chaincode(const FlowProposal& proposal, VerificationPlan plan, const ConformancePolicy& policy,
                         const NetworkTopology& topology);

}  // namespace bcsdn::conformance
