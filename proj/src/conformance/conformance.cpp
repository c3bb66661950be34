#include "bcsdn/conformance.hpp"

#include <algorithm>
#include <charconv>

#include <fmt/format.h>

namespace bcsdn::conformance {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::optional<unsigned> parse_unsigned(std::string_view s, int base) {
  unsigned v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

template <std::size_t N>
bool parse_octets(std::string_view text, char sep, int base, std::size_t max_width,
                  std::array<std::optional<std::uint8_t>, N>& out) {
  const auto parts = split(text, sep);
  if (parts.size() != N) return false;
  for (std::size_t i = 0; i < N; ++i) {
    if (parts[i] == "*") {
      out[i] = std::nullopt;
      continue;
    }
    if (parts[i].size() > max_width) return false;
    auto v = parse_unsigned(parts[i], base);
    if (!v || *v > 255) return false;
    out[i] = static_cast<std::uint8_t>(*v);
  }
  return true;
}

Verdict reject(Reason reason, std::vector<ReadEntry> readset, const FlowId& fid) {
  Verdict v;
  v.assertion = false;
  v.reason = reason;
  v.readset = std::move(readset);
  v.writeset.push_back({flow_key(fid), fmt::format("FALSE:{}", to_string(reason))});
  return v;
}

bool endpoint_denied(const Packet& p, const ConformancePolicy& policy) {
  for (const auto& pattern : policy.denied_endpoints) {
    if (const auto* ip = std::get_if<AddressPattern>(&pattern)) {
      if (ip->matches(p.source_ip) || ip->matches(p.destination_ip)) return true;
    } else if (const auto* mac = std::get_if<MacPattern>(&pattern); mac && p.mac) {
      if (mac->matches(p.mac->source) || mac->matches(p.mac->destination)) return true;
    }
  }
  return false;
}

bool endpoint_allowed(const Packet& p, const ConformancePolicy& policy) {
  return std::any_of(policy.allowed_endpoint_pairs.begin(), policy.allowed_endpoint_pairs.end(),
                     [&](const EndpointRule& rule) { return rule.matches(p); });
}

void require_well_formed(const FlowProposal& proposal) {
  const Tx& tx = proposal.tx;
  if (tx.rules.empty())
    throw ConformanceError(ConformanceError::Kind::malformed_proposal, "proposal carries no flow rules");
  for (const auto& rule : tx.rules) {
    if (rule.switch_id.empty())
      throw ConformanceError(ConformanceError::Kind::malformed_proposal, "flow rule without a switch id");
  }
}

}  // namespace

std::optional<AddressPattern> AddressPattern::parse(std::string_view text) {
  AddressPattern p;
  if (text == "*" || text == "any") return p;
  if (!parse_octets(text, '.', 10, 3, p.octets)) return std::nullopt;
  return p;
}

bool AddressPattern::matches(Ipv4 ip) const {
  for (std::size_t i = 0; i < 4; ++i) {
    const auto octet = static_cast<std::uint8_t>(ip.value >> (8 * (3 - i)));
    if (octets[i] && *octets[i] != octet) return false;
  }
  return true;
}

std::string AddressPattern::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < 4; ++i) {
    if (i) s += '.';
    s += octets[i] ? std::to_string(*octets[i]) : "*";
  }
  return s;
}

std::optional<MacPattern> MacPattern::parse(std::string_view text) {
  MacPattern p;
  if (!parse_octets(text, ':', 16, 2, p.octets)) return std::nullopt;
  return p;
}

bool MacPattern::matches(const MacAddress& mac) const {
  for (std::size_t i = 0; i < 6; ++i)
    if (octets[i] && *octets[i] != mac.octets[i]) return false;
  return true;
}

std::string MacPattern::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < 6; ++i) {
    if (i) s += ':';
    s += octets[i] ? fmt::format("{:02x}", *octets[i]) : "*";
  }
  return s;
}

std::optional<EndpointPattern> parse_endpoint_pattern(std::string_view text) {
  if (text.find(':') != std::string_view::npos) {
    if (auto mac = MacPattern::parse(text)) return EndpointPattern{*mac};
    return std::nullopt;
  }
  if (auto ip = AddressPattern::parse(text)) return EndpointPattern{*ip};
  return std::nullopt;
}

std::string to_string(const EndpointPattern& pattern) {
  return std::visit([](const auto& p) { return p.to_string(); }, pattern);
}

bool EndpointRule::matches(const Packet& packet) const {
  if (!source.matches(packet.source_ip) || !destination.matches(packet.destination_ip)) return false;
  if (!ports.contains(packet.destination_port)) return false;
  return protocols.empty() ||
         std::find(protocols.begin(), protocols.end(), packet.protocol) != protocols.end();
}

Link make_link(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

void ConformancePolicy::validate() const {
  if (max_path_length < 1) throw std::invalid_argument("policy.max_path_length must be >= 1");
  for (const auto& rule : allowed_endpoint_pairs)
    if (rule.ports.lo > rule.ports.hi) throw std::invalid_argument("policy port range has lo > hi");
  for (const auto& [a, b] : forbidden_links)
    if (a == b) throw std::invalid_argument("policy.forbidden_links contains a self-loop");
}

void NetworkTopology::validate() const {
  for (const auto& [a, b] : links) {
    if (a == b) throw std::invalid_argument(fmt::format("topology link {}-{} is a self-loop", a, b));
    if (!nodes.contains(a) || !nodes.contains(b))
      throw std::invalid_argument(fmt::format("topology link {}-{} references an unknown node", a, b));
  }
  for (const auto& [ip, node] : hosts)
    if (!nodes.contains(node))
      throw std::invalid_argument(fmt::format("host {} attached to unknown node {}", ip.to_string(), node));
}

bool NetworkTopology::has_link(const std::string& a, const std::string& b) const {
  return links.contains(make_link(a, b));
}

std::optional<std::string> NetworkTopology::attachment(Ipv4 ip) const {
  auto it = hosts.find(ip);
  if (it == hosts.end()) return std::nullopt;
  return it->second;
}

std::string_view to_string(VerificationPlan plan) {
  return plan == VerificationPlan::simple ? "simple" : "complex";
}

std::string_view to_string(Reason reason) {
  switch (reason) {
    case Reason::none: return "none";
    case Reason::not_allowed: return "not-allowed";
    case Reason::denied_endpoint: return "denied-endpoint";
    case Reason::unknown_node: return "unknown-node";
    case Reason::loop: return "loop";
    case Reason::nonexistent_link: return "nonexistent-link";
    case Reason::wrong_endpoints: return "wrong-endpoints";
    case Reason::forbidden_node: return "forbidden-node";
    case Reason::forbidden_link: return "forbidden-link";
    case Reason::path_too_long: return "path-too-long";
  }
  return "?";
}

std::string_view to_string(ConformanceError::Kind kind) {
  switch (kind) {
    case ConformanceError::Kind::malformed_proposal: return "malformed-proposal";
    case ConformanceError::Kind::stale_topology: return "stale-topology";
    case ConformanceError::Kind::malformed_rule_set: return "malformed-rule-set";
  }
  return "?";
}

std::string flow_key(const FlowId& fid) { return "flow/" + fid.hex(); }

std::vector<std::string> induced_path(const Tx& tx) {
  std::vector<std::string> path;
  for (std::size_t k = 0; k < tx.rules.size(); ++k) {
    const auto& rule = tx.rules[k];
    const bool last = k + 1 == tx.rules.size();
    if (last ? !rule.next_hop.empty() : rule.next_hop != tx.rules[k + 1].switch_id)
      throw ConformanceError(ConformanceError::Kind::malformed_rule_set,
                             fmt::format("rule {} at {} does not chain to the next hop", k, rule.switch_id));
    path.push_back(rule.switch_id);
  }
  return path;
}

Verdict verify_simple(const FlowProposal& proposal, const ConformancePolicy& policy) {
  require_well_formed(proposal);
  const Tx& tx = proposal.tx;
  std::vector<ReadEntry> readset{{std::string(kPolicyKey), policy.version}};

  // Every distinct endpoint identifier the flow would carry: the packet and
  // each rule's match.
  std::vector<const Packet*> endpoints{&tx.packet};
  for (const auto& rule : tx.rules)
    if (rule.match != tx.packet) endpoints.push_back(&rule.match);

  for (const Packet* p : endpoints)
    if (endpoint_denied(*p, policy)) return reject(Reason::denied_endpoint, readset, tx.fid);
  for (const Packet* p : endpoints)
    if (!endpoint_allowed(*p, policy)) return reject(Reason::not_allowed, readset, tx.fid);

  Verdict v;
  v.assertion = true;
  v.readset = std::move(readset);
  v.writeset.push_back({flow_key(tx.fid), "TRUE"});
  return v;
}

Verdict verify_complex(const FlowProposal& proposal, const ConformancePolicy& policy,
                       const NetworkTopology& topology) {
  const Tx& tx = proposal.tx;
  if (tx.topology_version > topology.version)
    throw ConformanceError(ConformanceError::Kind::stale_topology,
                           fmt::format("proposal expects topology v{} but local snapshot is v{}",
                                       tx.topology_version, topology.version));

  Verdict simple = verify_simple(proposal, policy);
  if (!simple.assertion) return simple;

  const auto path = induced_path(tx);
  const auto& readset = simple.readset;

  for (const auto& node : path)
    if (!topology.nodes.contains(node)) return reject(Reason::unknown_node, readset, tx.fid);

  std::set<std::string> seen;
  for (const auto& node : path)
    if (!seen.insert(node).second) return reject(Reason::loop, readset, tx.fid);

  for (std::size_t k = 0; k + 1 < path.size(); ++k)
    if (!topology.has_link(path[k], path[k + 1])) return reject(Reason::nonexistent_link, readset, tx.fid);

  const auto ingress = topology.attachment(tx.packet.source_ip);
  const auto egress = topology.attachment(tx.packet.destination_ip);
  if (!ingress || !egress || path.front() != *ingress || path.back() != *egress)
    return reject(Reason::wrong_endpoints, readset, tx.fid);

  for (const auto& node : path)
    if (policy.forbidden_nodes.contains(node)) return reject(Reason::forbidden_node, readset, tx.fid);

  for (std::size_t k = 0; k + 1 < path.size(); ++k)
    if (policy.forbidden_links.contains(make_link(path[k], path[k + 1])))
      return reject(Reason::forbidden_link, readset, tx.fid);

  if (path.size() - 1 > policy.max_path_length) return reject(Reason::path_too_long, readset, tx.fid);

  return simple;
}

Verdict invoke_chaincode(const FlowProposal& proposal, VerificationPlan plan, const ConformancePolicy& policy,
                         const NetworkTopology& topology) {
  if (plan == VerificationPlan::simple) return verify_simple(proposal, policy);
  return verify_complex(proposal, policy, topology);
}

}  // namespace bcsdn::conformance
