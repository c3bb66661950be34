#pragma once

// Small network used across conformance and protocol tests:
//
//   s1 - s2 - s3 - s4        hosts 10.0.k.10 on sk, 10.0.4.66 on s4 (denied)
//    \            /
//     ---- dmz ---           dmz is a forbidden node

#include <string>
#include <vector>

#include "bcsdn/conformance.hpp"
#include "bcsdn/flow.hpp"

namespace fixtures {

using namespace bcsdn;
using namespace bcsdn::conformance;

inline Ipv4 ip(const char* text) { return *Ipv4::parse(text); }

inline NetworkTopology topology() {
  NetworkTopology t;
  t.version = 3;
  t.nodes = {"s1", "s2", "s3", "s4", "dmz"};
  t.links = {make_link("s1", "s2"), make_link("s2", "s3"), make_link("s3", "s4"), make_link("s1", "dmz"),
             make_link("dmz", "s4")};
  t.hosts = {{ip("10.0.1.10"), "s1"}, {ip("10.0.2.10"), "s2"}, {ip("10.0.3.10"), "s3"},
             {ip("10.0.4.10"), "s4"}, {ip("10.0.4.66"), "s4"}};
  return t;
}

inline ConformancePolicy policy() {
  ConformancePolicy p;
  p.version = 1;
  EndpointRule allow;
  allow.source = *AddressPattern::parse("10.0.*.*");
  allow.destination = *AddressPattern::parse("10.0.*.*");
  allow.protocols = {ip_protocol::tcp, ip_protocol::udp};
  p.allowed_endpoint_pairs.push_back(allow);
  p.denied_endpoints.push_back(*parse_endpoint_pattern("10.0.4.66"));
  p.forbidden_nodes = {"dmz"};
  p.max_path_length = 4;
  return p;
}

inline Packet packet(const char* src = "10.0.1.10", const char* dst = "10.0.4.10", std::uint16_t sport = 40000) {
  Packet p;
  p.source_ip = ip(src);
  p.destination_ip = ip(dst);
  p.source_port = sport;
  p.destination_port = 443;
  p.protocol = ip_protocol::tcp;
  return p;
}

inline std::vector<FlowRule> rules(const std::vector<std::string>& path, const Packet& match) {
  std::vector<FlowRule> out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    FlowRule r;
    r.switch_id = path[i];
    r.match = match;
    r.next_hop = i + 1 < path.size() ? path[i + 1] : "";
    r.out_port = 1;
    r.priority = 100;
    out.push_back(r);
  }
  return out;
}

/// Unsigned proposal, for chaincode-level tests.
inline FlowProposal proposal(const std::vector<std::string>& path, const Packet& pkt = packet()) {
  FlowProposal p;
  p.initiator = "bca-s1";
  p.tx.controller_id = "controller";
  p.tx.packet = pkt;
  p.tx.fid = flow_id_of(pkt);
  p.tx.rules = rules(path, pkt);
  p.tx.chaincode_id = "flowconf";
  p.tx.endorsement_policy_id = "default";
  p.tx.topology_version = 3;
  return p;
}

inline const std::vector<std::string> kGoodPath{"s1", "s2", "s3", "s4"};

}  // namespace fixtures
