#include "bcsdn/conformance_io.hpp"

#include <fstream>

#include <fmt/format.h>

namespace bcsdn {

using nlohmann::json;
namespace cf = conformance;

namespace {

const json& require_field(const json& j, const char* name, const char* ctx) {
  if (!j.is_object()) throw InputError(fmt::format("{}: expected an object", ctx));
  auto it = j.find(name);
  if (it == j.end()) throw InputError(fmt::format("{}.{}: missing field", ctx, name));
  return *it;
}

template <class T>
T get_as(const json& v, const char* name, const char* ctx) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw InputError(fmt::format("{}.{}: wrong type", ctx, name));
  }
}

template <class T>
T field(const json& j, const char* name, const char* ctx) {
  return get_as<T>(require_field(j, name, ctx), name, ctx);
}

template <class T>
T field_or(const json& j, const char* name, const char* ctx, T fallback) {
  if (!j.is_object() || !j.contains(name)) return fallback;
  return get_as<T>(j.at(name), name, ctx);
}

Ipv4 ip_field(const json& j, const char* name, const char* ctx) {
  const auto text = field<std::string>(j, name, ctx);
  auto ip = Ipv4::parse(text);
  if (!ip) throw InputError(fmt::format("{}.{}: invalid IPv4 address '{}'", ctx, name, text));
  return *ip;
}

std::uint16_t port_field(const json& j, const char* name, const char* ctx) {
  const auto v = field<long long>(j, name, ctx);
  if (v < 0 || v > 65535) throw InputError(fmt::format("{}.{}: port {} outside 0-65535", ctx, name, v));
  return static_cast<std::uint16_t>(v);
}

std::uint8_t protocol_value(const json& v, const char* ctx) {
  std::optional<std::uint8_t> proto;
  if (v.is_string()) proto = parse_protocol(v.get<std::string>());
  else if (v.is_number_unsigned() && v.get<unsigned>() <= 255) proto = static_cast<std::uint8_t>(v.get<unsigned>());
  if (!proto) throw InputError(fmt::format("{}.protocol: unknown protocol {}", ctx, v.dump()));
  return *proto;
}

cf::PortRange ports_value(const json& v, const char* ctx) {
  if (v.is_string() && (v == "any" || v == "*")) return {};
  auto check = [ctx](long long x) {
    if (x < 0 || x > 65535) throw InputError(fmt::format("{}.ports: port {} outside 0-65535", ctx, x));
    return static_cast<std::uint16_t>(x);
  };
  if (v.is_number_integer()) {
    const auto p = check(v.get<long long>());
    return {p, p};
  }
  if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
    cf::PortRange r{check(v[0].get<long long>()), check(v[1].get<long long>())};
    if (r.lo > r.hi) throw InputError(fmt::format("{}.ports: lo > hi", ctx));
    return r;
  }
  throw InputError(fmt::format("{}.ports: expected \"any\", a port, or [lo, hi]", ctx));
}

cf::Link link_value(const json& v, const char* ctx) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_string() || !v[1].is_string())
    throw InputError(fmt::format("{}: link must be a pair of node ids", ctx));
  return cf::make_link(v[0].get<std::string>(), v[1].get<std::string>());
}

}  // namespace

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("{}: cannot open file", path.string()));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

Packet packet_from_json(const json& j) {
  constexpr const char* ctx = "packet";
  Packet p;
  p.source_ip = ip_field(j, "source_ip", ctx);
  p.destination_ip = ip_field(j, "destination_ip", ctx);
  p.source_port = port_field(j, "source_port", ctx);
  p.destination_port = port_field(j, "destination_port", ctx);
  p.protocol = protocol_value(require_field(j, "protocol", ctx), ctx);
  const bool has_src = j.contains("source_mac");
  const bool has_dst = j.contains("destination_mac");
  if (has_src != has_dst) throw InputError("packet: source_mac and destination_mac must be given together");
  if (has_src) {
    auto src = MacAddress::parse(field<std::string>(j, "source_mac", ctx));
    auto dst = MacAddress::parse(field<std::string>(j, "destination_mac", ctx));
    if (!src || !dst) throw InputError("packet: invalid MAC address");
    p.mac = MacPair{*src, *dst};
  }
  return p;
}

json to_json(const Packet& p) {
  json j{{"source_ip", p.source_ip.to_string()},
         {"destination_ip", p.destination_ip.to_string()},
         {"source_port", p.source_port},
         {"destination_port", p.destination_port},
         {"protocol", protocol_name(p.protocol)}};
  if (p.mac) {
    j["source_mac"] = p.mac->source.to_string();
    j["destination_mac"] = p.mac->destination.to_string();
  }
  return j;
}

FlowRule rule_from_json(const json& j, const Packet& default_match) {
  constexpr const char* ctx = "rule";
  FlowRule r;
  r.switch_id = field<std::string>(j, "switch", ctx);
  r.next_hop = field_or<std::string>(j, "next_hop", ctx, "");
  r.out_port = static_cast<std::uint16_t>(field_or<unsigned>(j, "out_port", ctx, 0));
  r.priority = static_cast<std::uint16_t>(field_or<unsigned>(j, "priority", ctx, 100));
  r.match = j.contains("match") ? packet_from_json(j.at("match")) : default_match;
  return r;
}

json to_json(const FlowRule& r) {
  return json{{"switch", r.switch_id},
              {"next_hop", r.next_hop},
              {"out_port", r.out_port},
              {"priority", r.priority},
              {"match", to_json(r.match)}};
}

cf::ConformancePolicy policy_from_json(const json& j) {
  constexpr const char* ctx = "policy";
  cf::ConformancePolicy policy;
  policy.version = field_or<std::uint64_t>(j, "version", ctx, 1);
  for (const auto& a : field<json>(j, "allowed_endpoint_pairs", ctx)) {
    constexpr const char* actx = "policy.allowed_endpoint_pairs[]";
    cf::EndpointRule rule;
    const auto src = field<std::string>(a, "source", actx);
    const auto dst = field<std::string>(a, "destination", actx);
    auto sp = cf::AddressPattern::parse(src);
    auto dp = cf::AddressPattern::parse(dst);
    if (!sp || !dp) throw InputError(fmt::format("{}: invalid address pattern", actx));
    rule.source = *sp;
    rule.destination = *dp;
    if (a.contains("ports")) rule.ports = ports_value(a.at("ports"), actx);
    if (a.contains("protocols")) {
      for (const auto& p : a.at("protocols")) {
        if (p == "any" || p == "*") {
          rule.protocols.clear();
          break;
        }
        rule.protocols.push_back(protocol_value(p, actx));
      }
    }
    policy.allowed_endpoint_pairs.push_back(std::move(rule));
  }
  for (const auto& d : field_or<json>(j, "denied_endpoints", ctx, json::array())) {
    if (!d.is_string()) throw InputError("policy.denied_endpoints: entries must be strings");
    auto pattern = cf::parse_endpoint_pattern(d.get<std::string>());
    if (!pattern) throw InputError(fmt::format("policy.denied_endpoints: invalid pattern {}", d.dump()));
    policy.denied_endpoints.push_back(*pattern);
  }
  for (const auto& n : field_or<json>(j, "forbidden_nodes", ctx, json::array()))
    policy.forbidden_nodes.insert(get_as<std::string>(n, "forbidden_nodes", ctx));
  for (const auto& l : field_or<json>(j, "forbidden_links", ctx, json::array()))
    policy.forbidden_links.insert(link_value(l, "policy.forbidden_links"));
  const auto max_len = field_or<long long>(j, "max_path_length", ctx, 16);
  if (max_len < 1) throw InputError("policy.max_path_length: must be >= 1");
  policy.max_path_length = static_cast<std::uint32_t>(max_len);
  try {
    policy.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return policy;
}

json to_json(const cf::ConformancePolicy& policy) {
  json allowed = json::array();
  for (const auto& r : policy.allowed_endpoint_pairs) {
    json protos = json::array();
    for (auto p : r.protocols) protos.push_back(protocol_name(p));
    if (protos.empty()) protos.push_back("any");
    allowed.push_back({{"source", r.source.to_string()},
                       {"destination", r.destination.to_string()},
                       {"ports", json::array({r.ports.lo, r.ports.hi})},
                       {"protocols", protos}});
  }
  json denied = json::array();
  for (const auto& d : policy.denied_endpoints) denied.push_back(cf::to_string(d));
  json links = json::array();
  for (const auto& [a, b] : policy.forbidden_links) links.push_back({a, b});
  return json{{"version", policy.version},
              {"allowed_endpoint_pairs", allowed},
              {"denied_endpoints", denied},
              {"forbidden_nodes", policy.forbidden_nodes},
              {"forbidden_links", links},
              {"max_path_length", policy.max_path_length}};
}

cf::NetworkTopology topology_from_json(const json& j) {
  constexpr const char* ctx = "topology";
  cf::NetworkTopology t;
  t.version = field_or<std::uint64_t>(j, "version", ctx, 1);
  for (const auto& n : field<json>(j, "nodes", ctx)) t.nodes.insert(get_as<std::string>(n, "nodes", ctx));
  for (const auto& l : field<json>(j, "links", ctx)) t.links.insert(link_value(l, "topology.links"));
  const json hosts = field_or<json>(j, "hosts", ctx, json::object());
  for (const auto& [addr, node] : hosts.items()) {
    auto ip = Ipv4::parse(addr);
    if (!ip) throw InputError(fmt::format("topology.hosts: invalid IPv4 address '{}'", addr));
    t.hosts[*ip] = get_as<std::string>(node, "hosts", ctx);
  }
  try {
    t.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return t;
}

json to_json(const cf::NetworkTopology& t) {
  json links = json::array();
  for (const auto& [a, b] : t.links) links.push_back({a, b});
  json hosts = json::object();
  for (const auto& [ip, node] : t.hosts) hosts[ip.to_string()] = node;
  return json{{"version", t.version}, {"nodes", t.nodes}, {"links", links}, {"hosts", hosts}};
}

FlowRequest flow_request_from_json(const json& j) {
  constexpr const char* ctx = "flow";
  FlowRequest req;
  req.controller_id = field_or<std::string>(j, "controller", ctx, "controller");
  req.packet = packet_from_json(require_field(j, "packet", ctx));
  req.topology_version = field_or<std::uint64_t>(j, "topology_version", ctx, 0);
  for (const auto& r : field<json>(j, "rules", ctx)) req.rules.push_back(rule_from_json(r, req.packet));
  return req;
}

json to_json(const FlowRequest& req) {
  json rules = json::array();
  for (const auto& r : req.rules) rules.push_back(to_json(r));
  return json{{"controller", req.controller_id},
              {"packet", to_json(req.packet)},
              {"topology_version", req.topology_version},
              {"rules", rules}};
}

}  // namespace bcsdn
