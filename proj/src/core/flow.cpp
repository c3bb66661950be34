#include "bcsdn/flow.hpp"

#include <charconv>
#include <stdexcept>

#include <fmt/format.h>

namespace bcsdn {

namespace {

template <class Int>
std::optional<Int> parse_int(std::string_view s, int base = 10) {
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

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

}  // namespace

std::optional<Ipv4> Ipv4::parse(std::string_view text) {
  const auto parts = split(text, '.');
  if (parts.size() != 4) return std::nullopt;
  std::uint32_t v = 0;
  for (auto part : parts) {
    if (part.size() > 3) return std::nullopt;
    auto octet = parse_int<unsigned>(part);
    if (!octet || *octet > 255) return std::nullopt;
    v = (v << 8) | *octet;
  }
  return Ipv4{v};
}

std::string Ipv4::to_string() const {
  return fmt::format("{}.{}.{}.{}", value >> 24, (value >> 16) & 0xff, (value >> 8) & 0xff, value & 0xff);
}

std::optional<MacAddress> MacAddress::parse(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 6) return std::nullopt;
  MacAddress m;
  for (std::size_t i = 0; i < 6; ++i) {
    if (parts[i].size() != 2) return std::nullopt;
    auto octet = parse_int<unsigned>(parts[i], 16);
    if (!octet) return std::nullopt;
    m.octets[i] = static_cast<std::uint8_t>(*octet);
  }
  return m;
}

std::string MacAddress::to_string() const {
  const auto& o = octets;
  return fmt::format("{:02x}:{:02x}:{:02x}:{:02x}:{:02x}:{:02x}", o[0], o[1], o[2], o[3], o[4], o[5]);
}

std::optional<std::uint8_t> parse_protocol(std::string_view text) {
  if (text == "tcp" || text == "TCP") return ip_protocol::tcp;
  if (text == "udp" || text == "UDP") return ip_protocol::udp;
  if (text == "icmp" || text == "ICMP") return ip_protocol::icmp;
  auto v = parse_int<unsigned>(text);
  if (!v || *v > 255) return std::nullopt;
  return static_cast<std::uint8_t>(*v);
}

std::string protocol_name(std::uint8_t proto) {
  switch (proto) {
    case ip_protocol::tcp: return "tcp";
    case ip_protocol::udp: return "udp";
    case ip_protocol::icmp: return "icmp";
    default: return std::to_string(proto);
  }
}

void encode(Writer& w, const Packet& p) {
  w.u32(p.source_ip.value);
  w.u32(p.destination_ip.value);
  w.u16(p.source_port);
  w.u16(p.destination_port);
  w.u8(p.protocol);
  w.flag(p.mac.has_value());
  if (p.mac) {
    w.raw(p.mac->source.octets);
    w.raw(p.mac->destination.octets);
  }
}

void encode(Writer& w, const FlowRule& r) {
  w.str(r.switch_id);
  encode(w, r.match);
  w.str(r.next_hop);
  w.u16(r.out_port);
  w.u16(r.priority);
}

void encode(Writer& w, const Tx& tx) {
  w.str(tx.controller_id);
  w.raw(tx.fid.value);
  encode(w, tx.packet);
  w.count(static_cast<std::uint32_t>(tx.rules.size()));
  for (const auto& r : tx.rules) encode(w, r);
  w.str(tx.chaincode_id);
  w.str(tx.endorsement_policy_id);
  w.u64(tx.timestamp);
  w.u64(tx.topology_version);
}

void encode(Writer& w, const FlowProposal& p) {
  w.str(p.initiator);
  encode(w, p.tx);
  w.raw(p.con_sig);
}

Packet decode_packet(Reader& r) {
  Packet p;
  p.source_ip.value = r.u32();
  p.destination_ip.value = r.u32();
  p.source_port = r.u16();
  p.destination_port = r.u16();
  p.protocol = r.u8();
  if (r.flag()) {
    MacPair m;
    r.raw(m.source.octets);
    r.raw(m.destination.octets);
    p.mac = m;
  }
  return p;
}

FlowRule decode_rule(Reader& r) {
  FlowRule rule;
  rule.switch_id = r.str();
  rule.match = decode_packet(r);
  rule.next_hop = r.str();
  rule.out_port = r.u16();
  rule.priority = r.u16();
  return rule;
}

Tx decode_tx(Reader& r) {
  Tx tx;
  tx.controller_id = r.str();
  r.raw(tx.fid.value);
  tx.packet = decode_packet(r);
  const auto n = r.count();
  for (std::uint32_t i = 0; i < n; ++i) {
    if (r.at_end()) throw DecodeError("rule count exceeds record");
    tx.rules.push_back(decode_rule(r));
  }
  tx.chaincode_id = r.str();
  tx.endorsement_policy_id = r.str();
  tx.timestamp = r.u64();
  tx.topology_version = r.u64();
  return tx;
}

Tx decode_tx(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  Tx tx = decode_tx(r);
  r.expect_end();
  return tx;
}

FlowId flow_id_of(const Packet& packet) { return FlowId{canonical_hash(packet)}; }

std::size_t value_byte_count(const Tx& tx) {
  Writer w;
  encode(w, tx);
  return w.value_offsets().size();
}

Tx mutate_value_byte(const Tx& tx, std::size_t value_index, std::uint8_t xor_mask) {
  if (xor_mask == 0) throw std::invalid_argument("xor mask must be non-zero");
  Writer w;
  encode(w, tx);
  const auto offsets = w.value_offsets();
  if (value_index >= offsets.size()) throw std::out_of_range("value byte index out of range");
  Bytes bytes = std::move(w).take();
  bytes[offsets[value_index]] ^= xor_mask;
  return decode_tx(bytes);
}

}  // namespace bcsdn
