#pragma once

// Records exchanged between the controller, the verification initiator and
// the verifying agents: the packet 5-tuple, flow rules, the transaction body
// and the signed proposal envelope, with their canonical encodings.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bcsdn/codec.hpp"
#include "bcsdn/crypto.hpp"

namespace bcsdn {

struct Ipv4 {
  std::uint32_t value = 0;

  static std::optional<Ipv4> parse(std::string_view text);
  std::string to_string() const;
  auto operator<=>(const Ipv4&) const = default;
};

struct MacAddress {
  std::array<std::uint8_t, 6> octets{};

  static std::optional<MacAddress> parse(std::string_view text);
  std::string to_string() const;
  auto operator<=>(const MacAddress&) const = default;
};

struct MacPair {
  MacAddress source;
  MacAddress destination;
  auto operator<=>(const MacPair&) const = default;
};

namespace ip_protocol {
inline constexpr std::uint8_t icmp = 1;
inline constexpr std::uint8_t tcp = 6;
inline constexpr std::uint8_t udp = 17;
}  // namespace ip_protocol

/// Accepts "tcp", "udp", "icmp" or a decimal protocol number.
std::optional<std::uint8_t> parse_protocol(std::string_view text);
std::string protocol_name(std::uint8_t proto);

struct Packet {
  Ipv4 source_ip;
  Ipv4 destination_ip;
  std::uint16_t source_port = 0;
  std::uint16_t destination_port = 0;
  std::uint8_t protocol = ip_protocol::tcp;
  std::optional<MacPair> mac;

  auto operator<=>(const Packet&) const = default;
};

struct FlowId {
  Digest value{};

  std::string hex() const { return to_hex(value); }
  std::string prefix() const { return hex().substr(0, 8); }
  auto operator<=>(const FlowId&) const = default;
};

/// One hop of the controller's forwarding plan. An empty next_hop delivers
/// to the locally attached host.
struct FlowRule {
  std::string switch_id;
  Packet match;
  std::string next_hop;
  std::uint16_t out_port = 0;
  std::uint16_t priority = 0;

  auto operator<=>(const FlowRule&) const = default;
};

struct Tx {
  std::string controller_id;
  FlowId fid;
  Packet packet;
  std::vector<FlowRule> rules;
  std::string chaincode_id;
  std::string endorsement_policy_id;
  std::uint64_t timestamp = 0;
  std::uint64_t topology_version = 0;

  bool operator==(const Tx&) const = default;
};

struct FlowProposal {
  std::string initiator;
  Tx tx;
  Digest con_sig{};

  bool operator==(const FlowProposal&) const = default;
};

void encode(Writer& w, const Packet& p);
void encode(Writer& w, const FlowRule& r);
void encode(Writer& w, const Tx& tx);
void encode(Writer& w, const FlowProposal& p);

Packet decode_packet(Reader& r);
FlowRule decode_rule(Reader& r);
Tx decode_tx(Reader& r);
Tx decode_tx(std::span<const std::uint8_t> bytes);

template <class T>
Bytes canonical_bytes(const T& record) {
  Writer w;
  encode(w, record);
  return std::move(w).take();
}

template <class T>
Digest canonical_hash(const T& record) {
  return sha256(canonical_bytes(record));
}

FlowId flow_id_of(const Packet& packet);

/// Number of value bytes in the canonical encoding of `tx`.
std::size_t value_byte_count(const Tx& tx);
/// Flip `xor_mask` into the `value_index`-th value byte of the encoding and
/// decode the result. Framing bytes are never touched, so this always
/// yields a decodable Tx that differs from the input in exactly one byte.
Tx mutate_value_byte(const Tx& tx, std::size_t value_index, std::uint8_t xor_mask);

}  // namespace bcsdn
