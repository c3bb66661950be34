#pragma once

// Static key registry standing in for the certificate authority. Signatures
// are HMAC-SHA-256 over canonical bytes with the signer's registered key:
// simulation grade, but any modified byte fails verification.

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bcsdn/codec.hpp"
#include "bcsdn/crypto.hpp"

namespace bcsdn::protocol {

class ProtocolError : public std::runtime_error {
 public:
  enum class Kind { empty_rules, unregistered_key, ineligible_verifier, mixed_fid, chain_gap, invalid_policy };

  ProtocolError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

enum class Role : unsigned {
  controller = 1u << 0,
  initiator = 1u << 1,
  verifier = 1u << 2,
};

constexpr unsigned operator|(Role a, Role b) { return static_cast<unsigned>(a) | static_cast<unsigned>(b); }
constexpr unsigned operator|(unsigned a, Role b) { return a | static_cast<unsigned>(b); }

struct Identity {
  Bytes key;
  unsigned roles = 0;
};

class KeyRegistry {
 public:
  /// Deterministic per-identity key: SHA-256 of (seed, id).
  static Bytes derive_key(std::uint64_t seed, std::string_view id);

  void enroll(std::string id, Bytes key, unsigned roles);
  void enroll(std::string id, std::uint64_t seed, unsigned roles) { enroll(id, derive_key(seed, id), roles); }

  bool contains(std::string_view id) const { return find(id) != nullptr; }
  bool has_role(std::string_view id, Role role) const;

  /// Throws ProtocolError(unregistered_key) for unknown ids.
  Digest sign(std::string_view id, std::span<const std::uint8_t> message) const;
  /// False for unknown ids or mismatching signatures.
  bool verify(std::string_view id, std::span<const std::uint8_t> message, const Digest& signature) const;

 private:
  const Identity* find(std::string_view id) const;

  std::map<std::string, Identity, std::less<>> identities_;
};

}  // namespace bcsdn::protocol
