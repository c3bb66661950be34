#include "bcsdn/protocol/identity.hpp"

namespace bcsdn::protocol {

Bytes KeyRegistry::derive_key(std::uint64_t seed, std::string_view id) {
  Writer w;
  w.u64(seed);
  w.str(id);
  const Digest d = sha256(w.bytes());
  return Bytes(d.begin(), d.end());
}

void KeyRegistry::enroll(std::string id, Bytes key, unsigned roles) {
  identities_[std::move(id)] = Identity{std::move(key), roles};
}

const Identity* KeyRegistry::find(std::string_view id) const {
  auto it = identities_.find(id);
  return it == identities_.end() ? nullptr : &it->second;
}

bool KeyRegistry::has_role(std::string_view id, Role role) const {
  const Identity* ident = find(id);
  return ident && (ident->roles & static_cast<unsigned>(role)) != 0;
}

Digest KeyRegistry::sign(std::string_view id, std::span<const std::uint8_t> message) const {
  const Identity* ident = find(id);
  if (!ident) throw ProtocolError(ProtocolError::Kind::unregistered_key, "no registered key for " + std::string(id));
  return hmac_sha256(ident->key, message);
}

bool KeyRegistry::verify(std::string_view id, std::span<const std::uint8_t> message, const Digest& signature) const {
  const Identity* ident = find(id);
  if (!ident) return false;
  return digest_equal(hmac_sha256(ident->key, message), signature);
}

}  // namespace bcsdn::protocol
