#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace bcsdn {

using Digest = std::array<std::uint8_t, 32>;

inline constexpr Digest kZeroDigest{};

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view text);
Digest hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> message);

/// Constant-time comparison.
bool digest_equal(const Digest& a, const Digest& b) noexcept;

std::string to_hex(std::span<const std::uint8_t> data);

}  // namespace bcsdn
