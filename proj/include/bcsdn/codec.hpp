#pragma once

// Canonical binary serialization: fixed field order, big-endian fixed-width
// integers, u32 length prefixes on byte strings and lists. See
// docs/serialization.md for the byte layout of every record.
//
// The writer also remembers which bytes are framing (length prefixes, list
// counts, presence flags) and which carry field values. Value bytes can be
// flipped without making the record undecodable, which is what the tamper
// adversary relies on.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bcsdn {

using Bytes = std::vector<std::uint8_t>;

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Writer {
 public:
  void u8(std::uint8_t v);
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f64(double v);
  void raw(std::span<const std::uint8_t> data);
  void str(std::string_view s);
  void blob(std::span<const std::uint8_t> data);

  // Framing bytes.
  void count(std::uint32_t n);
  void flag(bool present);

  const Bytes& bytes() const noexcept { return bytes_; }
  Bytes take() && { return std::move(bytes_); }
  /// Offsets of value (non-framing) bytes, ascending.
  std::vector<std::size_t> value_offsets() const;

 private:
  void push(std::uint64_t v, int width, bool framing);

  Bytes bytes_;
  std::vector<bool> framing_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  double f64();
  void raw(std::span<std::uint8_t> out);
  std::string str();
  Bytes blob();
  std::uint32_t count();
  bool flag();

  bool at_end() const noexcept { return pos_ == data_.size(); }
  void expect_end() const;

 private:
  std::uint64_t pull(int width);

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace bcsdn
