#include "bcsdn/codec.hpp"

#include <bit>
#include <limits>

namespace bcsdn {

void Writer::push(std::uint64_t v, int width, bool framing) {
  for (int i = width - 1; i >= 0; --i) {
    bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    framing_.push_back(framing);
  }
}

void Writer::u8(std::uint8_t v) { push(v, 1, false); }
void Writer::u16(std::uint16_t v) { push(v, 2, false); }
void Writer::u32(std::uint32_t v) { push(v, 4, false); }
void Writer::u64(std::uint64_t v) { push(v, 8, false); }
void Writer::f64(double v) { push(std::bit_cast<std::uint64_t>(v), 8, false); }

void Writer::raw(std::span<const std::uint8_t> data) {
  for (auto b : data) push(b, 1, false);
}

void Writer::str(std::string_view s) {
  count(static_cast<std::uint32_t>(s.size()));
  for (char c : s) push(static_cast<std::uint8_t>(c), 1, false);
}

void Writer::blob(std::span<const std::uint8_t> data) {
  count(static_cast<std::uint32_t>(data.size()));
  raw(data);
}

void Writer::count(std::uint32_t n) { push(n, 4, true); }
void Writer::flag(bool present) { push(present ? 1 : 0, 1, true); }

std::vector<std::size_t> Writer::value_offsets() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < framing_.size(); ++i)
    if (!framing_[i]) out.push_back(i);
  return out;
}

std::uint64_t Reader::pull(int width) {
  if (data_.size() - pos_ < static_cast<std::size_t>(width)) throw DecodeError("truncated record");
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v = (v << 8) | data_[pos_++];
  return v;
}

std::uint8_t Reader::u8() { return static_cast<std::uint8_t>(pull(1)); }
std::uint16_t Reader::u16() { return static_cast<std::uint16_t>(pull(2)); }
std::uint32_t Reader::u32() { return static_cast<std::uint32_t>(pull(4)); }
std::uint64_t Reader::u64() { return pull(8); }
double Reader::f64() { return std::bit_cast<double>(pull(8)); }

void Reader::raw(std::span<std::uint8_t> out) {
  if (data_.size() - pos_ < out.size()) throw DecodeError("truncated record");
  for (auto& b : out) b = data_[pos_++];
}

std::string Reader::str() {
  const std::uint32_t n = count();
  if (data_.size() - pos_ < n) throw DecodeError("string length exceeds record");
  std::string s(reinterpret_cast<const char*>(data_.data() + pos_), n);
  pos_ += n;
  return s;
}

Bytes Reader::blob() {
  const std::uint32_t n = count();
  if (data_.size() - pos_ < n) throw DecodeError("blob length exceeds record");
  Bytes b(data_.begin() + static_cast<std::ptrdiff_t>(pos_), data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
  pos_ += n;
  return b;
}

std::uint32_t Reader::count() { return u32(); }

bool Reader::flag() {
  const auto v = u8();
  if (v > 1) throw DecodeError("presence flag must be 0 or 1");
  return v == 1;
}

void Reader::expect_end() const {
  if (!at_end()) throw DecodeError("trailing bytes after record");
}

}  // namespace bcsdn
