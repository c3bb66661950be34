#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace bcsdn::protocol {

/// Versioned key/value world state. Absent keys read as version 0.
class StatusDatabase {
 public:
  struct Entry {
    std::uint64_t version = 0;
    std::string value;
  };

  std::uint64_t version(std::string_view key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.version;
  }

  std::optional<std::string> value(std::string_view key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.value;
  }

  /// Pin a key to an externally managed version (policy snapshots).
  void set_version(std::string key, std::uint64_t version, std::string value = {}) {
    entries_[std::move(key)] = Entry{version, std::move(value)};
  }

  /// Write bumps the key's version by one.
  void write(const std::string& key, std::string value) {
    auto& e = entries_[key];
    ++e.version;
    e.value = std::move(value);
  }

  const std::map<std::string, Entry, std::less<>>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, Entry, std::less<>> entries_;
};

}  // namespace bcsdn::protocol
