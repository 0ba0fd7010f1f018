#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace pointillist {

/// An n-character sequence (n in 1..3) of Unicode scalar values.
/// Cheap to copy; ordered lexicographically by codepoint, which is the
/// tie-break order used everywhere downstream.
class Gram {
 public:
  Gram() = default;

  /// Builds a gram from 1..3 codepoints. Throws std::invalid_argument on
  /// any other length.
  static Gram from_codepoints(std::span<const char32_t> cps);

  /// Decodes UTF-8; returns nullopt if the bytes are invalid UTF-8 or the
  /// codepoint count is outside 1..3.
  static std::optional<Gram> from_utf8(std::string_view utf8);

  int size() const { return len_; }
  char32_t at(int i) const { return cp_[static_cast<std::size_t>(i)]; }
  std::span<const char32_t> codepoints() const { return {cp_.data(), static_cast<std::size_t>(len_)}; }

  std::string utf8() const;

  friend std::strong_ordering operator<=>(const Gram& a, const Gram& b) {
    for (int i = 0; i < a.len_ && i < b.len_; ++i) {
      if (auto c = a.cp_[static_cast<std::size_t>(i)] <=> b.cp_[static_cast<std::size_t>(i)]; c != 0)
        return c;
    }
    return a.len_ <=> b.len_;
  }
  friend bool operator==(const Gram& a, const Gram& b) {
    return a.len_ == b.len_ && a.cp_ == b.cp_;
  }

 private:
  std::array<char32_t, 3> cp_{};
  std::uint8_t len_ = 0;
};

struct GramHash {
  std::size_t operator()(const Gram& g) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (char32_t c : g.codepoints()) {
      h ^= static_cast<std::uint64_t>(c);
      h *= 1099511628211ull;
    }
    h ^= static_cast<std::uint64_t>(g.size());
    h *= 1099511628211ull;
    return static_cast<std::size_t>(h);
  }
};

}  // namespace pointillist
