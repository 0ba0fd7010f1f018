#include "pointillist/gram.hpp"

#include <stdexcept>
#include <vector>

#include "pointillist/unicode.hpp"

namespace pointillist {

Gram Gram::from_codepoints(std::span<const char32_t> cps) {
  if (cps.empty() || cps.size() > 3)
    throw std::invalid_argument("gram length must be 1..3 codepoints");
  Gram g;
  g.len_ = static_cast<std::uint8_t>(cps.size());
  for (std::size_t i = 0; i < cps.size(); ++i) g.cp_[i] = cps[i];
  return g;
}

std::optional<Gram> Gram::from_utf8(std::string_view utf8) {
  std::vector<char32_t> cps;
  if (!decode_utf8(utf8, cps)) return std::nullopt;
  if (cps.empty() || cps.size() > 3) return std::nullopt;
  return from_codepoints(cps);
}

std::string Gram::utf8() const {
  std::string out;
  for (char32_t c : codepoints()) append_utf8(out, c);
  return out;
}

}  // namespace pointillist
