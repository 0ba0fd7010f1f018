#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pointillist {

/// Decodes UTF-8 into Unicode scalar values. Rejects overlong forms,
/// surrogates, and codepoints past U+10FFFF. Returns false on the first
/// invalid byte; `out` then holds the codepoints decoded so far.
bool decode_utf8(std::string_view in, std::vector<char32_t>& out);

bool is_valid_utf8(std::string_view in);

void append_utf8(std::string& out, char32_t cp);

std::string to_utf8(std::u32string_view cps);

}  // namespace pointillist
