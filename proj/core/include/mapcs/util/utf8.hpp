#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mapcs::util {

/// Decodes one code point starting at `pos`; advances `pos`. Invalid bytes
/// decode as U+FFFD and consume a single byte.
char32_t next_code_point(std::string_view s, std::size_t& pos);

void append_utf8(std::string& out, char32_t cp);

std::u32string to_u32(std::string_view s);
std::string to_utf8(std::u32string_view s);

/// Lowercases ASCII and Latin-1 letters (Á→á, Ñ→ñ, ...); diacritics are kept.
std::string fold_case(std::string_view s);

/// Uppercases the first code point if it is an ASCII or Latin-1 letter.
std::string capitalize_first(std::string_view s);

bool is_upper_initial(std::string_view s);

bool is_letter(char32_t cp);

}  // namespace mapcs::util
