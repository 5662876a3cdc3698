#pragma once

#include <string>
#include <string_view>

// UTF-8 helpers over ICU character properties.
namespace emofrnn::unicode {

/// Decodes UTF-8; ill-formed bytes become U+FFFD.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view text);
void append(std::string& out, char32_t cp);

bool is_space(char32_t cp);
/// Decimal digits (general category Nd).
bool is_digit(char32_t cp);
/// Punctuation (general categories P*) plus the symbols $ ^ ~ + = < > |.
bool is_punctuation(char32_t cp);
/// Characters removed by the general cleaning pass.
inline bool is_deleted(char32_t cp) { return is_digit(cp) || is_punctuation(cp); }

/// Lowercases ASCII and, through ICU, every other cased letter.
std::string to_lower(std::string_view utf8);

}  // namespace emofrnn::unicode
