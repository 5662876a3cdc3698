#include "emofrnn/unicode.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace emofrnn::unicode {

std::u32string decode(std::string_view utf8)
{
    std::u32string out;
    out.reserve(utf8.size());
    const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
    const auto length = static_cast<int32_t>(utf8.size());
    int32_t i = 0;
    while (i < length) {
        UChar32 c = 0;
        U8_NEXT(s, i, length, c);
        out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
    }
    return out;
}

void append(std::string& out, char32_t cp)
{
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(cp), error);
    if (error) {
        append(out, U'�');
        return;
    }
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

std::string encode(std::u32string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char32_t cp : text)
        append(out, cp);
    return out;
}

bool is_space(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)); }

bool is_digit(char32_t cp) { return u_isdigit(static_cast<UChar32>(cp)); }

bool is_punctuation(char32_t cp)
{
    switch (cp) {
    case U'$': case U'^': case U'~': case U'+': case U'=': case U'<': case U'>': case U'|':
        return true;
    default:
        return u_ispunct(static_cast<UChar32>(cp));
    }
}

std::string to_lower(std::string_view utf8)
{
    std::string out;
    out.reserve(utf8.size());
    for (char32_t cp : decode(utf8))
        append(out, static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp))));
    return out;
}

}  // namespace emofrnn::unicode
