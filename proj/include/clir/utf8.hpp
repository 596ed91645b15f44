#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace clir::utf8 {

/// Decodes one code point starting at `pos` and advances `pos`.
/// Malformed sequences decode as U+FFFD and consume one byte.
char32_t next(std::string_view s, std::size_t& pos);

void append(std::string& out, char32_t cp);

bool valid(std::string_view s);

/// Returns `bytes` unchanged when it is valid UTF-8, otherwise reinterprets
/// every byte as ISO-8859-1 and re-encodes.
std::string from_bytes(std::string_view bytes);

std::size_t length(std::string_view s);

// Case mapping and classes cover ASCII and the Latin-1 / Latin Extended-A
// blocks, which is what en/fr/it text needs.
char32_t to_lower(char32_t cp);
bool is_upper(char32_t cp);
bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
bool is_alnum(char32_t cp);
bool is_space(char32_t cp);
bool is_apostrophe(char32_t cp);

std::string to_lower(std::string_view s);

}  // namespace clir::utf8
