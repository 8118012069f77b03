#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mtgender::text {

/// Unicode NFC normalization of a UTF-8 string.
std::string nfc(std::string_view utf8);

/// NFC followed by full Unicode lower-casing (root locale).
std::string fold(std::string_view utf8);

std::vector<std::string> split_whitespace(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split(std::string_view s, std::string_view sep);
std::string_view trim(std::string_view s) noexcept;
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Number of Unicode code points in a UTF-8 string.
std::size_t codepoint_count(std::string_view utf8) noexcept;
/// Last code point of a UTF-8 string, or 0 when empty.
char32_t last_codepoint(std::string_view utf8) noexcept;

struct Tokenization {
  std::vector<std::string> tokens;
  /// word_start[k] is the index in `tokens` of the first piece of whitespace word k.
  std::vector<std::size_t> word_start;
};

/// Whitespace split, then trailing punctuation (. , ! ? ; : and the Arabic
/// comma, semicolon and question mark) peeled off into standalone tokens.
Tokenization tokenize(std::string_view sentence);

/// Splits "left ||| right" on the exact separator " ||| ".
/// Returns false when the separator does not occur exactly once.
bool split_parallel(std::string_view line, std::string& left, std::string& right);

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view bytes);

/// Reads a whole file; throws Error(Io) when it cannot be opened.
std::string read_file(const std::filesystem::path& path);
/// Splits on '\n', dropping one trailing empty line and any '\r' before '\n'.
std::vector<std::string> lines(std::string_view content);
void write_file(const std::filesystem::path& path, std::string_view content);

// Backslash escapes for tab, newline, carriage return and backslash.
std::string escape_field(std::string_view s);
std::string unescape_field(std::string_view s);

}  // namespace mtgender::text
