#include "mtgender/text.hpp"

#include <openssl/evp.h>
#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include <array>
#include <fstream>
#include <sstream>

#include "mtgender/error.hpp"

namespace mtgender::text {
namespace {

const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw Error(ErrorCode::Io, std::string("ICU NFC normalizer unavailable: ") + u_errorName(status));
  }
  return *n;
}

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Length in bytes of the last UTF-8 code point of a non-empty string.
std::size_t last_cp_len(std::string_view s) noexcept {
  std::size_t n = 1;
  while (n < s.size() && n < 4 && (static_cast<unsigned char>(s[s.size() - n]) & 0xC0) == 0x80) ++n;
  return n;
}

bool is_terminal_punct(std::string_view cp) noexcept {
  static constexpr std::array<std::string_view, 9> kPunct = {
      ".", ",", "!", "?", ";", ":", "\xD8\x8C" /* ، */, "\xD8\x9B" /* ؛ */, "\xD8\x9F" /* ؟ */};
  for (auto p : kPunct) {
    if (cp == p) return true;
  }
  return false;
}

}  // namespace

std::string nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const auto& n = nfc_instance();
  auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  if (n.isNormalized(src, status) && U_SUCCESS(status)) return std::string(utf8);
  status = U_ZERO_ERROR;
  icu::UnicodeString out = n.normalize(src, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::ParseError, std::string("NFC normalization failed: ") + u_errorName(status));
  }
  std::string result;
  out.toUTF8String(result);
  return result;
}

std::string fold(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  icu::UnicodeString normalized = nfc_instance().normalize(src, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::ParseError, std::string("NFC normalization failed: ") + u_errorName(status));
  }
  normalized.toLower(icu::Locale::getRoot());
  std::string result;
  normalized.toUTF8String(result);
  return result;
}

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string> split(std::string_view s, std::string_view sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + sep.size();
  }
}

std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::size_t codepoint_count(std::string_view utf8) noexcept {
  std::size_t n = 0;
  for (char c : utf8) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

char32_t last_codepoint(std::string_view utf8) noexcept {
  if (utf8.empty()) return 0;
  auto len = last_cp_len(utf8);
  auto bytes = utf8.substr(utf8.size() - len);
  auto b0 = static_cast<unsigned char>(bytes[0]);
  char32_t cp;
  if (len == 1) return b0;
  if (len == 2) cp = b0 & 0x1F;
  else if (len == 3) cp = b0 & 0x0F;
  else cp = b0 & 0x07;
  for (std::size_t i = 1; i < len; ++i) cp = (cp << 6) | (static_cast<unsigned char>(bytes[i]) & 0x3F);
  return cp;
}

Tokenization tokenize(std::string_view sentence) {
  Tokenization out;
  for (const auto& word : split_whitespace(sentence)) {
    out.word_start.push_back(out.tokens.size());
    std::string_view rest = word;
    std::vector<std::string> trailing;
    while (!rest.empty()) {
      auto len = last_cp_len(rest);
      auto cp = rest.substr(rest.size() - len);
      if (!is_terminal_punct(cp)) break;
      trailing.emplace_back(cp);
      rest.remove_suffix(len);
    }
    if (!rest.empty()) out.tokens.emplace_back(rest);
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) out.tokens.push_back(std::move(*it));
  }
  return out;
}

bool split_parallel(std::string_view line, std::string& left, std::string& right) {
  static constexpr std::string_view kSep = " ||| ";
  auto pos = line.find(kSep);
  if (pos == std::string_view::npos) return false;
  if (line.find(kSep, pos + kSep.size()) != std::string_view::npos) return false;
  left.assign(line.substr(0, pos));
  right.assign(line.substr(pos + kSep.size()));
  return true;
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::Io, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(std::string_view content) {
  std::vector<std::string> out;
  if (content.empty()) return out;
  out = split(content, '\n');
  if (!out.empty() && out.back().empty()) out.pop_back();
  for (auto& l : out) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
  }
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::string escape_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      char n = s[++i];
      switch (n) {
        case 't': out.push_back('\t'); break;
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case '\\': out.push_back('\\'); break;
        default: out.push_back('\\'); out.push_back(n);
      }
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

}  // namespace mtgender::text
