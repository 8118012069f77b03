#include <charconv>

#include "mtgender/aligner.hpp"
#include "mtgender/error.hpp"
#include "mtgender/text.hpp"

namespace mtgender {
namespace {

bool parse_index(std::string_view s, std::size_t& out) {
  if (s.empty() || s.front() == '+') return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::string render_pharaoh(const Alignment& alignment) {
  std::string out;
  for (const auto& link : alignment.links) {
    if (!out.empty()) out.push_back(' ');
    out += std::to_string(link.source);
    out.push_back('-');
    out += std::to_string(link.target);
  }
  return out;
}

Alignment parse_pharaoh(std::string_view line) {
  Alignment a;
  for (const auto& tok : text::split_whitespace(line)) {
    auto dash = tok.find('-');
    AlignmentLink link;
    if (dash == std::string::npos || !parse_index(std::string_view(tok).substr(0, dash), link.source) ||
        !parse_index(std::string_view(tok).substr(dash + 1), link.target)) {
      throw Error(ErrorCode::ParseError, "malformed alignment link '" + tok + "'");
    }
    a.links.insert(link);
  }
  return a;
}

bool is_valid(const Alignment& alignment, std::size_t source_len, std::size_t target_len) noexcept {
  std::set<std::size_t> targets;
  for (const auto& link : alignment.links) {
    if (link.source >= source_len || link.target >= target_len) return false;
    if (!targets.insert(link.target).second) return false;
  }
  return true;
}

std::optional<LocatedSubject> locate_subject(const Alignment& alignment, std::size_t subject_index,
                                             std::span<const std::string> target_tokens) {
  auto it = alignment.links.lower_bound(AlignmentLink{subject_index, 0});
  if (it == alignment.links.end() || it->source != subject_index) return std::nullopt;
  LocatedSubject located{it->target, std::nullopt};
  if (located.target_index > 0 && located.target_index - 1 < target_tokens.size()) {
    located.preceding_token = target_tokens[located.target_index - 1];
  }
  return located;
}

Bitext parse_bitext(std::string_view content, std::string_view source_name) {
  Bitext bitext;
  std::size_t line_no = 0;
  for (const auto& line : text::lines(content)) {
    ++line_no;
    std::string left, right;
    const std::string where = std::string(source_name) + ":" + std::to_string(line_no);
    if (!text::split_parallel(line, left, right)) {
      throw Error(ErrorCode::ParseError, where + ": expected exactly one ' ||| ' separator");
    }
    SentencePair pair{text::split_whitespace(left), text::split_whitespace(right)};
    if (pair.source.empty() || pair.target.empty()) {
      throw Error(ErrorCode::ParseError, where + ": empty side in bitext line");
    }
    bitext.push_back(std::move(pair));
  }
  return bitext;
}

Bitext read_bitext(const std::filesystem::path& path) {
  return parse_bitext(text::read_file(path), path.string());
}

std::string render_bitext(const Bitext& bitext) {
  std::string out;
  for (const auto& pair : bitext) {
    out += text::join(pair.source, " ");
    out += " ||| ";
    out += text::join(pair.target, " ");
    out += '\n';
  }
  return out;
}

}  // namespace mtgender
