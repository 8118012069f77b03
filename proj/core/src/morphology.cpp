#include "mtgender/morphology.hpp"

#include <algorithm>

#include "mtgender/error.hpp"
#include "mtgender/languages.hpp"
#include "mtgender/text.hpp"

namespace mtgender {
namespace {

constexpr char32_t kTaMarbuta = 0x0629;

std::optional<GrammaticalGender> parse_grammatical_gender(std::string_view s) {
  if (s == "female") return GrammaticalGender::Female;
  if (s == "male") return GrammaticalGender::Male;
  if (s == "neutral") return GrammaticalGender::Neutral;
  return std::nullopt;
}

PredictedGender as_prediction(GrammaticalGender g) {
  switch (g) {
    case GrammaticalGender::Female: return PredictedGender::Female;
    case GrammaticalGender::Male: return PredictedGender::Male;
    case GrammaticalGender::Neutral: return PredictedGender::Neutral;
  }
  return PredictedGender::Unknown;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Removes Arabic short-vowel marks and tatweel, which may follow a final ta marbuta.
std::string strip_arabic_marks(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (static_cast<unsigned char>(s[i]) == 0xD9 && i + 1 < s.size()) {
      const auto b = static_cast<unsigned char>(s[i + 1]);
      if ((b >= 0x8B && b <= 0x9F) || b == 0xB0 || b == 0x80) {
        ++i;
        continue;
      }
    }
    out.push_back(s[i]);
  }
  return out;
}

// Splits an elided article ("l'ingénieure") into determiner and noun.
std::optional<std::pair<std::string, std::string>> split_elision(std::string_view word) {
  for (std::string_view apostrophe : {std::string_view("'"), std::string_view("\xE2\x80\x99")}) {
    auto pos = word.find(apostrophe);
    if (pos != std::string_view::npos && pos > 0 && pos + apostrophe.size() < word.size()) {
      return std::make_pair(std::string(word.substr(0, pos)) + "'", std::string(word.substr(pos + apostrophe.size())));
    }
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(Evidence e) noexcept {
  switch (e) {
    case Evidence::Determiner: return "determiner";
    case Evidence::Suffix: return "suffix";
    case Evidence::Lexicon: return "lexicon";
    case Evidence::TaMarbuta: return "ta_marbuta";
    case Evidence::None: return "none";
  }
  return "none";
}

RulePack parse_rule_pack(std::string_view language, std::string_view content, std::string_view source_name) {
  RulePack pack;
  pack.language = std::string(language);
  std::string section;
  std::unordered_set<std::string> seen_suffixes;
  std::size_t line_no = 0;
  for (const auto& raw : text::lines(content)) {
    ++line_no;
    const std::string where = std::string(source_name) + ":" + std::to_string(line_no);
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorCode::ParseError, where + ": unterminated section header");
      section = std::string(line.substr(1, line.size() - 2));
      if (section != "determiners" && section != "suffixes" && section != "lexicon" && section != "neutral" &&
          section != "prefixes") {
        throw Error(ErrorCode::ParseError, where + ": unknown section [" + section + "]");
      }
      continue;
    }
    if (section.empty()) throw Error(ErrorCode::ParseError, where + ": row outside of any section");

    auto cols = text::split(line, '\t');
    const std::string key = text::fold(text::trim(cols[0]));
    if (key.empty()) throw Error(ErrorCode::ParseError, where + ": empty token");

    if (section == "prefixes" || section == "neutral") {
      if (cols.size() > 2 || (cols.size() == 2 && text::trim(cols[1]) != "neutral" && section == "neutral") ||
          (cols.size() == 2 && section == "prefixes")) {
        throw Error(ErrorCode::ParseError, where + ": unexpected column in [" + section + "]");
      }
      if (section == "prefixes") {
        pack.prefixes.push_back(key);
      } else {
        if (pack.lexicon.count(key) != 0 || !pack.neutral.insert(key).second) {
          throw Error(ErrorCode::DuplicateKey, where + ": '" + key + "' listed twice");
        }
      }
      continue;
    }

    if (cols.size() != 2) throw Error(ErrorCode::ParseError, where + ": expected token<TAB>gender");
    auto gender = parse_grammatical_gender(text::trim(cols[1]));
    if (!gender) {
      throw Error(ErrorCode::ParseError, where + ": gender '" + cols[1] + "' is not female, male or neutral");
    }
    if (section == "determiners") {
      if (!pack.determiners.emplace(key, *gender).second) {
        throw Error(ErrorCode::DuplicateKey, where + ": determiner '" + key + "' listed twice");
      }
    } else if (section == "suffixes") {
      if (!seen_suffixes.insert(key).second) {
        throw Error(ErrorCode::DuplicateKey, where + ": suffix '" + key + "' listed twice");
      }
      pack.suffixes.emplace_back(key, *gender);
    } else {
      if (pack.neutral.count(key) != 0 || !pack.lexicon.emplace(key, *gender).second) {
        throw Error(ErrorCode::DuplicateKey, where + ": lexicon entry '" + key + "' listed twice");
      }
    }
  }
  std::stable_sort(pack.suffixes.begin(), pack.suffixes.end(), [](const auto& a, const auto& b) {
    return text::codepoint_count(a.first) > text::codepoint_count(b.first);
  });
  return pack;
}

RulePack load_rule_pack(std::string_view language, const std::filesystem::path& path) {
  return parse_rule_pack(language, text::read_file(path), path.string());
}

GenderPrediction predict_gender(const RulePack& pack, std::string_view noun, std::optional<std::string_view> determiner) {
  const bool arabic = pack.language == "ar";
  std::string word = text::fold(noun);
  if (arabic) word = strip_arabic_marks(word);

  std::optional<GrammaticalGender> det;
  if (determiner) {
    auto it = pack.determiners.find(text::fold(*determiner));
    if (it != pack.determiners.end()) det = it->second;
  }
  if (auto elided = split_elision(word)) {
    auto it = pack.determiners.find(elided->first);
    if (it != pack.determiners.end()) {
      if (!det || *det == GrammaticalGender::Neutral) det = it->second;
      word = elided->second;
    }
  }
  const bool decisive = det && *det != GrammaticalGender::Neutral;

  std::vector<std::string> candidates{word};
  for (const auto& prefix : pack.prefixes) {
    if (word.size() > prefix.size() && word.compare(0, prefix.size(), prefix) == 0 &&
        text::codepoint_count(word) - text::codepoint_count(prefix) >= 2) {
      candidates.push_back(word.substr(prefix.size()));
    }
  }

  for (const auto& c : candidates) {
    auto lex = pack.lexicon.find(c);
    const bool epicene = pack.neutral.count(c) != 0 || (lex != pack.lexicon.end() && lex->second == GrammaticalGender::Neutral);
    if (epicene) {
      if (decisive) return {as_prediction(*det), Evidence::Determiner};
      return {PredictedGender::Neutral, Evidence::Lexicon};
    }
    if (lex != pack.lexicon.end()) return {as_prediction(lex->second), Evidence::Lexicon};
  }

  if (decisive) return {as_prediction(*det), Evidence::Determiner};

  if (arabic && text::last_codepoint(word) == kTaMarbuta) return {PredictedGender::Female, Evidence::TaMarbuta};

  const auto word_len = text::codepoint_count(word);
  for (const auto& [suffix, gender] : pack.suffixes) {
    if (ends_with(word, suffix) && word_len > text::codepoint_count(suffix)) {
      return {as_prediction(gender), Evidence::Suffix};
    }
  }
  return {PredictedGender::Unknown, Evidence::None};
}

GenderAnalyzer::GenderAnalyzer(std::map<std::string, RulePack> packs) : packs_(packs.begin(), packs.end()) {}

GenderAnalyzer GenderAnalyzer::load_directory(const std::filesystem::path& dir) {
  std::map<std::string, RulePack> packs;
  for (auto lang : kTargetLanguages) {
    const auto path = dir / (std::string(lang) + ".rules");
    if (std::filesystem::exists(path)) packs.emplace(std::string(lang), load_rule_pack(lang, path));
  }
  if (packs.empty()) throw Error(ErrorCode::Io, "no rule packs found in " + dir.string());
  return GenderAnalyzer(std::move(packs));
}

bool GenderAnalyzer::supports(std::string_view language) const { return packs_.find(language) != packs_.end(); }

const RulePack& GenderAnalyzer::pack(std::string_view language) const {
  auto it = packs_.find(language);
  if (it == packs_.end()) {
    throw Error(ErrorCode::UnsupportedLanguage, "no rule pack for language '" + std::string(language) + "'");
  }
  return it->second;
}

GenderPrediction GenderAnalyzer::predict(std::string_view language, std::string_view noun,
                                         std::optional<std::string_view> determiner) const {
  return predict_gender(pack(language), noun, determiner);
}

GenderPrediction GenderAnalyzer::predict_for_outcome(std::string_view language,
                                                     std::span<const std::string> target_tokens,
                                                     const std::optional<LocatedSubject>& subject) const {
  const RulePack& rules = pack(language);
  if (!subject || subject->target_index >= target_tokens.size()) return {PredictedGender::Unknown, Evidence::None};

  auto is_determiner = [&](std::string_view tok) { return rules.determiners.count(text::fold(tok)) != 0; };
  const std::string& aligned = target_tokens[subject->target_index];
  if (is_determiner(aligned) && subject->target_index + 1 < target_tokens.size()) {
    return predict_gender(rules, target_tokens[subject->target_index + 1], std::string_view(aligned));
  }
  std::optional<std::string_view> det;
  if (subject->preceding_token && is_determiner(*subject->preceding_token)) det = *subject->preceding_token;
  return predict_gender(rules, aligned, det);
}

std::vector<LexiconCase> load_lexicon_cases(const std::filesystem::path& path) {
  std::vector<LexiconCase> cases;
  std::size_t line_no = 0;
  for (const auto& line : text::lines(text::read_file(path))) {
    ++line_no;
    if (text::trim(line).empty() || line.front() == '#') continue;
    auto cols = text::split(line, '\t');
    auto expected = cols.size() == 3 ? parse_predicted_gender(cols[2]) : std::nullopt;
    if (!expected) {
      throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) +
                                             ": expected determiner<TAB>noun<TAB>gender");
    }
    LexiconCase c;
    if (cols[0] != "-") c.determiner = cols[0];
    c.noun = cols[1];
    c.expected = *expected;
    cases.push_back(std::move(c));
  }
  return cases;
}

}  // namespace mtgender
