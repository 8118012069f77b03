#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mtgender/aligner.hpp"
#include "mtgender/types.hpp"

namespace mtgender {

/// Which rule decided a prediction.
enum class Evidence { Determiner, Suffix, Lexicon, TaMarbuta, None };

std::string_view to_string(Evidence e) noexcept;

/// Gender value as written in rule packs. Neutral on a determiner means the
/// determiner does not disambiguate (e.g. French "l'").
enum class GrammaticalGender { Female, Male, Neutral };

struct GenderPrediction {
  PredictedGender value = PredictedGender::Unknown;
  Evidence evidence = Evidence::None;

  bool operator==(const GenderPrediction&) const = default;
};

/// Per-language gender rules. All keys are NFC-normalized and lower-cased.
struct RulePack {
  std::string language;
  std::unordered_map<std::string, GrammaticalGender> determiners;
  /// Tried longest-first; file order breaks ties between equal lengths.
  std::vector<std::pair<std::string, GrammaticalGender>> suffixes;
  std::unordered_map<std::string, GrammaticalGender> lexicon;
  /// Epicene nouns: Neutral unless a decisive determiner is present.
  std::unordered_set<std::string> neutral;
  /// Attached clitics stripped before lexicon lookup (Arabic "ال", Hebrew "ה").
  std::vector<std::string> prefixes;
};

/// Sectioned text: `[determiners]`, `[suffixes]`, `[lexicon]`, `[neutral]` and
/// optional `[prefixes]` blocks of `token<TAB>gender` rows ('#' starts a comment).
/// Throws ParseError or DuplicateKey.
RulePack parse_rule_pack(std::string_view language, std::string_view content,
                         std::string_view source_name = "<rule-pack>");
RulePack load_rule_pack(std::string_view language, const std::filesystem::path& path);

/// Lexicon, then determiner, then (Arabic) ta marbuta, then suffix rules; the
/// first decisive rule wins. Never throws on content.
GenderPrediction predict_gender(const RulePack& pack, std::string_view noun,
                                std::optional<std::string_view> determiner);

/// Rule packs for the supported target languages.
class GenderAnalyzer {
 public:
  GenderAnalyzer() = default;
  explicit GenderAnalyzer(std::map<std::string, RulePack> packs);

  /// Loads `<dir>/<lang>.rules` for every supported target language present.
  static GenderAnalyzer load_directory(const std::filesystem::path& dir);

  bool supports(std::string_view language) const;
  const RulePack& pack(std::string_view language) const;

  /// Throws UnsupportedLanguage.
  GenderPrediction predict(std::string_view language, std::string_view noun,
                           std::optional<std::string_view> determiner) const;

  /// Unaligned subjects are Unknown. The preceding token is passed as the
  /// determiner only when the pack lists it as one. When the aligned token is
  /// itself a determiner, the following token is analysed as the noun.
  GenderPrediction predict_for_outcome(std::string_view language, std::span<const std::string> target_tokens,
                                       const std::optional<LocatedSubject>& subject) const;

 private:
  std::map<std::string, RulePack, std::less<>> packs_;
};

/// Golden classification cases: `determiner<TAB>noun<TAB>expected` with "-"
/// for no determiner and expected in {female, male, neutral, unknown}.
struct LexiconCase {
  std::optional<std::string> determiner;
  std::string noun;
  PredictedGender expected = PredictedGender::Unknown;
};

std::vector<LexiconCase> load_lexicon_cases(const std::filesystem::path& path);

}  // namespace mtgender
