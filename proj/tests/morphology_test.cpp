#include <gtest/gtest.h>

#include <random>

#include "mtgender/error.hpp"
#include "mtgender/languages.hpp"
#include "mtgender/morphology.hpp"
#include "test_support.hpp"

using namespace mtgender;

namespace {

const GenderAnalyzer& shipped() {
  static const GenderAnalyzer analyzer =
      GenderAnalyzer::load_directory(mtgender::testing::source_dir() / "data/rules");
  return analyzer;
}

ErrorCode pack_error(std::string_view content) {
  try {
    parse_rule_pack("es", content);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for: " << content;
  return ErrorCode::Io;
}

}  // namespace

TEST(Morphology, ManagerinCleanerPairs) {
  const auto& a = shipped();
  EXPECT_EQ(a.predict("es", "limpiadora", "la"), (GenderPrediction{PredictedGender::Female, Evidence::Determiner}));
  EXPECT_EQ(a.predict("es", "gerente", "el"), (GenderPrediction{PredictedGender::Male, Evidence::Determiner}));
  EXPECT_EQ(a.predict("es", "gerente", "El"), (GenderPrediction{PredictedGender::Male, Evidence::Determiner}));
}

TEST(Morphology, EpiceneIsNeutral) {
  EXPECT_EQ(shipped().predict("es", "estudiante", std::nullopt).value, PredictedGender::Neutral);
}

TEST(Morphology, TaMarbuta) {
  EXPECT_EQ(shipped().predict("ar", "مهندسة", std::nullopt),
            (GenderPrediction{PredictedGender::Female, Evidence::TaMarbuta}));
  // Lexicon exception.
  EXPECT_EQ(shipped().predict("ar", "خليفة", std::nullopt).value, PredictedGender::Male);
}

TEST(Morphology, UnknownWhenNoRuleFires) {
  EXPECT_EQ(shipped().predict("ru", "жизнь", std::nullopt),
            (GenderPrediction{PredictedGender::Unknown, Evidence::None}));
}

TEST(Morphology, UnsupportedLanguage) {
  try {
    shipped().predict("de", "Haus", std::nullopt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedLanguage);
  }
}

TEST(Morphology, SuffixAppliesWithoutDeterminer) {
  auto pack = parse_rule_pack("es", "[determiners]\nla\tfemale\nel\tmale\n[suffixes]\na\tfemale\n");
  EXPECT_EQ(predict_gender(pack, "programadora", std::nullopt),
            (GenderPrediction{PredictedGender::Female, Evidence::Suffix}));
  EXPECT_EQ(predict_gender(pack, "programadora", std::string_view("el")).value, PredictedGender::Male);
  // A suffix never matches the whole word.
  EXPECT_EQ(predict_gender(pack, "a", std::nullopt).value, PredictedGender::Unknown);
}

TEST(Morphology, LongestSuffixWins) {
  auto pack = parse_rule_pack("ru", "[suffixes]\nа\tfemale\nка\tmale\nотка\tneutral\n");
  EXPECT_EQ(predict_gender(pack, "работа", std::nullopt).value, PredictedGender::Female);
  EXPECT_EQ(predict_gender(pack, "рука", std::nullopt).value, PredictedGender::Male);
  EXPECT_EQ(predict_gender(pack, "работка", std::nullopt).value, PredictedGender::Neutral);
}

TEST(Morphology, PackErrors) {
  EXPECT_EQ(pack_error("[lexicon]\njefe\tmale\njefe\tfemale\n"), ErrorCode::DuplicateKey);
  EXPECT_EQ(pack_error("[lexicon]\njefe\tmale\n[neutral]\njefe\n"), ErrorCode::DuplicateKey);
  EXPECT_EQ(pack_error("[determiners]\nla\tfemale\nla\tmale\n"), ErrorCode::DuplicateKey);
  EXPECT_EQ(pack_error("[suffixes]\na\tfemale\na\tmale\n"), ErrorCode::DuplicateKey);
  EXPECT_EQ(pack_error("[lexicon]\njefe\tboth\n"), ErrorCode::ParseError);
  EXPECT_EQ(pack_error("[lexicon]\njefe\n"), ErrorCode::ParseError);
  EXPECT_EQ(pack_error("[adjectives]\nx\tmale\n"), ErrorCode::ParseError);
  EXPECT_EQ(pack_error("jefe\tmale\n"), ErrorCode::ParseError);
}

TEST(Morphology, ShippedPacksCoverAllTargetLanguages) {
  for (auto lang : kTargetLanguages) EXPECT_TRUE(shipped().supports(lang)) << lang;
}

class GoldenLexicon : public ::testing::TestWithParam<std::string> {};

TEST_P(GoldenLexicon, ClassifiesEveryEntry) {
  const auto path = mtgender::testing::source_dir() / "data/rules" / (GetParam() + ".test.tsv");
  const auto cases = load_lexicon_cases(path);
  ASSERT_FALSE(cases.empty());
  for (const auto& c : cases) {
    std::optional<std::string_view> det;
    if (c.determiner) det = *c.determiner;
    EXPECT_EQ(shipped().predict(GetParam(), c.noun, det).value, c.expected)
        << (c.determiner ? *c.determiner + " " : std::string()) << c.noun;
  }
}

INSTANTIATE_TEST_SUITE_P(Shipped, GoldenLexicon, ::testing::Values("es", "fr", "it", "uk", "ru", "ar", "he"));

TEST(MorphologyProperty, DecisiveDeterminerOverridesSuffix) {
  const auto& a = shipped();
  std::mt19937_64 rng(37);
  const std::string letters = "abcdeilmnorstu";
  for (const std::string lang : {"es", "fr", "it"}) {
    const auto& pack = a.pack(lang);
    for (int trial = 0; trial < 300; ++trial) {
      std::string noun;
      for (std::size_t k = 0, n = 2 + rng() % 8; k < n; ++k) noun += letters[rng() % letters.size()];
      if (pack.lexicon.count(noun) != 0) continue;
      for (const auto& [det, g] : pack.determiners) {
        if (g == GrammaticalGender::Neutral) continue;
        const auto p = a.predict(lang, noun, std::string_view(det));
        ASSERT_EQ(p.value, g == GrammaticalGender::Female ? PredictedGender::Female : PredictedGender::Male)
            << lang << " " << det << " " << noun;
      }
    }
  }
}

TEST(MorphologyProperty, TaMarbutaFinalIsFemale) {
  std::mt19937_64 rng(41);
  const std::vector<std::string> letters{"م", "د", "ي", "ر", "س", "ك", "ت", "ب", "ن", "ل"};
  const auto& pack = shipped().pack("ar");
  for (int trial = 0; trial < 300; ++trial) {
    std::string word;
    for (std::size_t k = 0, n = 1 + rng() % 6; k < n; ++k) word += letters[rng() % letters.size()];
    word += "ة";
    if (pack.lexicon.count(word) != 0) continue;
    ASSERT_EQ(shipped().predict("ar", word, std::nullopt).value, PredictedGender::Female) << word;
  }
}

TEST(MorphologyProperty, TotalOnArbitraryTokens) {
  std::mt19937_64 rng(43);
  for (auto lang : kTargetLanguages) {
    for (int trial = 0; trial < 200; ++trial) {
      std::string token;
      for (std::size_t k = 0, n = rng() % 6; k < n; ++k) token += static_cast<char>(0x21 + rng() % 0x5e);
      EXPECT_NO_THROW(shipped().predict(lang, token, std::nullopt));
      EXPECT_NO_THROW(shipped().predict(lang, token, std::string_view(token)));
    }
  }
}

TEST(PredictForOutcome, NotAlignedIsUnknown) {
  const std::vector<std::string> tokens{"El", "gerente"};
  EXPECT_EQ(shipped().predict_for_outcome("es", tokens, std::nullopt).value, PredictedGender::Unknown);
}

TEST(PredictForOutcome, UsesPrecedingDeterminer) {
  const std::vector<std::string> tokens{"El", "gerente", "despidió"};
  LocatedSubject loc{1, "El"};
  EXPECT_EQ(shipped().predict_for_outcome("es", tokens, loc),
            (GenderPrediction{PredictedGender::Male, Evidence::Determiner}));
}

TEST(PredictForOutcome, IgnoresNonDeterminerPredecessor) {
  const std::vector<std::string> tokens{"Ayer", "estudiante"};
  LocatedSubject loc{1, "Ayer"};
  EXPECT_EQ(shipped().predict_for_outcome("es", tokens, loc).value, PredictedGender::Neutral);
}

TEST(PredictForOutcome, DeterminerAlignedShiftsToNoun) {
  const std::vector<std::string> tokens{"La", "electricista", "ayudó"};
  LocatedSubject loc{0, std::nullopt};
  EXPECT_EQ(shipped().predict_for_outcome("es", tokens, loc).value, PredictedGender::Female);
}

TEST(PredictForOutcome, HebrewAttachedArticle) {
  const std::vector<std::string> tokens{"המנהלת", "פיטרה"};
  LocatedSubject loc{0, std::nullopt};
  EXPECT_EQ(shipped().predict_for_outcome("he", tokens, loc).value, PredictedGender::Female);
}
