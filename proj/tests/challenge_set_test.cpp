#include <gtest/gtest.h>

#include <random>

#include "mtgender/challenge_set.hpp"
#include "mtgender/error.hpp"
#include "mtgender/occupation_registry.hpp"
#include "mtgender/text.hpp"
#include "test_support.hpp"

using namespace mtgender;

namespace {

OccupationRegistry registry() {
  OccupationRegistry r;
  r.add({"711GV", "Geschäftsführung und Vorstand", 0.23, {"Manager", "Managerin"}});
  r.add({"541Re", "Reinigung", 0.74, {"Reiniger", "Reinigerin"}});
  r.add({"999Eq", "Ausgeglichen", 0.5, {"Gleicher", "Gleiche"}});
  return r;
}

ErrorCode parse_error(std::string_view content) {
  try {
    parse_challenge_set(content, registry());
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for: " << content;
  return ErrorCode::Io;
}

}  // namespace

TEST(ChallengeSet, ParsesManagerinRow) {
  auto set = parse_challenge_set("female\t1\tDie Managerin feuerte den Reiniger, weil sie wütend war.\tManagerin\n",
                                 registry());
  ASSERT_EQ(set.size(), 1u);
  const auto& inst = set.instances[0];
  EXPECT_EQ(inst.gold_gender, Gender::Female);
  EXPECT_EQ(inst.subject_index, 1u);
  EXPECT_EQ(inst.stereotype, Stereotype::Anti);
  EXPECT_EQ(inst.occupation_code, "711GV");
}

TEST(ChallengeSet, Errors) {
  EXPECT_EQ(parse_error("neutral\t1\tDie Managerin lacht.\tManagerin\n"), ErrorCode::InvalidGender);
  EXPECT_EQ(parse_error("female\t1\tDie Managerin lacht.\n"), ErrorCode::MalformedRow);
  EXPECT_EQ(parse_error("female\t3\tDie Managerin lacht.\tManagerin\n"), ErrorCode::IndexOutOfRange);
  EXPECT_EQ(parse_error("female\tx\tDie Managerin lacht.\tManagerin\n"), ErrorCode::MalformedRow);
  EXPECT_EQ(parse_error("female\t1\tDie Managerin lacht.\tReiniger\n"), ErrorCode::MalformedRow);
}

TEST(ChallengeSet, UnknownOccupationIsUnclassified) {
  auto set = parse_challenge_set("female\t1\tDie Patientin dankt dem Arzt.\tPatientin\n", registry());
  EXPECT_EQ(set.instances[0].stereotype, Stereotype::Unclassified);
  EXPECT_FALSE(set.instances[0].occupation_code);
}

TEST(Stereotype, ClassifiesAgainstMajority) {
  const auto reg = registry();
  EXPECT_EQ(classify_stereotype("Managerin", Gender::Female, reg), Stereotype::Anti);
  EXPECT_EQ(classify_stereotype("Manager", Gender::Male, reg), Stereotype::Pro);
  EXPECT_EQ(classify_stereotype("Reinigerin", Gender::Female, reg), Stereotype::Pro);
  EXPECT_EQ(classify_stereotype("Patientin", Gender::Female, reg), Stereotype::Unclassified);
  EXPECT_EQ(classify_stereotype("Gleiche", Gender::Female, reg), Stereotype::Unclassified);
}

TEST(Stereotype, FlippingGenderFlipsLabel) {
  const auto reg = registry();
  auto flip = [](Stereotype s) {
    return s == Stereotype::Pro ? Stereotype::Anti : s == Stereotype::Anti ? Stereotype::Pro : s;
  };
  for (std::string_view occ : {"Manager", "Managerin", "Reiniger", "Gleicher", "Besucher"}) {
    EXPECT_EQ(classify_stereotype(occ, Gender::Male, reg), flip(classify_stereotype(occ, Gender::Female, reg)));
  }
}

TEST(Stereotype, RandomSharesGiveExactlyOneProGender) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> share(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    OccupationRegistry reg;
    const double s = i == 0 ? 0.5 : share(rng);
    reg.add({"X", "X", s, {"Beruf"}});
    const auto f = classify_stereotype("Beruf", Gender::Female, reg);
    const auto m = classify_stereotype("Beruf", Gender::Male, reg);
    if (s == 0.5) {
      EXPECT_EQ(f, Stereotype::Unclassified);
      EXPECT_EQ(m, Stereotype::Unclassified);
    } else {
      EXPECT_NE(f, m);
      EXPECT_NE(f, Stereotype::Unclassified);
      EXPECT_EQ(f == Stereotype::Pro, s > 0.5);
    }
  }
}

TEST(ChallengeSet, SplitSynthetic) {
  auto set = parse_challenge_set(
      "male\t1\tDer Manager lacht.\tManager\n"
      "female\t1\tDie Managerin lacht.\tManagerin\n"
      "male\t1\tDer Reiniger lacht.\tReiniger\n"
      "female\t1\tDie Patientin lacht.\tPatientin\n",
      registry());
  auto split = split_by_stereotype(set);
  EXPECT_EQ(split.pro.size(), 1u);
  EXPECT_EQ(split.anti.size(), 2u);
  EXPECT_EQ(split.anti.instances[0].occupation, "Managerin");
  EXPECT_EQ(split.anti.instances[1].occupation, "Reiniger");
}

TEST(ChallengeSet, SplitOfUnclassifiedIsEmpty) {
  auto set = parse_challenge_set("female\t1\tDie Patientin lacht.\tPatientin\n", registry());
  auto split = split_by_stereotype(set);
  EXPECT_TRUE(split.pro.empty());
  EXPECT_TRUE(split.anti.empty());
}

TEST(ChallengeSet, SampleCountsAndPartition) {
  const auto dir = mtgender::testing::source_dir() / "data";
  const auto reg = load_occupation_registry(dir / "occupations.tsv");
  const auto set = load_challenge_set(dir / "sample/challenge_set.tsv", reg);
  const auto s = summarize(set);
  EXPECT_EQ(set.size(), 20u);
  EXPECT_EQ(s.female, 10u);
  EXPECT_EQ(s.male, 10u);
  EXPECT_EQ(s.pro, 8u);
  EXPECT_EQ(s.anti, 8u);
  EXPECT_EQ(s.unclassified, 4u);

  auto split = split_by_stereotype(set);
  EXPECT_EQ(split.pro.size() + split.anti.size() + s.unclassified, set.size());
  for (const auto& inst : split.pro.instances) {
    EXPECT_EQ(classify_stereotype(inst.occupation, inst.gold_gender, reg), Stereotype::Pro);
  }
  for (const auto& inst : split.anti.instances) {
    EXPECT_EQ(classify_stereotype(inst.occupation, inst.gold_gender, reg), Stereotype::Anti);
  }
}

TEST(ChallengeSet, SerializeRoundTrips) {
  const auto path = mtgender::testing::source_dir() / "data/sample/challenge_set.tsv";
  const auto reg = load_occupation_registry(mtgender::testing::source_dir() / "data/occupations.tsv");
  const auto set = load_challenge_set(path, reg);
  const std::string once = serialize(set);
  EXPECT_EQ(once, text::read_file(path));
  const auto again = parse_challenge_set(once, reg);
  EXPECT_EQ(again.instances, set.instances);
  EXPECT_EQ(serialize(again), once);
}
