#include <gtest/gtest.h>

#include <random>

#include "mtgender/error.hpp"
#include "mtgender/metrics.hpp"
#include "mtgender/occupation_registry.hpp"
#include "test_support.hpp"

using namespace mtgender;
using mtgender::testing::outcome;

namespace {

constexpr double kTol = 1e-12;
constexpr auto F = Gender::Female;
constexpr auto M = Gender::Male;
constexpr auto pF = PredictedGender::Female;
constexpr auto pM = PredictedGender::Male;
constexpr auto pN = PredictedGender::Neutral;
constexpr auto pU = PredictedGender::Unknown;

std::vector<EvaluationOutcome> fixture_ffmm() { return {outcome(F, pF), outcome(F, pM), outcome(M, pM), outcome(M, pM)}; }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

}  // namespace

TEST(Metrics, AccuracyAllCorrect) {
  std::vector v{outcome(F, pF), outcome(M, pM)};
  EXPECT_DOUBLE_EQ(accuracy(v), 1.0);
}

TEST(Metrics, HandDerivedFixture) {
  auto v = fixture_ffmm();
  EXPECT_NEAR(accuracy(v), 0.75, kTol);
  const auto m = compute_metrics(v);
  EXPECT_NEAR(m.f1_male, 0.8, kTol);
  EXPECT_NEAR(m.f1_female, 2.0 / 3.0, kTol);
  EXPECT_NEAR(delta_g(v), 0.8 - 2.0 / 3.0, kTol);
}

TEST(Metrics, NonBinaryPredictionsNeverCorrect) {
  std::vector v{outcome(F, pU), outcome(M, pN)};
  EXPECT_EQ(accuracy(v), 0.0);
}

TEST(Metrics, AccPrimeExample) {
  std::vector<EvaluationOutcome> v;
  for (int i = 0; i < 6; ++i) v.push_back(outcome(F, pF));
  v.push_back(outcome(M, pF));
  v.push_back(outcome(M, pN));
  v.push_back(outcome(F, pU));
  v.push_back(outcome(M, pU));
  EXPECT_NEAR(accuracy(v), 0.6, kTol);
  EXPECT_NEAR(accuracy_excluding_unknown(v), 0.75, kTol);
}

TEST(Metrics, AccPrimeEqualsAccWithoutUnknowns) {
  auto v = fixture_ffmm();
  EXPECT_DOUBLE_EQ(accuracy_excluding_unknown(v), accuracy(v));
}

TEST(Metrics, Errors) {
  std::vector<EvaluationOutcome> empty;
  EXPECT_EQ(code_of([&] { accuracy(empty); }), ErrorCode::EmptyInput);
  EXPECT_EQ(code_of([&] { delta_g(empty); }), ErrorCode::EmptyInput);
  EXPECT_EQ(code_of([&] { compute_metrics(empty); }), ErrorCode::EmptyInput);
  EXPECT_EQ(code_of([&] { prediction_breakdown(empty); }), ErrorCode::EmptyInput);
  std::vector all_unknown{outcome(F, pU), outcome(M, pU)};
  EXPECT_EQ(code_of([&] { accuracy_excluding_unknown(all_unknown); }), ErrorCode::AllUnknown);
  auto v = fixture_ffmm();
  EXPECT_EQ(code_of([&] { delta_s(v, empty); }), ErrorCode::EmptySubset);
  EXPECT_EQ(code_of([&] { delta_s(empty, v, DeltaSMode::F1); }), ErrorCode::EmptySubset);
}

TEST(Metrics, PerfectPredictionsHaveNoGap) {
  std::vector v{outcome(F, pF), outcome(M, pM), outcome(M, pM)};
  EXPECT_EQ(delta_g(v), 0.0);
}

TEST(Metrics, DeltaSAccuracyExample) {
  std::vector<EvaluationOutcome> pro, anti;
  for (int i = 0; i < 5; ++i) pro.push_back(outcome(F, i < 4 ? pF : pM, Stereotype::Pro));
  for (int i = 0; i < 5; ++i) anti.push_back(outcome(M, i < 3 ? pM : pF, Stereotype::Anti));
  EXPECT_NEAR(delta_s(pro, anti), 0.2, kTol);
}

TEST(Metrics, DeltaSIdenticalSubsets) {
  auto v = fixture_ffmm();
  EXPECT_EQ(delta_s(v, v, DeltaSMode::Accuracy), 0.0);
  EXPECT_EQ(delta_s(v, v, DeltaSMode::F1), 0.0);
}

TEST(Metrics, ComputeMetricsUsesStereotypeLabels) {
  std::vector v{outcome(F, pF, Stereotype::Pro), outcome(M, pM, Stereotype::Pro), outcome(F, pM, Stereotype::Anti),
                outcome(M, pM, Stereotype::Anti), outcome(M, pU, Stereotype::Unclassified)};
  const auto m = compute_metrics(v);
  EXPECT_EQ(m.n, 5u);
  EXPECT_EQ(m.n_pro, 2u);
  EXPECT_EQ(m.n_anti, 2u);
  ASSERT_TRUE(m.delta_s);
  EXPECT_NEAR(*m.delta_s, 0.5, kTol);
  ASSERT_TRUE(m.accuracy_excluding_unknown);
  EXPECT_NEAR(*m.accuracy_excluding_unknown, 0.75, kTol);
  EXPECT_EQ(m.counts.at(M, pU), 1u);
  EXPECT_EQ(m.counts.total(), 5u);
}

TEST(Metrics, ComputeMetricsOmitsUndefinedValues) {
  std::vector v{outcome(F, pU, Stereotype::Pro), outcome(M, pU, Stereotype::Pro)};
  const auto m = compute_metrics(v);
  EXPECT_FALSE(m.accuracy_excluding_unknown);
  EXPECT_FALSE(m.delta_s);
}

TEST(MetricsProperty, MatchesBruteForceOracle) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto v = mtgender::testing::random_outcomes(rng, 1 + rng() % 12);
    const auto o = mtgender::testing::oracle(v);
    ASSERT_NEAR(accuracy(v), o.accuracy, kTol);
    ASSERT_NEAR(delta_g(v), o.f1_male - o.f1_female, kTol);
    ASSERT_NEAR(macro_f1(v), (o.f1_male + o.f1_female) / 2, kTol);
    if (o.any_known) ASSERT_NEAR(accuracy_excluding_unknown(v), o.accuracy_excluding_unknown, kTol);
  }
}

TEST(MetricsProperty, AccPrimeNeverBelowAcc) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    auto v = mtgender::testing::random_outcomes(rng, 1 + rng() % 12);
    v.push_back(outcome(F, pU));
    v.push_back(outcome(M, pF));
    ASSERT_GE(accuracy_excluding_unknown(v), accuracy(v));
  }
}

TEST(MetricsProperty, GenderSwapNegatesDeltaG) {
  std::mt19937_64 rng(13);
  auto swap = [](PredictedGender p) {
    return p == pF ? pM : p == pM ? pF : p;
  };
  for (int trial = 0; trial < 500; ++trial) {
    auto v = mtgender::testing::random_outcomes(rng, 1 + rng() % 12);
    auto w = v;
    for (auto& o : w) {
      o.gold = opposite(o.gold);
      o.predicted = swap(o.predicted);
    }
    ASSERT_NEAR(delta_g(w), -delta_g(v), kTol);
    auto sym = v;
    sym.insert(sym.end(), w.begin(), w.end());
    ASSERT_NEAR(delta_g(sym), 0.0, kTol);
  }
}

TEST(MetricsProperty, DeltaSAntisymmetric) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    auto a = mtgender::testing::random_outcomes(rng, 1 + rng() % 12);
    auto b = mtgender::testing::random_outcomes(rng, 1 + rng() % 12);
    for (auto mode : {DeltaSMode::Accuracy, DeltaSMode::F1}) {
      ASSERT_EQ(delta_s(a, b, mode), -delta_s(b, a, mode));
    }
  }
}

TEST(MetricsProperty, BoundsHold) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 500; ++trial) {
    auto v = mtgender::testing::random_outcomes(rng, 1 + rng() % 12);
    const auto m = compute_metrics(v, DeltaSMode::F1);
    ASSERT_GE(m.accuracy, 0.0);
    ASSERT_LE(m.accuracy, 1.0);
    if (m.accuracy_excluding_unknown) ASSERT_LE(*m.accuracy_excluding_unknown, 1.0);
    ASSERT_LE(std::abs(m.delta_g), 1.0);
    if (m.delta_s) ASSERT_LE(std::abs(*m.delta_s), 1.0);
  }
}

namespace {

OccupationRegistry two_code_registry() {
  OccupationRegistry r;
  r.add({"A", "Alpha", 0.9, {"Alphaner"}});
  r.add({"B", "Beta", 0.1, {"Betaner"}});
  return r;
}

EvaluationOutcome coded(Gender g, PredictedGender p, std::string code) {
  auto o = outcome(g, p);
  o.occupation_code = std::move(code);
  return o;
}

}  // namespace

TEST(OccupationAggregate, MixedExample) {
  std::vector v{coded(F, pF, "A"), coded(M, pF, "A"), coded(M, pM, "A"), coded(F, pU, "A")};
  const auto shares = occupation_aggregate(v, two_code_registry());
  ASSERT_EQ(shares.size(), 1u);
  EXPECT_EQ(shares[0].code, "A");
  EXPECT_EQ(shares[0].count, 4u);
  EXPECT_NEAR(shares[0].female, 0.5, kTol);
  EXPECT_NEAR(shares[0].male, 0.25, kTol);
  EXPECT_NEAR(shares[0].neutral, 0.0, kTol);
  EXPECT_NEAR(shares[0].unknown, 0.25, kTol);
  EXPECT_DOUBLE_EQ(*shares[0].real_female_share, 0.9);
}

TEST(OccupationAggregate, BalancedCorrectSubsetIsHalfFemale) {
  std::vector v{coded(F, pF, "B"), coded(M, pM, "B"), coded(F, pF, "A"), coded(M, pM, "A"), outcome(F, pF)};
  const auto shares = occupation_aggregate(v, two_code_registry());
  ASSERT_EQ(shares.size(), 2u);
  EXPECT_EQ(shares[0].code, "A");
  for (const auto& s : shares) EXPECT_DOUBLE_EQ(s.female, 0.5);
}

TEST(OccupationAggregate, AllMale) {
  std::vector v{coded(F, pM, "B"), coded(M, pM, "B")};
  EXPECT_DOUBLE_EQ(occupation_aggregate(v, two_code_registry())[0].male, 1.0);
}

TEST(OccupationAggregate, SharesSumToOne) {
  std::mt19937_64 rng(23);
  const auto reg = two_code_registry();
  for (int trial = 0; trial < 200; ++trial) {
    auto v = mtgender::testing::random_outcomes(rng, 1 + rng() % 12);
    for (auto& o : v) o.occupation_code = (rng() & 1) ? "A" : "B";
    for (const auto& s : occupation_aggregate(v, reg)) {
      ASSERT_NEAR(s.female + s.male + s.neutral + s.unknown, 1.0, kTol);
    }
  }
}

TEST(OccupationAggregate, UnknownCode) {
  std::vector v{coded(F, pF, "Z")};
  EXPECT_EQ(code_of([&] { occupation_aggregate(v, two_code_registry()); }), ErrorCode::UnknownCode);
}

TEST(PredictionBreakdown, SplitsByCorrectnessAndOrigin) {
  std::vector v{outcome(F, pF), outcome(M, pF), outcome(M, pM), outcome(M, pM), outcome(F, pM),
                outcome(F, pN), outcome(M, pN), outcome(M, pU)};
  const auto b = prediction_breakdown(v);
  EXPECT_EQ(b.female_correct, 1u);
  EXPECT_EQ(b.female_incorrect, 1u);
  EXPECT_EQ(b.male_correct, 2u);
  EXPECT_EQ(b.male_incorrect, 1u);
  EXPECT_EQ(b.neutral_from_female, 1u);
  EXPECT_EQ(b.neutral_from_male, 1u);
  EXPECT_EQ(b.unknown_from_female, 0u);
  EXPECT_EQ(b.unknown_from_male, 1u);
  EXPECT_EQ(b.total(), v.size());
}

TEST(PredictionBreakdown, TalliesSumToInput) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    auto v = mtgender::testing::random_outcomes(rng, 1 + rng() % 12);
    ASSERT_EQ(prediction_breakdown(v).total(), v.size());
  }
}
