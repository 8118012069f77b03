#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtgender/occupation_registry.hpp"
#include "mtgender/types.hpp"

namespace mtgender {

/// Per-instance join of gold annotation and predicted gender.
struct EvaluationOutcome {
  std::size_t instance_index = 0;
  Gender gold = Gender::Female;
  PredictedGender predicted = PredictedGender::Unknown;
  Stereotype stereotype = Stereotype::Unclassified;
  std::optional<std::string> occupation_code;

  bool operator==(const EvaluationOutcome&) const = default;
};

enum class DeltaSMode { Accuracy, F1 };

std::string_view to_string(DeltaSMode mode) noexcept;
std::optional<DeltaSMode> parse_delta_s_mode(std::string_view text) noexcept;

/// Tallies indexed [gold][predicted] in enum order.
struct ConfusionCounts {
  std::array<std::array<std::size_t, 4>, 2> cells{};

  std::size_t at(Gender gold, PredictedGender predicted) const noexcept {
    return cells[static_cast<std::size_t>(gold)][static_cast<std::size_t>(predicted)];
  }
  std::size_t total() const noexcept;
  std::size_t correct() const noexcept;
  std::size_t predicted(PredictedGender p) const noexcept;
  std::size_t gold(Gender g) const noexcept;
};

ConfusionCounts tally(std::span<const EvaluationOutcome> outcomes) noexcept;

struct GenderScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Precision over outcomes predicted as `g`, recall over outcomes whose gold is
/// `g`. Empty denominators give 0; F1 is 0 when precision + recall is 0.
GenderScores gender_scores(const ConfusionCounts& counts, Gender g) noexcept;

/// Throws EmptyInput.
double accuracy(std::span<const EvaluationOutcome> outcomes);
/// Accuracy over outcomes whose prediction is not Unknown. Throws AllUnknown.
double accuracy_excluding_unknown(std::span<const EvaluationOutcome> outcomes);
/// F1(male) - F1(female). Throws EmptyInput.
double delta_g(std::span<const EvaluationOutcome> outcomes);
/// Mean of the male and female F1 scores. Throws EmptyInput.
double macro_f1(std::span<const EvaluationOutcome> outcomes);
/// Performance on the pro-stereotypical subset minus the anti-stereotypical one.
/// Throws EmptySubset.
double delta_s(std::span<const EvaluationOutcome> pro, std::span<const EvaluationOutcome> anti,
               DeltaSMode mode = DeltaSMode::Accuracy);

struct MetricsReport {
  std::size_t n = 0;
  std::size_t n_pro = 0;
  std::size_t n_anti = 0;
  double accuracy = 0.0;
  /// Absent when every prediction is Unknown.
  std::optional<double> accuracy_excluding_unknown;
  double f1_male = 0.0;
  double f1_female = 0.0;
  double delta_g = 0.0;
  /// Absent when the pro or anti subset is empty.
  std::optional<double> delta_s;
  DeltaSMode delta_s_mode = DeltaSMode::Accuracy;
  ConfusionCounts counts;
};

/// Pro/anti subsets are taken from each outcome's stereotype label. Throws EmptyInput.
MetricsReport compute_metrics(std::span<const EvaluationOutcome> outcomes, DeltaSMode mode = DeltaSMode::Accuracy);

struct OccupationShares {
  std::string code;
  /// Real-world female share of the group; absent when the registry has none.
  std::optional<double> real_female_share;
  std::size_t count = 0;
  double female = 0.0;
  double male = 0.0;
  double neutral = 0.0;
  double unknown = 0.0;
};

/// Prediction shares per occupation code, sorted by code. Outcomes without a
/// code are skipped. Throws UnknownCode for codes missing from the registry.
std::vector<OccupationShares> occupation_aggregate(std::span<const EvaluationOutcome> outcomes,
                                                   const OccupationRegistry& registry);

/// Female/Male predictions split by correctness; Neutral/Unknown split by gold gender.
struct PredictionBreakdown {
  std::size_t female_correct = 0;
  std::size_t female_incorrect = 0;
  std::size_t male_correct = 0;
  std::size_t male_incorrect = 0;
  std::size_t neutral_from_female = 0;
  std::size_t neutral_from_male = 0;
  std::size_t unknown_from_female = 0;
  std::size_t unknown_from_male = 0;

  std::size_t total() const noexcept;
};

/// Throws EmptyInput.
PredictionBreakdown prediction_breakdown(std::span<const EvaluationOutcome> outcomes);

}  // namespace mtgender
