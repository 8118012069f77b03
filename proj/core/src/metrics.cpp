#include "mtgender/metrics.hpp"

#include <map>

#include "mtgender/error.hpp"

namespace mtgender {
namespace {

double ratio(std::size_t num, std::size_t den) noexcept {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void require_nonempty(std::span<const EvaluationOutcome> outcomes, const char* what) {
  if (outcomes.empty()) throw Error(ErrorCode::EmptyInput, std::string(what) + " of an empty outcome list");
}

}  // namespace

std::string_view to_string(DeltaSMode mode) noexcept { return mode == DeltaSMode::Accuracy ? "accuracy" : "f1"; }

std::optional<DeltaSMode> parse_delta_s_mode(std::string_view text) noexcept {
  if (text == "accuracy") return DeltaSMode::Accuracy;
  if (text == "f1") return DeltaSMode::F1;
  return std::nullopt;
}

std::size_t ConfusionCounts::total() const noexcept {
  std::size_t n = 0;
  for (const auto& row : cells) {
    for (auto c : row) n += c;
  }
  return n;
}

std::size_t ConfusionCounts::correct() const noexcept {
  return at(Gender::Female, PredictedGender::Female) + at(Gender::Male, PredictedGender::Male);
}

std::size_t ConfusionCounts::predicted(PredictedGender p) const noexcept {
  return at(Gender::Female, p) + at(Gender::Male, p);
}

std::size_t ConfusionCounts::gold(Gender g) const noexcept {
  std::size_t n = 0;
  for (auto c : cells[static_cast<std::size_t>(g)]) n += c;
  return n;
}

ConfusionCounts tally(std::span<const EvaluationOutcome> outcomes) noexcept {
  ConfusionCounts counts;
  for (const auto& o : outcomes) {
    ++counts.cells[static_cast<std::size_t>(o.gold)][static_cast<std::size_t>(o.predicted)];
  }
  return counts;
}

GenderScores gender_scores(const ConfusionCounts& counts, Gender g) noexcept {
  const auto p = as_prediction(g);
  const std::size_t hits = counts.at(g, p);
  GenderScores s;
  s.precision = ratio(hits, counts.predicted(p));
  s.recall = ratio(hits, counts.gold(g));
  s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

double accuracy(std::span<const EvaluationOutcome> outcomes) {
  require_nonempty(outcomes, "accuracy");
  const auto c = tally(outcomes);
  return ratio(c.correct(), c.total());
}

double accuracy_excluding_unknown(std::span<const EvaluationOutcome> outcomes) {
  const auto c = tally(outcomes);
  const std::size_t known = c.total() - c.predicted(PredictedGender::Unknown);
  if (known == 0) throw Error(ErrorCode::AllUnknown, "every prediction is unknown");
  return ratio(c.correct(), known);
}

double delta_g(std::span<const EvaluationOutcome> outcomes) {
  require_nonempty(outcomes, "delta_g");
  const auto c = tally(outcomes);
  return gender_scores(c, Gender::Male).f1 - gender_scores(c, Gender::Female).f1;
}

double macro_f1(std::span<const EvaluationOutcome> outcomes) {
  require_nonempty(outcomes, "macro_f1");
  const auto c = tally(outcomes);
  return (gender_scores(c, Gender::Male).f1 + gender_scores(c, Gender::Female).f1) / 2.0;
}

double delta_s(std::span<const EvaluationOutcome> pro, std::span<const EvaluationOutcome> anti, DeltaSMode mode) {
  if (pro.empty() || anti.empty()) {
    throw Error(ErrorCode::EmptySubset, std::string(pro.empty() ? "pro" : "anti") + "-stereotypical subset is empty");
  }
  if (mode == DeltaSMode::Accuracy) return accuracy(pro) - accuracy(anti);
  return macro_f1(pro) - macro_f1(anti);
}

MetricsReport compute_metrics(std::span<const EvaluationOutcome> outcomes, DeltaSMode mode) {
  require_nonempty(outcomes, "metrics");
  MetricsReport r;
  r.n = outcomes.size();
  r.counts = tally(outcomes);
  r.accuracy = ratio(r.counts.correct(), r.counts.total());
  if (r.counts.predicted(PredictedGender::Unknown) < r.counts.total()) {
    r.accuracy_excluding_unknown = accuracy_excluding_unknown(outcomes);
  }
  r.f1_male = gender_scores(r.counts, Gender::Male).f1;
  r.f1_female = gender_scores(r.counts, Gender::Female).f1;
  r.delta_g = r.f1_male - r.f1_female;
  r.delta_s_mode = mode;

  std::vector<EvaluationOutcome> pro, anti;
  for (const auto& o : outcomes) {
    if (o.stereotype == Stereotype::Pro) pro.push_back(o);
    else if (o.stereotype == Stereotype::Anti) anti.push_back(o);
  }
  r.n_pro = pro.size();
  r.n_anti = anti.size();
  if (!pro.empty() && !anti.empty()) r.delta_s = delta_s(pro, anti, mode);
  return r;
}

std::vector<OccupationShares> occupation_aggregate(std::span<const EvaluationOutcome> outcomes,
                                                   const OccupationRegistry& registry) {
  std::map<std::string, std::array<std::size_t, 4>> by_code;
  for (const auto& o : outcomes) {
    if (!o.occupation_code) continue;
    if (registry.find_by_code(*o.occupation_code) == nullptr) {
      throw Error(ErrorCode::UnknownCode, "occupation code '" + *o.occupation_code + "' is not in the registry");
    }
    ++by_code[*o.occupation_code][static_cast<std::size_t>(o.predicted)];
  }
  std::vector<OccupationShares> out;
  for (const auto& [code, tallies] : by_code) {
    OccupationShares s;
    s.code = code;
    s.real_female_share = registry.find_by_code(code)->female_share;
    for (auto t : tallies) s.count += t;
    s.female = ratio(tallies[static_cast<std::size_t>(PredictedGender::Female)], s.count);
    s.male = ratio(tallies[static_cast<std::size_t>(PredictedGender::Male)], s.count);
    s.neutral = ratio(tallies[static_cast<std::size_t>(PredictedGender::Neutral)], s.count);
    s.unknown = ratio(tallies[static_cast<std::size_t>(PredictedGender::Unknown)], s.count);
    out.push_back(std::move(s));
  }
  return out;
}

std::size_t PredictionBreakdown::total() const noexcept {
  return female_correct + female_incorrect + male_correct + male_incorrect + neutral_from_female + neutral_from_male +
         unknown_from_female + unknown_from_male;
}

PredictionBreakdown prediction_breakdown(std::span<const EvaluationOutcome> outcomes) {
  require_nonempty(outcomes, "prediction breakdown");
  PredictionBreakdown b;
  for (const auto& o : outcomes) {
    const bool from_female = o.gold == Gender::Female;
    switch (o.predicted) {
      case PredictedGender::Female: (from_female ? b.female_correct : b.female_incorrect)++; break;
      case PredictedGender::Male: (from_female ? b.male_incorrect : b.male_correct)++; break;
      case PredictedGender::Neutral: (from_female ? b.neutral_from_female : b.neutral_from_male)++; break;
      case PredictedGender::Unknown: (from_female ? b.unknown_from_female : b.unknown_from_male)++; break;
    }
  }
  return b;
}

}  // namespace mtgender
