#include <benchmark/benchmark.h>

#include <random>

#include "mtgender/aligner.hpp"
#include "mtgender/metrics.hpp"
#include "mtgender/morphology.hpp"

using namespace mtgender;

namespace {

// Random pairs over a one-to-one lexicon, target order monotone.
Bitext synthetic_bitext(std::size_t pairs, std::size_t vocab) {
  std::mt19937_64 rng(1);
  Bitext out;
  for (std::size_t k = 0; k < pairs; ++k) {
    SentencePair p;
    const std::size_t n = 4 + rng() % 9;
    for (std::size_t i = 0; i < n; ++i) {
      const auto w = std::to_string(rng() % vocab);
      p.source.push_back("s" + w);
      p.target.push_back("t" + w);
    }
    out.push_back(std::move(p));
  }
  return out;
}

void BM_AlignerTrain(benchmark::State& state) {
  const auto bitext = synthetic_bitext(static_cast<std::size_t>(state.range(0)), 50);
  for (auto _ : state) benchmark::DoNotOptimize(train(bitext, AlignerConfig{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AlignerTrain)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_AlignerViterbi(benchmark::State& state) {
  const auto bitext = synthetic_bitext(500, 50);
  const auto model = train(bitext, AlignerConfig{});
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(model.viterbi(bitext[k++ % bitext.size()]));
}
BENCHMARK(BM_AlignerViterbi);

void BM_ComputeMetrics(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<EvaluationOutcome> outcomes(static_cast<std::size_t>(state.range(0)));
  for (auto& o : outcomes) {
    o.gold = rng() % 2 ? Gender::Female : Gender::Male;
    o.predicted = static_cast<PredictedGender>(rng() % 4);
    o.stereotype = static_cast<Stereotype>(rng() % 3);
  }
  for (auto _ : state) benchmark::DoNotOptimize(compute_metrics(outcomes));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ComputeMetrics)->Arg(288)->Arg(10000);

void BM_PredictGender(benchmark::State& state) {
  const auto analyzer = GenderAnalyzer::load_directory(MTGENDER_SOURCE_DIR "/data/rules");
  const std::vector<std::pair<std::string, std::string>> words = {
      {"es", "limpiadora"}, {"fr", "boulangère"}, {"ru", "учительница"}, {"ar", "المديرة"}, {"he", "המנהלת"}};
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& [lang, noun] = words[k++ % words.size()];
    benchmark::DoNotOptimize(analyzer.predict(lang, noun, std::nullopt));
  }
}
BENCHMARK(BM_PredictGender);

}  // namespace

BENCHMARK_MAIN();
