#include "mtgender/aligner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "mtgender/error.hpp"

namespace mtgender {
namespace {

// Unnormalized diagonal score exp(-tension * |(i+1)/n - (j+1)/m|).
double diagonal_weight(std::size_t i, std::size_t j, std::size_t n, std::size_t m, double tension) {
  const double h = -std::abs(static_cast<double>(i + 1) / static_cast<double>(n) -
                             static_cast<double>(j + 1) / static_cast<double>(m));
  return std::exp(tension * h);
}

// prior[j * n + i] = p(i | j, n, m), conditional on not aligning to null.
std::vector<double> prior_matrix(std::size_t n, std::size_t m, double tension) {
  std::vector<double> prior(n * m);
  for (std::size_t j = 0; j < m; ++j) {
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) z += prior[j * n + i] = diagonal_weight(i, j, n, m, tension);
    for (std::size_t i = 0; i < n; ++i) prior[j * n + i] /= z;
  }
  return prior;
}

std::string hexfloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

}  // namespace

std::uint32_t AlignmentModel::source_id(std::string_view word) const {
  auto it = source_vocab_.find(std::string(word));
  return it == source_vocab_.end() ? 0 : it->second;
}

std::optional<std::uint32_t> AlignmentModel::target_id(std::string_view word) const {
  auto it = target_vocab_.find(std::string(word));
  if (it == target_vocab_.end()) return std::nullopt;
  return it->second;
}

double AlignmentModel::prob(std::uint32_t source, std::optional<std::uint32_t> target) const {
  if (!target || source >= table_.size()) return 0.0;
  if (uniform_) return 1.0 / static_cast<double>(target_words_.size());
  const auto& row = table_[source];
  auto it = row.find(*target);
  return it == row.end() ? 0.0 : it->second;
}

double AlignmentModel::lexical(std::string_view target, std::string_view source) const {
  const auto s = source_id(source);
  if (s == 0) return 0.0;
  return prob(s, target_id(target));
}

double AlignmentModel::lexical_null(std::string_view target) const { return prob(0, target_id(target)); }

double AlignmentModel::position_prior(std::size_t i, std::size_t j, std::size_t n, std::size_t m) const {
  double z = 0.0;
  for (std::size_t k = 0; k < n; ++k) z += diagonal_weight(k, j, n, m, config_.tension);
  return diagonal_weight(i, j, n, m, config_.tension) / z;
}

Alignment AlignmentModel::viterbi(const SentencePair& pair) const {
  Alignment out;
  const std::size_t n = pair.source.size();
  const std::size_t m = pair.target.size();
  if (n == 0 || m == 0) return out;
  const auto prior = prior_matrix(n, m, config_.tension);
  const double p0 = config_.null_probability;

  std::vector<std::uint32_t> src(n);
  for (std::size_t i = 0; i < n; ++i) src[i] = source_id(pair.source[i]);

  for (std::size_t j = 0; j < m; ++j) {
    const auto f = target_id(pair.target[j]);
    double best = p0 * prob(0, f);
    std::optional<std::size_t> arg;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = src[i] == 0 ? 0.0 : (1.0 - p0) * prior[j * n + i] * prob(src[i], f);
      if (p > best) {
        best = p;
        arg = i;
      }
    }
    if (arg) out.links.insert({*arg, j});
  }
  return out;
}

double AlignmentModel::log_likelihood(const Bitext& bitext) const {
  const double p0 = config_.null_probability;
  double ll = 0.0;
  for (const auto& pair : bitext) {
    const std::size_t n = pair.source.size();
    const std::size_t m = pair.target.size();
    const auto prior = prior_matrix(n, m, config_.tension);
    for (std::size_t j = 0; j < m; ++j) {
      const auto f = target_id(pair.target[j]);
      double sum = p0 * prob(0, f);
      for (std::size_t i = 0; i < n; ++i) {
        const auto s = source_id(pair.source[i]);
        if (s != 0) sum += (1.0 - p0) * prior[j * n + i] * prob(s, f);
      }
      ll += std::log(sum);
    }
  }
  return ll;
}

std::vector<std::pair<std::string, double>> AlignmentModel::distribution_sums() const {
  std::vector<std::pair<std::string, double>> out;
  for (std::uint32_t s = 0; s < source_words_.size(); ++s) {
    double total = 0.0;
    if (uniform_) {
      for (std::size_t t = 0; t < target_words_.size(); ++t) total += 1.0 / static_cast<double>(target_words_.size());
    } else {
      for (const auto& [t, p] : table_[s]) total += p;
    }
    out.emplace_back(source_words_[s], total);
  }
  return out;
}

std::string AlignmentModel::serialize() const {
  std::string out = "iterations " + std::to_string(config_.iterations) + "\ntension " + hexfloat(config_.tension) +
                    "\nnull_probability " + hexfloat(config_.null_probability) + "\nseed " +
                    std::to_string(config_.seed) + "\n";
  for (double ll : log_likelihood_) out += "loglik " + hexfloat(ll) + "\n";
  std::map<std::string, std::uint32_t> sources(source_vocab_.begin(), source_vocab_.end());
  sources.emplace("", 0);
  for (const auto& [word, s] : sources) {
    std::map<std::string, double> row;
    if (uniform_) {
      for (const auto& t : target_words_) row.emplace(t, 1.0 / static_cast<double>(target_words_.size()));
    } else {
      for (const auto& [t, p] : table_[s]) row.emplace(target_words_[t], p);
    }
    for (const auto& [t, p] : row) out += (word.empty() ? "<null>" : word) + "\t" + t + "\t" + hexfloat(p) + "\n";
  }
  return out;
}

AlignmentModel train(const Bitext& bitext, const AlignerConfig& config) {
  if (bitext.empty()) throw Error(ErrorCode::EmptyBitext, "cannot train an aligner on an empty bitext");
  if (config.iterations < 0) throw Error(ErrorCode::InvalidConfig, "iterations must be non-negative");
  if (!(config.tension > 0.0)) throw Error(ErrorCode::InvalidConfig, "diagonal tension must be positive");
  if (!(config.null_probability > 0.0 && config.null_probability < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "null probability must lie in (0, 1)");
  }

  AlignmentModel model;
  model.config_ = config;
  model.source_words_.emplace_back();

  struct Encoded {
    std::vector<std::uint32_t> source;
    std::vector<std::uint32_t> target;
  };
  std::vector<Encoded> corpus;
  corpus.reserve(bitext.size());
  for (std::size_t k = 0; k < bitext.size(); ++k) {
    const auto& pair = bitext[k];
    if (pair.source.empty() || pair.target.empty()) {
      throw Error(ErrorCode::ParseError, "bitext pair " + std::to_string(k) + " has an empty side");
    }
    Encoded e;
    for (const auto& w : pair.source) {
      auto [it, inserted] = model.source_vocab_.emplace(w, static_cast<std::uint32_t>(model.source_words_.size()));
      if (inserted) model.source_words_.push_back(w);
      e.source.push_back(it->second);
    }
    for (const auto& w : pair.target) {
      auto [it, inserted] = model.target_vocab_.emplace(w, static_cast<std::uint32_t>(model.target_words_.size()));
      if (inserted) model.target_words_.push_back(w);
      e.target.push_back(it->second);
    }
    corpus.push_back(std::move(e));
  }
  model.table_.assign(model.source_words_.size(), {});

  const double p0 = config.null_probability;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> priors;
  auto prior_for = [&](std::size_t n, std::size_t m) -> const std::vector<double>& {
    auto key = std::make_pair(n, m);
    auto it = priors.find(key);
    if (it == priors.end()) it = priors.emplace(key, prior_matrix(n, m, config.tension)).first;
    return it->second;
  };

  // Runs one E-step; with `counts` null it only scores the corpus.
  auto expectation = [&](std::vector<std::unordered_map<std::uint32_t, double>>* counts) {
    double ll = 0.0;
    std::vector<double> post;
    for (const auto& e : corpus) {
      const std::size_t n = e.source.size();
      const std::size_t m = e.target.size();
      const auto& prior = prior_for(n, m);
      post.resize(n + 1);
      for (std::size_t j = 0; j < m; ++j) {
        const std::uint32_t f = e.target[j];
        double sum = post[0] = p0 * model.prob(0, f);
        for (std::size_t i = 0; i < n; ++i) sum += post[i + 1] = (1.0 - p0) * prior[j * n + i] * model.prob(e.source[i], f);
        ll += std::log(sum);
        if (counts == nullptr || !(sum > 0.0)) continue;
        (*counts)[0][f] += post[0] / sum;
        for (std::size_t i = 0; i < n; ++i) (*counts)[e.source[i]][f] += post[i + 1] / sum;
      }
    }
    return ll;
  };

  for (int it = 0; it < config.iterations; ++it) {
    std::vector<std::unordered_map<std::uint32_t, double>> counts(model.source_words_.size());
    model.log_likelihood_.push_back(expectation(&counts));

    for (std::size_t s = 0; s < counts.size(); ++s) {
      // Sum in target-id order so the normalizer does not depend on hash layout.
      std::vector<std::pair<std::uint32_t, double>> row(counts[s].begin(), counts[s].end());
      std::sort(row.begin(), row.end());
      double total = 0.0;
      for (const auto& [t, c] : row) total += c;
      auto& out = model.table_[s];
      out.clear();
      if (!(total > 0.0)) continue;
      for (const auto& [t, c] : row) out.emplace(t, c / total);
    }
    model.uniform_ = false;
  }
  model.log_likelihood_.push_back(expectation(nullptr));
  return model;
}

}  // namespace mtgender
