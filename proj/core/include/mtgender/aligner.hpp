#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mtgender {

struct SentencePair {
  std::vector<std::string> source;
  std::vector<std::string> target;
};

/// Parallel corpus. Neither side of a pair may be empty.
using Bitext = std::vector<SentencePair>;

struct AlignmentLink {
  std::size_t source = 0;
  std::size_t target = 0;

  auto operator<=>(const AlignmentLink&) const = default;
};

/// Source->target word links, 0-based.
struct Alignment {
  std::set<AlignmentLink> links;

  bool operator==(const Alignment&) const = default;
};

/// `i-j` pairs sorted by (source, target), space-separated.
std::string render_pharaoh(const Alignment& alignment);
/// Throws ParseError on anything other than whitespace-separated `i-j` tokens.
Alignment parse_pharaoh(std::string_view line);

/// True when every link is in bounds and no target index is linked twice.
bool is_valid(const Alignment& alignment, std::size_t source_len, std::size_t target_len) noexcept;

struct AlignerConfig {
  int iterations = 5;
  /// Diagonal tension; larger values concentrate the prior on the diagonal.
  double tension = 4.0;
  /// Probability that a target word is generated by the null source word.
  double null_probability = 0.08;
  /// Recorded with the model. Training is fully deterministic given the corpus.
  std::uint64_t seed = 0;
};

/// Lexical translation model with a diagonal-favoring position prior. Immutable
/// once trained; viterbi() may be called concurrently.
class AlignmentModel {
 public:
  /// p(target | source) for a source word type.
  double lexical(std::string_view target, std::string_view source) const;
  /// p(target | NULL).
  double lexical_null(std::string_view target) const;

  /// Probability that target position j (0-based) of an m-word sentence is
  /// generated by source position i (0-based) of an n-word sentence, excluding null.
  double position_prior(std::size_t i, std::size_t j, std::size_t n, std::size_t m) const;

  /// Each target word links to the source word maximising lexical x position
  /// probability, or to nothing when null wins. Null wins ties; among source
  /// positions the smallest index wins ties.
  Alignment viterbi(const SentencePair& pair) const;

  /// Per source type (empty string for null) the sum of its lexical distribution.
  std::vector<std::pair<std::string, double>> distribution_sums() const;

  /// Corpus log-likelihood before each EM iteration plus one entry after the last.
  std::span<const double> log_likelihood_history() const noexcept { return log_likelihood_; }
  const AlignerConfig& config() const noexcept { return config_; }

  /// Canonical text dump (hex floats, sorted) for bit-level comparisons.
  std::string serialize() const;

  /// Corpus log-likelihood of `bitext` under the current parameters.
  double log_likelihood(const Bitext& bitext) const;

 private:
  friend AlignmentModel train(const Bitext& bitext, const AlignerConfig& config);

  std::uint32_t source_id(std::string_view word) const;  // 0 when unknown
  std::optional<std::uint32_t> target_id(std::string_view word) const;
  double prob(std::uint32_t source, std::optional<std::uint32_t> target) const;

  AlignerConfig config_;
  std::unordered_map<std::string, std::uint32_t> source_vocab_;  // ids start at 1; 0 is null
  std::unordered_map<std::string, std::uint32_t> target_vocab_;
  std::vector<std::string> source_words_;  // index 0 = "" (null)
  std::vector<std::string> target_words_;
  std::vector<std::unordered_map<std::uint32_t, double>> table_;
  bool uniform_ = true;
  std::vector<double> log_likelihood_;
};

/// EM training. Throws EmptyBitext for an empty corpus, ParseError for empty
/// sentences and InvalidConfig for out-of-range hyperparameters.
AlignmentModel train(const Bitext& bitext, const AlignerConfig& config = {});

/// Where the subject's translation sits in the target sentence.
struct LocatedSubject {
  std::size_t target_index = 0;
  /// Target token right before the subject; the determiner candidate.
  std::optional<std::string> preceding_token;

  bool operator==(const LocatedSubject&) const = default;
};

/// Lowest target index linked to `subject_index`; nullopt when the subject is unaligned.
std::optional<LocatedSubject> locate_subject(const Alignment& alignment, std::size_t subject_index,
                                             std::span<const std::string> target_tokens);

/// `source tokens ||| target tokens` per line.
Bitext parse_bitext(std::string_view content, std::string_view source_name = "<bitext>");
Bitext read_bitext(const std::filesystem::path& path);
std::string render_bitext(const Bitext& bitext);

}  // namespace mtgender
