#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtgender/occupation_registry.hpp"
#include "mtgender/types.hpp"

namespace mtgender {

/// One annotated source sentence of the challenge set.
struct ChallengeInstance {
  Gender gold_gender = Gender::Female;
  /// 0-based index into the whitespace-tokenized sentence.
  std::size_t subject_index = 0;
  std::string sentence;
  std::string occupation;
  Stereotype stereotype = Stereotype::Unclassified;
  /// Code of the occupational group the surface form resolved to, if any.
  std::optional<std::string> occupation_code;

  bool operator==(const ChallengeInstance&) const = default;
};

struct ChallengeSet {
  std::vector<ChallengeInstance> instances;
  std::string source_language = "de";

  std::size_t size() const noexcept { return instances.size(); }
  bool empty() const noexcept { return instances.empty(); }
};

struct ChallengeSetSummary {
  std::size_t female = 0;
  std::size_t male = 0;
  std::size_t pro = 0;
  std::size_t anti = 0;
  std::size_t unclassified = 0;
};

/// Pro iff the gold gender matches the occupation's majority gender (strictly
/// more than half of the workforce). Unmapped occupations, groups without a
/// statistic and exact 50/50 groups are Unclassified.
Stereotype classify_stereotype(std::string_view occupation, Gender gold_gender, const OccupationRegistry& registry);

/// Parses WinoMT-style rows `gender<TAB>subject_index<TAB>sentence<TAB>occupation`.
/// Throws MalformedRow, InvalidGender or IndexOutOfRange. Unknown occupations
/// are not an error; they come back Unclassified.
ChallengeSet parse_challenge_set(std::string_view content, const OccupationRegistry& registry,
                                 std::string_view source_name = "<challenge-set>");
ChallengeSet load_challenge_set(const std::filesystem::path& path, const OccupationRegistry& registry);

/// Inverse of parse_challenge_set. Stereotype labels are derived data and are not written.
std::string serialize(const ChallengeSet& set);

struct StereotypeSplit {
  ChallengeSet pro;
  ChallengeSet anti;
};

StereotypeSplit split_by_stereotype(const ChallengeSet& set);

ChallengeSetSummary summarize(const ChallengeSet& set) noexcept;

}  // namespace mtgender
