#include "mtgender/challenge_set.hpp"

#include <charconv>

#include "mtgender/error.hpp"
#include "mtgender/text.hpp"

namespace mtgender {

Stereotype classify_stereotype(std::string_view occupation, Gender gold_gender, const OccupationRegistry& registry) {
  const OccupationRecord* rec = registry.find_by_surface(occupation);
  if (rec == nullptr || !rec->female_share || *rec->female_share == 0.5) return Stereotype::Unclassified;
  const Gender majority = *rec->female_share > 0.5 ? Gender::Female : Gender::Male;
  return gold_gender == majority ? Stereotype::Pro : Stereotype::Anti;
}

ChallengeSet parse_challenge_set(std::string_view content, const OccupationRegistry& registry,
                                 std::string_view source_name) {
  ChallengeSet set;
  std::size_t line_no = 0;
  for (const auto& line : text::lines(content)) {
    ++line_no;
    const std::string where = std::string(source_name) + ":" + std::to_string(line_no);
    auto cols = text::split(line, '\t');
    if (cols.size() != 4) {
      throw Error(ErrorCode::MalformedRow, where + ": expected 4 tab-separated columns, got " + std::to_string(cols.size()));
    }

    ChallengeInstance inst;
    auto gender = parse_gender(cols[0]);
    if (!gender) throw Error(ErrorCode::InvalidGender, where + ": gender '" + cols[0] + "' is not male or female");
    inst.gold_gender = *gender;

    const auto& idx = cols[1];
    auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), inst.subject_index);
    if (idx.empty() || ec != std::errc() || ptr != idx.data() + idx.size()) {
      throw Error(ErrorCode::MalformedRow, where + ": subject index '" + idx + "' is not a non-negative integer");
    }

    inst.sentence = text::nfc(cols[2]);
    inst.occupation = text::nfc(cols[3]);
    const auto word_count = text::split_whitespace(inst.sentence).size();
    if (inst.subject_index >= word_count) {
      throw Error(ErrorCode::IndexOutOfRange, where + ": subject index " + idx + " but sentence has " +
                                                  std::to_string(word_count) + " tokens");
    }
    if (inst.occupation.empty() || inst.sentence.find(inst.occupation) == std::string::npos) {
      throw Error(ErrorCode::MalformedRow, where + ": occupation '" + inst.occupation + "' does not occur in the sentence");
    }

    inst.stereotype = classify_stereotype(inst.occupation, inst.gold_gender, registry);
    if (const auto* rec = registry.find_by_surface(inst.occupation)) inst.occupation_code = rec->code;
    set.instances.push_back(std::move(inst));
  }
  return set;
}

ChallengeSet load_challenge_set(const std::filesystem::path& path, const OccupationRegistry& registry) {
  return parse_challenge_set(text::read_file(path), registry, path.string());
}

std::string serialize(const ChallengeSet& set) {
  std::string out;
  for (const auto& inst : set.instances) {
    out += to_string(inst.gold_gender);
    out += '\t';
    out += std::to_string(inst.subject_index);
    out += '\t';
    out += inst.sentence;
    out += '\t';
    out += inst.occupation;
    out += '\n';
  }
  return out;
}

StereotypeSplit split_by_stereotype(const ChallengeSet& set) {
  StereotypeSplit split;
  split.pro.source_language = set.source_language;
  split.anti.source_language = set.source_language;
  for (const auto& inst : set.instances) {
    if (inst.stereotype == Stereotype::Pro) split.pro.instances.push_back(inst);
    else if (inst.stereotype == Stereotype::Anti) split.anti.instances.push_back(inst);
  }
  return split;
}

ChallengeSetSummary summarize(const ChallengeSet& set) noexcept {
  ChallengeSetSummary s;
  for (const auto& inst : set.instances) {
    (inst.gold_gender == Gender::Female ? s.female : s.male)++;
    switch (inst.stereotype) {
      case Stereotype::Pro: ++s.pro; break;
      case Stereotype::Anti: ++s.anti; break;
      case Stereotype::Unclassified: ++s.unclassified; break;
    }
  }
  return s;
}

}  // namespace mtgender
