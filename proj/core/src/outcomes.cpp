#include "mtgender/outcomes.hpp"

#include <charconv>

#include "mtgender/error.hpp"
#include "mtgender/text.hpp"

namespace mtgender {

std::string render_outcomes(const std::vector<EvaluationOutcome>& outcomes) {
  std::string out(kOutcomeHeader);
  out += '\n';
  for (const auto& o : outcomes) {
    out += std::to_string(o.instance_index);
    out += '\t';
    out += to_string(o.gold);
    out += '\t';
    out += to_string(o.predicted);
    out += '\t';
    out += to_string(o.stereotype);
    out += '\t';
    out += o.occupation_code.value_or("-");
    out += '\n';
  }
  return out;
}

std::vector<EvaluationOutcome> parse_outcomes(std::string_view content, std::string_view source_name) {
  std::vector<EvaluationOutcome> out;
  std::size_t line_no = 0;
  for (const auto& line : text::lines(content)) {
    ++line_no;
    if (line_no == 1 && line == kOutcomeHeader) continue;
    const std::string where = std::string(source_name) + ":" + std::to_string(line_no);
    auto cols = text::split(line, '\t');
    if (cols.size() != 5) throw Error(ErrorCode::MalformedRow, where + ": expected 5 tab-separated columns");
    EvaluationOutcome o;
    auto [ptr, ec] = std::from_chars(cols[0].data(), cols[0].data() + cols[0].size(), o.instance_index);
    auto gold = parse_gender(cols[1]);
    auto predicted = parse_predicted_gender(cols[2]);
    auto stereotype = parse_stereotype(cols[3]);
    if (cols[0].empty() || ec != std::errc() || ptr != cols[0].data() + cols[0].size() || !gold || !predicted ||
        !stereotype || cols[4].empty()) {
      throw Error(ErrorCode::MalformedRow, where + ": invalid outcome row '" + line + "'");
    }
    o.gold = *gold;
    o.predicted = *predicted;
    o.stereotype = *stereotype;
    if (cols[4] != "-") o.occupation_code = cols[4];
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<EvaluationOutcome> read_outcomes(const std::filesystem::path& path) {
  return parse_outcomes(text::read_file(path), path.string());
}

}  // namespace mtgender
