#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mtgender/metrics.hpp"

namespace mtgender {

/// Outcome interchange format: a header row, then
/// `instance_index<TAB>gold<TAB>predicted<TAB>stereotype<TAB>occupation_code`
/// rows, with "-" for a missing occupation code.
std::string render_outcomes(const std::vector<EvaluationOutcome>& outcomes);
/// The header row is optional. Throws MalformedRow.
std::vector<EvaluationOutcome> parse_outcomes(std::string_view content, std::string_view source_name = "<outcomes>");
std::vector<EvaluationOutcome> read_outcomes(const std::filesystem::path& path);

inline constexpr std::string_view kOutcomeHeader = "instance_index\tgold\tpredicted\tstereotype\toccupation_code";

}  // namespace mtgender
