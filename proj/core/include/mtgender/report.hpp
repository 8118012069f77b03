#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>

#include "mtgender/audit.hpp"
#include "mtgender/occupation_registry.hpp"

namespace mtgender {

nlohmann::json to_json(const MetricsReport& metrics);
MetricsReport metrics_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AuditReport& report);
/// Throws ParseError on schema violations.
AuditReport report_from_json(const nlohmann::json& j);

/// Canonical serialized report (2-space indent, trailing newline).
std::string render_report_json(const AuditReport& report);
AuditReport read_report(const std::filesystem::path& path);

enum class TableStyle { Main, AccPrime };

/// `fraction * 100` rounded half away from zero to one decimal ("-0.8", "95.8").
std::string format_percent(double fraction);

/// Language rows grouped by family, one column group per provider. Missing,
/// unsupported and failed cells render as "-".
std::string render_table(const AuditReport& report, TableStyle style = TableStyle::Main);

/// Writes fig2_occupations.tsv and fig3_breakdown.tsv per ok cell (from its
/// outcomes.tsv) and pooled run-level versions in `output_dir`.
/// Throws MissingOutcomes when an ok cell has no outcome dump.
void emit_plot_data(const AuditReport& report, const OccupationRegistry& registry,
                    const std::filesystem::path& output_dir);

/// report.json, table.txt, table_acc_prime.txt and the plot data.
void write_audit_outputs(const AuditReport& report, const OccupationRegistry& registry,
                         const std::filesystem::path& output_dir);

}  // namespace mtgender
