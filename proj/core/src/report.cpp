#include "mtgender/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "mtgender/error.hpp"
#include "mtgender/languages.hpp"
#include "mtgender/outcomes.hpp"
#include "mtgender/text.hpp"

namespace mtgender {
namespace {

constexpr std::array<PredictedGender, 4> kPredicted = {PredictedGender::Female, PredictedGender::Male,
                                                       PredictedGender::Neutral, PredictedGender::Unknown};

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> read_optional(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::optional<CellStatus> parse_cell_status(std::string_view s) {
  if (s == "ok") return CellStatus::Ok;
  if (s == "unsupported_pair") return CellStatus::UnsupportedPair;
  if (s == "failed") return CellStatus::Failed;
  return std::nullopt;
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string pad_left(const std::string& s, std::size_t width) {
  const auto n = text::codepoint_count(s);
  return n >= width ? s : std::string(width - n, ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  const auto n = text::codepoint_count(s);
  return n >= width ? s : s + std::string(width - n, ' ');
}

const CellResult* find_cell(const AuditReport& report, std::string_view provider, std::string_view language) {
  for (const auto& c : report.cells) {
    if (c.provider == provider && c.language == language) return &c;
  }
  return nullptr;
}

std::string fig2_rows(const std::vector<OccupationShares>& shares, const std::string& prefix) {
  std::string out;
  for (const auto& s : shares) {
    out += prefix + s.code + "\t" + (s.real_female_share ? fixed6(*s.real_female_share) : std::string("-")) + "\t" +
           fixed6(s.female) + "\t" + fixed6(s.male) + "\t" + fixed6(s.neutral) + "\t" + fixed6(s.unknown) + "\t" +
           std::to_string(s.count) + "\n";
  }
  return out;
}

std::string fig3_rows(const PredictionBreakdown& b, const std::string& prefix) {
  const std::pair<const char*, std::size_t> rows[] = {
      {"female\tcorrect", b.female_correct},          {"female\tincorrect", b.female_incorrect},
      {"male\tcorrect", b.male_correct},              {"male\tincorrect", b.male_incorrect},
      {"neutral\torigin_female", b.neutral_from_female}, {"neutral\torigin_male", b.neutral_from_male},
      {"unknown\torigin_female", b.unknown_from_female}, {"unknown\torigin_male", b.unknown_from_male},
  };
  std::string out;
  for (const auto& [label, count] : rows) out += prefix + label + "\t" + std::to_string(count) + "\n";
  return out;
}

constexpr std::string_view kFig2Header =
    "code\treal_female_share\tpredicted_female\tpredicted_male\tpredicted_neutral\tpredicted_unknown\tcount\n";
constexpr std::string_view kFig3Header = "class\tcategory\tcount\n";

}  // namespace

nlohmann::json to_json(const MetricsReport& m) {
  nlohmann::json confusion = nlohmann::json::object();
  for (Gender g : {Gender::Female, Gender::Male}) {
    nlohmann::json row = nlohmann::json::object();
    for (auto p : kPredicted) row[std::string(to_string(p))] = m.counts.at(g, p);
    confusion[std::string(to_string(g))] = row;
  }
  return {
      {"n", m.n},
      {"n_pro", m.n_pro},
      {"n_anti", m.n_anti},
      {"accuracy", m.accuracy},
      {"accuracy_excluding_unknown", optional_number(m.accuracy_excluding_unknown)},
      {"f1_male", m.f1_male},
      {"f1_female", m.f1_female},
      {"delta_g", m.delta_g},
      {"delta_s", optional_number(m.delta_s)},
      {"delta_s_mode", std::string(to_string(m.delta_s_mode))},
      {"confusion", confusion},
  };
}

MetricsReport metrics_from_json(const nlohmann::json& j) {
  MetricsReport m;
  m.n = j.value("n", std::size_t{0});
  m.n_pro = j.value("n_pro", std::size_t{0});
  m.n_anti = j.value("n_anti", std::size_t{0});
  m.accuracy = j.at("accuracy").get<double>();
  m.accuracy_excluding_unknown = read_optional(j, "accuracy_excluding_unknown");
  m.f1_male = j.value("f1_male", 0.0);
  m.f1_female = j.value("f1_female", 0.0);
  m.delta_g = j.at("delta_g").get<double>();
  m.delta_s = read_optional(j, "delta_s");
  auto mode = parse_delta_s_mode(j.value("delta_s_mode", std::string("accuracy")));
  if (!mode) throw Error(ErrorCode::ParseError, "delta_s_mode must be accuracy or f1");
  m.delta_s_mode = *mode;
  if (j.contains("confusion")) {
    for (Gender g : {Gender::Female, Gender::Male}) {
      const auto& row = j.at("confusion").at(std::string(to_string(g)));
      for (auto p : kPredicted) {
        m.counts.cells[static_cast<std::size_t>(g)][static_cast<std::size_t>(p)] =
            row.value(std::string(to_string(p)), std::size_t{0});
      }
    }
  }
  return m;
}

nlohmann::json to_json(const AuditReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    nlohmann::json cell = {{"provider", c.provider}, {"language", c.language}, {"status", std::string(to_string(c.status))}};
    if (!c.error.empty()) cell["error"] = c.error;
    if (c.metrics) {
      cell["metrics"] = to_json(*c.metrics);
      cell["unaligned"] = c.unaligned;
    }
    cells.push_back(std::move(cell));
  }
  const auto& s = report.dataset.summary;
  return {
      {"schema_version", report.schema_version},
      {"tool", {{"name", "mtgender"}, {"version", report.tool_version}}},
      {"dataset",
       {{"path", report.dataset.path},
        {"sha256", report.dataset.sha256},
        {"instances", report.dataset.instances},
        {"female", s.female},
        {"male", s.male},
        {"pro", s.pro},
        {"anti", s.anti},
        {"unclassified", s.unclassified}}},
      {"config", report.config},
      {"cells", cells},
  };
}

AuditReport report_from_json(const nlohmann::json& j) {
  try {
    AuditReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != 1) {
      throw Error(ErrorCode::ParseError, "unsupported report schema version " + std::to_string(r.schema_version));
    }
    if (j.contains("tool")) r.tool_version = j.at("tool").value("version", std::string());
    if (j.contains("dataset")) {
      const auto& d = j.at("dataset");
      r.dataset.path = d.value("path", std::string());
      r.dataset.sha256 = d.value("sha256", std::string());
      r.dataset.instances = d.value("instances", std::size_t{0});
      r.dataset.summary = {d.value("female", std::size_t{0}), d.value("male", std::size_t{0}),
                           d.value("pro", std::size_t{0}), d.value("anti", std::size_t{0}),
                           d.value("unclassified", std::size_t{0})};
    }
    if (j.contains("config")) r.config = j.at("config");
    for (const auto& c : j.at("cells")) {
      CellResult cell;
      cell.provider = c.at("provider").get<std::string>();
      cell.language = c.at("language").get<std::string>();
      auto status = parse_cell_status(c.at("status").get<std::string>());
      if (!status) throw Error(ErrorCode::ParseError, "unknown cell status in report");
      cell.status = *status;
      cell.error = c.value("error", std::string());
      if (c.contains("metrics")) cell.metrics = metrics_from_json(c.at("metrics"));
      cell.unaligned = c.value("unaligned", std::size_t{0});
      r.cells.push_back(std::move(cell));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
  }
}

std::string render_report_json(const AuditReport& report) { return to_json(report).dump(2) + "\n"; }

AuditReport read_report(const std::filesystem::path& path) {
  auto j = nlohmann::json::parse(text::read_file(path), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::ParseError, path.string() + " is not valid JSON");
  return report_from_json(j);
}

std::string format_percent(double fraction) {
  // Rounds the exact product: fma recovers the error of x * 1000, which only
  // matters when the rounded product lands on a half.
  const double scaled = fraction * 1000.0;
  const double residual = std::fma(fraction, 1000.0, -scaled);
  double rounded = std::round(scaled);
  if (std::abs(scaled - std::trunc(scaled)) == 0.5 && residual != 0.0) {
    rounded = residual > 0.0 ? std::ceil(scaled) : std::floor(scaled);
  }
  const auto tenths = static_cast<long long>(rounded);
  const long long mag = tenths < 0 ? -tenths : tenths;
  std::string out = tenths < 0 ? "-" : "";
  out += std::to_string(mag / 10) + "." + std::to_string(mag % 10);
  return out;
}

std::string render_table(const AuditReport& report, TableStyle style) {
  std::vector<std::string> providers;
  std::vector<std::string> languages;
  for (const auto& c : report.cells) {
    if (std::find(providers.begin(), providers.end(), c.provider) == providers.end()) providers.push_back(c.provider);
    if (std::find(languages.begin(), languages.end(), c.language) == languages.end()) languages.push_back(c.language);
  }
  std::stable_sort(languages.begin(), languages.end(),
                   [](const auto& a, const auto& b) { return language_rank(a) < language_rank(b); });

  const std::vector<std::string> columns =
      style == TableStyle::Main ? std::vector<std::string>{"Acc", "dG", "dS"} : std::vector<std::string>{"Acc'", "Acc"};
  constexpr std::size_t kCol = 7;
  constexpr std::size_t kLabel = 10;
  std::vector<std::size_t> group_width;
  for (const auto& p : providers) group_width.push_back(std::max(columns.size() * kCol, text::codepoint_count(p)) + 2);

  std::string out = pad_right("", kLabel);
  for (std::size_t k = 0; k < providers.size(); ++k) out += pad_left(providers[k], group_width[k]);
  out += "\n" + pad_right("Languages", kLabel);
  for (std::size_t k = 0; k < providers.size(); ++k) {
    std::string head;
    for (const auto& col : columns) head += pad_left(col, kCol);
    out += pad_left(head, group_width[k]);
  }
  out += "\n";

  std::optional<LanguageFamily> family;
  for (const auto& lang : languages) {
    auto fam = language_family(lang);
    if (fam != family) {
      family = fam;
      out += "[" + std::string(fam ? to_string(*fam) : "Other") + "]\n";
    }
    std::string upper;
    for (char ch : lang) upper.push_back(static_cast<char>(ch >= 'a' && ch <= 'z' ? ch - 'a' + 'A' : ch));
    out += pad_right("DE->" + upper, kLabel);
    for (std::size_t k = 0; k < providers.size(); ++k) {
      const CellResult* cell = find_cell(report, providers[k], lang);
      std::vector<std::string> values(columns.size(), "-");
      if (cell && cell->status == CellStatus::Ok && cell->metrics) {
        const auto& m = *cell->metrics;
        auto fmt = [](const std::optional<double>& v) { return v ? format_percent(*v) : std::string("-"); };
        if (style == TableStyle::Main) {
          values = {format_percent(m.accuracy), format_percent(m.delta_g), fmt(m.delta_s)};
        } else {
          values = {fmt(m.accuracy_excluding_unknown), format_percent(m.accuracy)};
        }
      }
      std::string group;
      for (const auto& v : values) group += pad_left(v, kCol);
      out += pad_left(group, group_width[k]);
    }
    out += "\n";
  }
  return out;
}

void emit_plot_data(const AuditReport& report, const OccupationRegistry& registry,
                    const std::filesystem::path& output_dir) {
  std::string fig2 = "provider\tlanguage\t" + std::string(kFig2Header);
  std::string fig3 = "provider\tlanguage\t" + std::string(kFig3Header);
  std::vector<EvaluationOutcome> pooled;
  for (const auto& cell : report.cells) {
    if (cell.status != CellStatus::Ok) continue;
    const auto dir = cell_directory(output_dir, cell.provider, cell.language);
    const auto path = dir / "outcomes.tsv";
    if (!std::filesystem::exists(path)) {
      throw Error(ErrorCode::MissingOutcomes, "no outcome dump for " + cell.provider + "/" + cell.language + " at " +
                                                  path.generic_string());
    }
    const auto outcomes = read_outcomes(path);
    if (outcomes.empty()) continue;
    const auto shares = occupation_aggregate(outcomes, registry);
    const auto breakdown = prediction_breakdown(outcomes);
    text::write_file(dir / "fig2_occupations.tsv", std::string(kFig2Header) + fig2_rows(shares, ""));
    text::write_file(dir / "fig3_breakdown.tsv", std::string(kFig3Header) + fig3_rows(breakdown, ""));
    const std::string prefix = cell.provider + "\t" + cell.language + "\t";
    fig2 += fig2_rows(shares, prefix);
    fig3 += fig3_rows(breakdown, prefix);
    pooled.insert(pooled.end(), outcomes.begin(), outcomes.end());
  }
  if (!pooled.empty()) {
    fig2 += fig2_rows(occupation_aggregate(pooled, registry), "*\t*\t");
    fig3 += fig3_rows(prediction_breakdown(pooled), "*\t*\t");
  }
  text::write_file(output_dir / "fig2_occupations.tsv", fig2);
  text::write_file(output_dir / "fig3_breakdown.tsv", fig3);
}

void write_audit_outputs(const AuditReport& report, const OccupationRegistry& registry,
                         const std::filesystem::path& output_dir) {
  std::filesystem::create_directories(output_dir);
  text::write_file(output_dir / "report.json", render_report_json(report));
  text::write_file(output_dir / "table.txt", render_table(report, TableStyle::Main));
  text::write_file(output_dir / "table_acc_prime.txt", render_table(report, TableStyle::AccPrime));
  emit_plot_data(report, registry, output_dir);
}

}  // namespace mtgender
