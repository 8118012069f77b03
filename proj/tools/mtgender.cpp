// mtgender: command-line front end for the gender-bias audit pipeline.
//
// Exit status: 0 when every cell succeeded, 2 when some cells failed,
// 1 on configuration, input or I/O errors.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mtgender/aligner.hpp"
#include "mtgender/audit.hpp"
#include "mtgender/challenge_set.hpp"
#include "mtgender/error.hpp"
#include "mtgender/languages.hpp"
#include "mtgender/metrics.hpp"
#include "mtgender/morphology.hpp"
#include "mtgender/occupation_registry.hpp"
#include "mtgender/outcomes.hpp"
#include "mtgender/providers.hpp"
#include "mtgender/report.hpp"
#include "mtgender/text.hpp"
#include "mtgender/translation.hpp"

namespace fs = std::filesystem;
using namespace mtgender;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitCellsFailed = 2;

struct Shared {
  std::string dataset;
  std::string registry;
  std::vector<std::string> languages;
  std::vector<std::string> providers;
  std::string cache_dir;
  std::string out;
  std::string delta_s_mode;
  std::optional<std::uint64_t> seed;
  std::string rules;
};

void emit(const std::string& content, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << content;
  } else {
    text::write_file(out, content);
  }
}

const std::string& single_language(const Shared& s) {
  if (s.languages.size() != 1) throw Error(ErrorCode::InvalidConfig, "exactly one --lang is required");
  if (!is_target_language(s.languages.front())) {
    throw Error(ErrorCode::InvalidConfig, "unknown target language '" + s.languages.front() + "'");
  }
  return s.languages.front();
}

DeltaSMode delta_s_mode_or(const Shared& s, DeltaSMode fallback) {
  if (s.delta_s_mode.empty()) return fallback;
  auto mode = parse_delta_s_mode(s.delta_s_mode);
  if (!mode) throw Error(ErrorCode::InvalidConfig, "--delta-s-mode must be accuracy or f1");
  return *mode;
}

OccupationRegistry registry_or_empty(const Shared& s) {
  return s.registry.empty() ? OccupationRegistry{} : load_occupation_registry(s.registry);
}

ChallengeSet dataset(const Shared& s, const OccupationRegistry& registry) {
  if (s.dataset.empty()) throw Error(ErrorCode::InvalidConfig, "--dataset is required");
  return load_challenge_set(s.dataset, registry);
}

// --provider accepts a provider JSON file or, for convenience, a bare
// "source ||| target" file used as an offline provider for --lang.
std::unique_ptr<TranslationProvider> open_provider(const std::string& source, const std::string& lang) {
  const fs::path path(source);
  if (path.extension() == ".json") return provider_from_json(load_provider_config(path), {});
  return offline_provider(path, lang, path.stem().string());
}

std::vector<TranslationRecord> records_from_parallel(const ChallengeSet& set, const fs::path& path,
                                                     const std::string& lang) {
  auto provider = offline_provider(path, lang, "offline");
  std::vector<TranslationRecord> out;
  out.reserve(set.size());
  for (const auto& inst : set.instances) {
    TranslationRecord r;
    r.provider_id = provider->id();
    r.source_lang = "de";
    r.target_lang = lang;
    r.source = inst.sentence;
    r.target = provider->translate(inst.sentence, {"de", lang});
    out.push_back(std::move(r));
  }
  return out;
}

int cmd_audit(const Shared& s, const std::string& config_path, std::optional<std::size_t> parallelism) {
  AuditConfig config;
  if (!config_path.empty()) {
    auto j = nlohmann::json::parse(text::read_file(config_path), nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::InvalidConfig, config_path + " is not valid JSON");
    config = audit_config_from_json(j, fs::path(config_path).parent_path());
  }
  if (!s.dataset.empty()) config.dataset = s.dataset;
  if (!s.registry.empty()) config.registry = s.registry;
  if (!s.rules.empty()) config.rules_dir = s.rules;
  if (!s.languages.empty()) config.languages = s.languages;
  if (!s.providers.empty()) {
    config.providers.clear();
    for (const auto& p : s.providers) config.providers.push_back(load_provider_config(p));
  }
  if (!s.cache_dir.empty()) config.cache_dir = s.cache_dir;
  if (!s.out.empty()) config.output_dir = s.out;
  config.delta_s_mode = delta_s_mode_or(s, config.delta_s_mode);
  if (s.seed) config.seed = *s.seed;
  if (parallelism) config.parallelism = *parallelism;
  validate(config);

  const AuditReport report = run_audit(config);
  std::cout << render_table(report);
  for (const auto& cell : report.cells) {
    if (cell.status == CellStatus::Ok && cell.unaligned > 0) {
      std::cerr << "note: " << cell.provider << "/" << cell.language << ": " << cell.unaligned
                << " subject(s) without alignment, predicted unknown\n";
    }
    if (cell.status != CellStatus::Ok) {
      std::cerr << cell.provider << "/" << cell.language << ": " << to_string(cell.status) << ": " << cell.error
                << "\n";
    }
  }
  std::cerr << "report written to " << (config.output_dir / "report.json").string() << "\n";
  return report.failed_cells() > 0 ? kExitCellsFailed : kExitOk;
}

int cmd_translate(const Shared& s) {
  const std::string& lang = single_language(s);
  if (s.providers.size() != 1) throw Error(ErrorCode::InvalidConfig, "exactly one --provider is required");
  if (s.cache_dir.empty()) throw Error(ErrorCode::InvalidConfig, "--cache-dir is required");
  const auto set = dataset(s, registry_or_empty(s));
  auto provider = open_provider(s.providers.front(), lang);
  std::vector<std::string> sentences;
  for (const auto& inst : set.instances) sentences.push_back(inst.sentence);
  TranslationCache cache(s.cache_dir);
  const auto records = translate_batch(*provider, sentences, lang, cache);
  std::string out;
  for (const auto& r : records) out += r.source + " ||| " + r.target + "\n";
  emit(out, s.out);
  return kExitOk;
}

int cmd_align(const std::string& bitext_path, const std::string& out, const AlignerConfig& config) {
  if (bitext_path.empty()) throw Error(ErrorCode::InvalidConfig, "--bitext is required");
  const Bitext bitext = read_bitext(bitext_path);
  const AlignmentModel model = train(bitext, config);
  std::string rendered;
  for (const auto& pair : bitext) rendered += render_pharaoh(model.viterbi(pair)) + "\n";
  emit(rendered, out);
  return kExitOk;
}

int cmd_predict(const Shared& s, const std::string& translations, const std::string& words,
                const AlignerConfig& aligner) {
  const std::string& lang = single_language(s);
  if (s.rules.empty()) throw Error(ErrorCode::InvalidConfig, "--rules is required");
  const GenderAnalyzer analyzer = GenderAnalyzer::load_directory(s.rules);
  if (!analyzer.supports(lang)) throw Error(ErrorCode::UnsupportedLanguage, "no rule pack for '" + lang + "'");

  if (!words.empty()) {
    // Lexicon mode: "determiner<TAB>noun" or "noun" per line.
    std::string out;
    for (const auto& line : text::lines(text::read_file(words))) {
      if (text::trim(line).empty() || line.front() == '#') continue;
      auto cols = text::split(line, '\t');
      std::optional<std::string_view> det;
      std::string_view noun = cols.back();
      if (cols.size() >= 2 && cols[0] != "-") det = cols[0];
      const auto p = analyzer.predict(lang, noun, det);
      out += std::string(noun) + "\t" + std::string(to_string(p.value)) + "\t" + std::string(to_string(p.evidence)) +
             "\n";
    }
    emit(out, s.out);
    return kExitOk;
  }

  if (translations.empty()) throw Error(ErrorCode::InvalidConfig, "--translations or --words is required");
  if (s.out.empty()) throw Error(ErrorCode::InvalidConfig, "--out directory is required");
  const auto set = dataset(s, registry_or_empty(s));
  AlignerConfig config = aligner;
  if (s.seed) config.seed = *s.seed;
  const auto artifacts =
      evaluate_translations(set, records_from_parallel(set, translations, lang), lang, analyzer, config);
  write_cell_artifacts(artifacts, s.out);
  std::cerr << "outcomes written to " << (fs::path(s.out) / "outcomes.tsv").string() << "\n";
  return kExitOk;
}

int cmd_evaluate(const Shared& s, const std::string& outcomes_path) {
  if (outcomes_path.empty()) throw Error(ErrorCode::InvalidConfig, "--outcomes is required");
  const auto outcomes = read_outcomes(outcomes_path);
  const MetricsReport m = compute_metrics(outcomes, delta_s_mode_or(s, DeltaSMode::Accuracy));
  emit(to_json(m).dump(2) + "\n", s.out);
  return kExitOk;
}

int cmd_report(const Shared& s, const std::string& report_path, const std::string& style, bool plots) {
  if (report_path.empty()) throw Error(ErrorCode::InvalidConfig, "--report is required");
  const AuditReport report = read_report(report_path);
  if (plots) {
    if (s.registry.empty()) throw Error(ErrorCode::InvalidConfig, "--plot-data needs --registry");
    emit_plot_data(report, load_occupation_registry(s.registry), fs::path(report_path).parent_path());
  }
  emit(render_table(report, style == "acc-prime" ? TableStyle::AccPrime : TableStyle::Main), s.out);
  return report.failed_cells() > 0 ? kExitCellsFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gender-bias audit for German-to-X machine translation"};
  app.set_version_flag("--version", std::string(MTGENDER_VERSION));
  app.require_subcommand(1);

  Shared s;
  auto add_shared = [&s](CLI::App* sub) {
    sub->add_option("--dataset", s.dataset, "Challenge set TSV");
    sub->add_option("--registry", s.registry, "Occupation registry TSV");
    sub->add_option("--lang", s.languages, "Target language code(s)")->delimiter(',');
    sub->add_option("--provider", s.providers, "Provider JSON file(s)")->delimiter(',');
    sub->add_option("--cache-dir", s.cache_dir, "Translation cache directory");
    sub->add_option("--out", s.out, "Output file or directory");
    sub->add_option("--delta-s-mode", s.delta_s_mode, "accuracy or f1")
        ->check(CLI::IsMember({"accuracy", "f1"}));
    sub->add_option("--seed", s.seed, "Seed recorded with the run");
    sub->add_option("--rules", s.rules, "Directory of <lang>.rules packs");
  };

  auto* audit = app.add_subcommand("audit", "Translate, align, predict and evaluate every provider/language cell");
  add_shared(audit);
  std::string config_path;
  std::optional<std::size_t> parallelism;
  audit->add_option("--config", config_path, "Audit configuration JSON");
  audit->add_option("--parallelism", parallelism, "Cells evaluated concurrently");

  auto* translate = app.add_subcommand("translate", "Translate the challenge set through one provider (cache-first)");
  add_shared(translate);

  AlignerConfig aligner;
  auto add_aligner = [&aligner](CLI::App* sub) {
    sub->add_option("--iters", aligner.iterations, "EM iterations")->capture_default_str();
    sub->add_option("--lambda", aligner.tension, "Diagonal tension")->capture_default_str();
    sub->add_option("--p0", aligner.null_probability, "Null alignment probability")->capture_default_str();
  };
  auto* align = app.add_subcommand("align", "Word-align a 'source ||| target' bitext, Pharaoh output");
  std::string bitext_path, align_out;
  std::uint64_t align_seed = 0;
  align->add_option("--bitext", bitext_path, "Tokenized bitext")->required();
  align->add_option("--out", align_out, "Pharaoh alignment file (default stdout)");
  align->add_option("--seed", align_seed, "Seed recorded with the model")->capture_default_str();
  add_aligner(align);

  auto* predict = app.add_subcommand("predict", "Predict subject gender from translations, or classify a word list");
  add_shared(predict);
  std::string translations, words;
  predict->add_option("--translations", translations, "'source ||| target' file covering the dataset");
  predict->add_option("--words", words, "Word list: 'determiner<TAB>noun' or 'noun' per line");
  add_aligner(predict);

  auto* evaluate = app.add_subcommand("evaluate", "Compute metrics from an outcomes TSV");
  add_shared(evaluate);
  std::string outcomes_path;
  evaluate->add_option("--outcomes", outcomes_path, "outcomes.tsv")->required();

  auto* report = app.add_subcommand("report", "Render a table from report.json");
  add_shared(report);
  std::string report_path, style = "main";
  bool plots = false;
  report->add_option("--report", report_path, "report.json")->required();
  report->add_option("--style", style, "main or acc-prime")->check(CLI::IsMember({"main", "acc-prime"}));
  report->add_flag("--plot-data", plots, "Regenerate plot-data files next to the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*audit) return cmd_audit(s, config_path, parallelism);
    if (*translate) return cmd_translate(s);
    if (*align) {
      aligner.seed = align_seed;
      return cmd_align(bitext_path, align_out, aligner);
    }
    if (*predict) return cmd_predict(s, translations, words, aligner);
    if (*evaluate) return cmd_evaluate(s, outcomes_path);
    if (*report) return cmd_report(s, report_path, style, plots);
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
