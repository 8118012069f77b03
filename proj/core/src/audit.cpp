#include "mtgender/audit.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "mtgender/error.hpp"
#include "mtgender/languages.hpp"
#include "mtgender/outcomes.hpp"
#include "mtgender/providers.hpp"
#include "mtgender/report.hpp"
#include "mtgender/text.hpp"

#ifndef MTGENDER_VERSION
#define MTGENDER_VERSION "0.0.0"
#endif

namespace mtgender {
namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.lexically_normal();
}

nlohmann::json with_resolved_files(nlohmann::json provider, const std::filesystem::path& base_dir) {
  if (provider.is_object() && provider.contains("files") && provider.at("files").is_object()) {
    for (auto& [lang, file] : provider.at("files").items()) {
      file = resolve(base_dir, file.get<std::string>()).generic_string();
    }
  }
  return provider;
}

struct ProviderSlot {
  std::string id;
  std::shared_ptr<TranslationProvider> provider;
  std::string error;
  /// Pairs declared by a provider that could not be constructed.
  std::vector<LanguagePair> declared_pairs;
};

AuditReport run_cells(const AuditConfig& config, const std::vector<ProviderSlot>& providers,
                      const BatchOptions& batch) {
  const OccupationRegistry registry = load_occupation_registry(config.registry);
  const ChallengeSet set = load_challenge_set(config.dataset, registry);
  if (set.empty()) throw Error(ErrorCode::InvalidConfig, "dataset " + config.dataset.string() + " is empty");
  const GenderAnalyzer analyzer = GenderAnalyzer::load_directory(config.rules_dir);
  TranslationCache cache(config.cache_dir);

  std::vector<std::string> languages = config.languages;
  std::stable_sort(languages.begin(), languages.end(),
                   [](const auto& a, const auto& b) { return language_rank(a) < language_rank(b); });

  AuditReport report;
  report.tool_version = MTGENDER_VERSION;
  report.dataset.path = config.dataset.generic_string();
  report.dataset.sha256 = text::sha256_hex(text::read_file(config.dataset));
  report.dataset.instances = set.size();
  report.dataset.summary = summarize(set);
  report.config = config_echo(config);

  struct Job {
    const ProviderSlot* slot;
    std::string language;
  };
  std::vector<Job> jobs;
  for (const auto& slot : providers) {
    for (const auto& lang : languages) jobs.push_back({&slot, lang});
  }
  report.cells.resize(jobs.size());

  AlignerConfig aligner = config.aligner;
  aligner.seed = config.seed;

  auto run_one = [&](std::size_t k) {
    const Job& job = jobs[k];
    CellResult& cell = report.cells[k];
    cell.provider = job.slot->id;
    cell.language = job.language;
    try {
      if (!job.slot->provider) {
        const auto& declared = job.slot->declared_pairs;
        if (std::find(declared.begin(), declared.end(), LanguagePair{set.source_language, job.language}) ==
            declared.end()) {
          throw Error(ErrorCode::UnsupportedPair,
                      "provider " + job.slot->id + " does not support " + set.source_language + "->" + job.language);
        }
        throw Error(ErrorCode::AuthMissing, job.slot->error);
      }
      if (!analyzer.supports(job.language)) {
        throw Error(ErrorCode::UnsupportedLanguage, "no rule pack for language '" + job.language + "'");
      }
      std::vector<std::string> sentences;
      sentences.reserve(set.size());
      for (const auto& inst : set.instances) sentences.push_back(inst.sentence);
      auto records = translate_batch(*job.slot->provider, sentences, job.language, cache, batch);
      auto artifacts = evaluate_translations(set, std::move(records), job.language, analyzer, aligner);
      write_cell_artifacts(artifacts, cell_directory(config.output_dir, cell.provider, cell.language));
      cell.metrics = compute_metrics(artifacts.outcomes, config.delta_s_mode);
      cell.unaligned = static_cast<std::size_t>(std::count_if(artifacts.traces.begin(), artifacts.traces.end(),
                                                              [](const auto& t) { return !t.located; }));
      cell.status = CellStatus::Ok;
    } catch (const Error& e) {
      cell.status = e.code() == ErrorCode::UnsupportedPair ? CellStatus::UnsupportedPair : CellStatus::Failed;
      cell.error = std::string(to_string(e.code())) + ": " + e.what();
    } catch (const std::exception& e) {
      cell.status = CellStatus::Failed;
      cell.error = e.what();
    }
  };

  const std::size_t workers = std::min(std::max<std::size_t>(1, config.parallelism), jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < jobs.size(); k = next.fetch_add(1)) run_one(k);
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  write_audit_outputs(report, registry, config.output_dir);
  return report;
}

}  // namespace

std::string_view to_string(CellStatus status) noexcept {
  switch (status) {
    case CellStatus::Ok: return "ok";
    case CellStatus::UnsupportedPair: return "unsupported_pair";
    case CellStatus::Failed: return "failed";
  }
  return "failed";
}

std::size_t AuditReport::failed_cells() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const auto& c) { return c.status == CellStatus::Failed; }));
}

void validate(const AuditConfig& config) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  if (config.dataset.empty()) fail("no dataset given");
  if (config.registry.empty()) fail("no occupation registry given");
  if (config.rules_dir.empty()) fail("no rule-pack directory given");
  if (config.output_dir.empty()) fail("no output directory given");
  if (config.cache_dir.empty()) fail("no cache directory given");
  if (config.providers.empty()) fail("at least one provider is required");
  if (config.languages.empty()) fail("at least one target language is required");
  std::set<std::string> langs;
  for (const auto& l : config.languages) {
    if (!is_target_language(l)) fail("unsupported target language '" + l + "'");
    if (!langs.insert(l).second) fail("target language '" + l + "' listed twice");
  }
  std::set<std::string> ids;
  for (const auto& p : config.providers) {
    if (!p.is_object() || !p.contains("id") || !p.at("id").is_string()) fail("every provider needs a string \"id\"");
    if (!ids.insert(p.at("id").get<std::string>()).second) fail("provider id '" + p.at("id").get<std::string>() + "' listed twice");
  }
  if (config.parallelism == 0) fail("parallelism must be at least 1");
}

AuditConfig audit_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  try {
    AuditConfig c;
    c.dataset = resolve(base_dir, j.at("dataset").get<std::string>());
    c.registry = resolve(base_dir, j.at("registry").get<std::string>());
    c.rules_dir = resolve(base_dir, j.at("rules").get<std::string>());
    if (j.contains("cache_dir")) c.cache_dir = resolve(base_dir, j.at("cache_dir").get<std::string>());
    if (j.contains("output_dir")) c.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
    for (const auto& p : j.at("providers")) {
      if (p.is_string()) {
        c.providers.push_back(load_provider_config(resolve(base_dir, p.get<std::string>())));
      } else {
        c.providers.push_back(with_resolved_files(p, base_dir));
      }
    }
    c.languages = j.at("languages").get<std::vector<std::string>>();
    if (j.contains("aligner")) {
      const auto& a = j.at("aligner");
      c.aligner.iterations = a.value("iterations", c.aligner.iterations);
      c.aligner.tension = a.value("tension", c.aligner.tension);
      c.aligner.null_probability = a.value("null_probability", c.aligner.null_probability);
    }
    if (j.contains("delta_s_mode")) {
      auto mode = parse_delta_s_mode(j.at("delta_s_mode").get<std::string>());
      if (!mode) throw Error(ErrorCode::InvalidConfig, "delta_s_mode must be accuracy or f1");
      c.delta_s_mode = *mode;
    }
    c.seed = j.value("seed", c.seed);
    c.parallelism = j.value("parallelism", c.parallelism);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("audit config: ") + e.what());
  }
}

nlohmann::json config_echo(const AuditConfig& config) {
  nlohmann::json providers = nlohmann::json::array();
  for (const auto& p : config.providers) providers.push_back(p);
  return {
      {"dataset", config.dataset.generic_string()},
      {"registry", config.registry.generic_string()},
      {"rules", config.rules_dir.generic_string()},
      {"providers", providers},
      {"languages", config.languages},
      {"aligner",
       {{"iterations", config.aligner.iterations},
        {"tension", config.aligner.tension},
        {"null_probability", config.aligner.null_probability}}},
      {"delta_s_mode", std::string(to_string(config.delta_s_mode))},
      {"seed", config.seed},
  };
}

nlohmann::json load_provider_config(const std::filesystem::path& path) {
  auto j = nlohmann::json::parse(text::read_file(path), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::InvalidConfig, path.string() + " is not valid JSON");
  return with_resolved_files(std::move(j), path.parent_path());
}

std::filesystem::path cell_directory(const std::filesystem::path& output_dir, std::string_view provider,
                                     std::string_view language) {
  return output_dir / std::string(provider) / std::string(language);
}

CellArtifacts evaluate_translations(const ChallengeSet& set, std::vector<TranslationRecord> translations,
                                    std::string_view language, const GenderAnalyzer& analyzer,
                                    const AlignerConfig& aligner) {
  if (translations.size() != set.size()) {
    throw Error(ErrorCode::MissingTranslation, "got " + std::to_string(translations.size()) + " translations for " +
                                                   std::to_string(set.size()) + " sentences");
  }
  CellArtifacts out;
  out.translations = std::move(translations);

  std::vector<text::Tokenization> sources;
  sources.reserve(set.size());
  for (std::size_t k = 0; k < set.size(); ++k) {
    sources.push_back(text::tokenize(set.instances[k].sentence));
    auto target = text::tokenize(out.translations[k].target);
    if (target.tokens.empty()) {
      throw Error(ErrorCode::RemoteFailure, "translation of instance " + std::to_string(k) + " is empty");
    }
    out.bitext.push_back({sources.back().tokens, std::move(target.tokens)});
  }

  const AlignmentModel model = train(out.bitext, aligner);
  for (std::size_t k = 0; k < set.size(); ++k) {
    const auto& inst = set.instances[k];
    const auto& pair = out.bitext[k];
    out.alignments.push_back(model.viterbi(pair));

    const std::size_t subject = sources[k].word_start[inst.subject_index];
    SubjectTrace trace;
    trace.instance_index = k;
    trace.source_subject = pair.source[subject];
    trace.located = locate_subject(out.alignments.back(), subject, pair.target);
    if (trace.located) trace.target_subject = pair.target[trace.located->target_index];
    trace.prediction = analyzer.predict_for_outcome(language, pair.target, trace.located);

    out.outcomes.push_back({k, inst.gold_gender, trace.prediction.value, inst.stereotype, inst.occupation_code});
    out.traces.push_back(std::move(trace));
  }
  return out;
}

void write_cell_artifacts(const CellArtifacts& artifacts, const std::filesystem::path& cell_dir) {
  std::filesystem::create_directories(cell_dir);
  text::write_file(cell_dir / "bitext.txt", render_bitext(artifacts.bitext));

  std::string alignments;
  for (const auto& a : artifacts.alignments) alignments += render_pharaoh(a) + "\n";
  text::write_file(cell_dir / "alignments.txt", alignments);

  std::string translations;
  for (const auto& r : artifacts.translations) translations += r.source + " ||| " + r.target + "\n";
  text::write_file(cell_dir / "translations.txt", translations);

  std::string predictions =
      "instance_index\tsource_subject\ttarget_index\ttarget_subject\tpreceding_token\tpredicted\tevidence\n";
  for (const auto& t : artifacts.traces) {
    predictions += std::to_string(t.instance_index) + "\t" + t.source_subject + "\t" +
                   (t.located ? std::to_string(t.located->target_index) : std::string("-")) + "\t" +
                   (t.located ? t.target_subject : std::string("-")) + "\t" +
                   (t.located && t.located->preceding_token ? *t.located->preceding_token : std::string("-")) + "\t" +
                   std::string(to_string(t.prediction.value)) + "\t" + std::string(to_string(t.prediction.evidence)) +
                   "\n";
  }
  text::write_file(cell_dir / "predictions.tsv", predictions);
  text::write_file(cell_dir / "outcomes.tsv", render_outcomes(artifacts.outcomes));
}

AuditReport run_audit(const AuditConfig& config, const BatchOptions& batch) {
  validate(config);
  std::vector<ProviderSlot> slots;
  for (const auto& p : config.providers) {
    ProviderSlot slot;
    slot.id = p.at("id").get<std::string>();
    try {
      slot.provider = provider_from_json(p, {});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::AuthMissing) throw;
      slot.error = e.what();
      slot.declared_pairs = http_config_from_json(p).supported_pairs;
    }
    slots.push_back(std::move(slot));
  }
  return run_cells(config, slots, batch);
}

AuditReport run_audit(const AuditConfig& config, std::vector<std::shared_ptr<TranslationProvider>> providers,
                      const BatchOptions& batch) {
  AuditConfig checked = config;
  if (checked.providers.empty()) {
    for (const auto& p : providers) checked.providers.push_back({{"id", p->id()}, {"type", "custom"}});
  }
  validate(checked);
  std::vector<ProviderSlot> slots;
  for (auto& p : providers) slots.push_back({p->id(), std::move(p), {}, {}});
  return run_cells(checked, slots, batch);
}

}  // namespace mtgender
