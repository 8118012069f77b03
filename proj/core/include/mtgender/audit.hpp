#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "mtgender/aligner.hpp"
#include "mtgender/challenge_set.hpp"
#include "mtgender/metrics.hpp"
#include "mtgender/morphology.hpp"
#include "mtgender/translation.hpp"

namespace mtgender {

struct AuditConfig {
  std::filesystem::path dataset;
  std::filesystem::path registry;
  std::filesystem::path rules_dir;
  /// Provider objects as accepted by provider_from_json(); relative paths resolve against the working directory.
  std::vector<nlohmann::json> providers;
  std::vector<std::string> languages;
  std::filesystem::path cache_dir;
  std::filesystem::path output_dir;
  AlignerConfig aligner;
  DeltaSMode delta_s_mode = DeltaSMode::Accuracy;
  std::uint64_t seed = 0;
  /// Cells evaluated concurrently.
  std::size_t parallelism = 2;
};

/// Throws InvalidConfig.
void validate(const AuditConfig& config);

/// Reads the JSON form of an AuditConfig. Relative paths, including offline
/// provider files, resolve lexically against `base_dir`. A provider entry may
/// be an inline object or the path of a provider JSON file.
AuditConfig audit_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

/// Reads a provider JSON file; offline "files" resolve against its directory.
nlohmann::json load_provider_config(const std::filesystem::path& path);

/// Echo of the semantic configuration; excludes output and cache locations.
nlohmann::json config_echo(const AuditConfig& config);

enum class CellStatus { Ok, UnsupportedPair, Failed };

std::string_view to_string(CellStatus status) noexcept;

struct CellResult {
  std::string provider;
  std::string language;
  CellStatus status = CellStatus::Ok;
  std::string error;
  std::optional<MetricsReport> metrics;
  /// Instances whose subject had no alignment link.
  std::size_t unaligned = 0;
};

struct DatasetInfo {
  std::string path;
  std::string sha256;
  std::size_t instances = 0;
  ChallengeSetSummary summary;
};

struct AuditReport {
  int schema_version = 1;
  std::string tool_version;
  DatasetInfo dataset;
  nlohmann::json config = nlohmann::json::object();
  std::vector<CellResult> cells;

  std::size_t failed_cells() const noexcept;
};

/// Per-instance trace of one evaluated cell.
struct SubjectTrace {
  std::size_t instance_index = 0;
  std::string source_subject;
  std::optional<LocatedSubject> located;
  std::string target_subject;
  GenderPrediction prediction;
};

struct CellArtifacts {
  Bitext bitext;
  std::vector<Alignment> alignments;
  std::vector<TranslationRecord> translations;
  std::vector<SubjectTrace> traces;
  std::vector<EvaluationOutcome> outcomes;
};

/// Aligns the challenge set against its translations and predicts the
/// subject's gender in every translation.
CellArtifacts evaluate_translations(const ChallengeSet& set, std::vector<TranslationRecord> translations,
                                    std::string_view language, const GenderAnalyzer& analyzer,
                                    const AlignerConfig& aligner);

/// Writes bitext.txt, alignments.txt, translations.txt, predictions.tsv and
/// outcomes.tsv into `cell_dir`.
void write_cell_artifacts(const CellArtifacts& artifacts, const std::filesystem::path& cell_dir);

/// End-to-end evaluation of every (provider, language) cell. Cell failures are
/// recorded in the report; configuration and input errors throw.
AuditReport run_audit(const AuditConfig& config, const BatchOptions& batch = {});

/// Same, with provider objects supplied by the caller instead of config.providers.
AuditReport run_audit(const AuditConfig& config, std::vector<std::shared_ptr<TranslationProvider>> providers,
                      const BatchOptions& batch = {});

std::filesystem::path cell_directory(const std::filesystem::path& output_dir, std::string_view provider,
                                     std::string_view language);

}  // namespace mtgender
