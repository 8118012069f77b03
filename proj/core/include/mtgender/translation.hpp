#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mtgender/error.hpp"

namespace mtgender {

struct LanguagePair {
  std::string source;
  std::string target;

  auto operator<=>(const LanguagePair&) const = default;
};

struct TranslationRecord {
  std::string provider_id;
  std::string source_lang;
  std::string target_lang;
  std::string source;
  std::string target;
  /// UTC, ISO-8601 ("2024-05-01T12:00:00Z").
  std::string fetched_at;

  bool operator==(const TranslationRecord&) const = default;
};

struct ProviderCapability {
  std::string provider_id;
  std::set<LanguagePair> supported_pairs;

  bool supports(const LanguagePair& pair) const { return supported_pairs.count(pair) != 0; }
};

/// Failure raised by a provider for a single request. Transient failures
/// (rate limiting, 5xx, network) are retried by translate_batch.
class ProviderError : public Error {
 public:
  ProviderError(ErrorCode code, const std::string& message, bool transient)
      : Error(code, message), transient_(transient) {}
  bool transient() const noexcept { return transient_; }

 private:
  bool transient_;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// Spaces requests at least 1/rps apart. A non-positive rate disables limiting.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_second = 0.0);
  void acquire(const Sleeper& sleep);
  double requests_per_second() const noexcept { return rps_; }

 private:
  double rps_;
  std::mutex mu_;
  std::chrono::steady_clock::time_point next_slot_{};
};

class TranslationProvider {
 public:
  TranslationProvider(std::string id, std::set<LanguagePair> supported_pairs, double requests_per_second = 0.0,
                      std::size_t max_in_flight = 4);
  virtual ~TranslationProvider() = default;

  TranslationProvider(const TranslationProvider&) = delete;
  TranslationProvider& operator=(const TranslationProvider&) = delete;

  const std::string& id() const noexcept { return capability_.provider_id; }
  const ProviderCapability& capability() const noexcept { return capability_; }
  std::size_t max_in_flight() const noexcept { return max_in_flight_; }
  RateLimiter& rate_limiter() noexcept { return limiter_; }

  /// One request. Must be safe to call concurrently from max_in_flight() threads.
  /// Throws ProviderError.
  virtual std::string translate(const std::string& source, const LanguagePair& pair) = 0;

 private:
  ProviderCapability capability_;
  RateLimiter limiter_;
  std::size_t max_in_flight_;
};

/// Answers from recorded `source ||| target` files, one file per target language.
class OfflineProvider final : public TranslationProvider {
 public:
  OfflineProvider(std::string id, const std::map<std::string, std::filesystem::path>& files_by_target,
                  std::string source_lang = "de");

  /// Throws ProviderError(MissingTranslation) for sources absent from the file.
  std::string translate(const std::string& source, const LanguagePair& pair) override;

 private:
  std::map<std::string, std::unordered_map<std::string, std::string>> table_;
};

std::unique_ptr<TranslationProvider> offline_provider(const std::filesystem::path& path, std::string_view target_lang,
                                                      std::string id = "offline");

/// Parses `source ||| target` lines into (source, target) pairs, NFC-normalized.
std::vector<std::pair<std::string, std::string>> parse_parallel_file(std::string_view content,
                                                                     std::string_view source_name);

/// Durable translation store: `<root>/<provider>/<src>-<tgt>.tsv`, one
/// `sha256(source)<TAB>fetched_at<TAB>source<TAB>target` row per record,
/// fields backslash-escaped. Files are only ever appended to.
class TranslationCache {
 public:
  explicit TranslationCache(std::filesystem::path root);

  std::optional<TranslationRecord> lookup(const std::string& provider_id, const LanguagePair& pair,
                                          const std::string& source) const;
  /// Appends records whose key is not already present. Serialized through one writer.
  void store(std::span<const TranslationRecord> records);

  std::filesystem::path file_for(const std::string& provider_id, const LanguagePair& pair) const;
  const std::filesystem::path& root() const noexcept { return root_; }

 private:
  struct Shard {
    std::unordered_map<std::string, TranslationRecord> by_source;
  };
  using ShardKey = std::pair<std::string, LanguagePair>;

  const Shard& shard(const std::string& provider_id, const LanguagePair& pair) const;

  std::filesystem::path root_;
  mutable std::shared_mutex mu_;
  mutable std::mutex write_mu_;
  mutable std::map<ShardKey, Shard> shards_;
};

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{1000};
  double multiplier = 2.0;
};

struct BatchOptions {
  std::string source_lang = "de";
  RetryPolicy retry;
  Sleeper sleep;                       // defaults to std::this_thread::sleep_for
  std::function<std::string()> clock;  // defaults to the current UTC time
};

/// Translates `sentences` cache-first. Output i corresponds to input i. Every
/// freshly fetched record is persisted before the function returns or throws.
/// Throws UnsupportedPair, RateLimited, RemoteFailure or MissingTranslation.
std::vector<TranslationRecord> translate_batch(TranslationProvider& provider, std::span<const std::string> sentences,
                                               std::string_view target_lang, TranslationCache& cache,
                                               const BatchOptions& options = {});

std::string utc_timestamp();

}  // namespace mtgender
