#include "mtgender/translation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ctime>
#include <exception>
#include <thread>

#include "mtgender/languages.hpp"
#include "mtgender/text.hpp"

namespace mtgender {
namespace {

bool valid_provider_id(std::string_view id) {
  if (id.empty() || id == "." || id == "..") return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
           c == '.';
  });
}

void default_sleep(std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }

}  // namespace

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RateLimiter::RateLimiter(double requests_per_second) : rps_(requests_per_second) {}

void RateLimiter::acquire(const Sleeper& sleep) {
  if (!(rps_ > 0.0)) return;
  using clock = std::chrono::steady_clock;
  const auto interval = std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(1.0 / rps_));
  clock::time_point slot;
  {
    std::lock_guard lock(mu_);
    const auto now = clock::now();
    slot = std::max(now, next_slot_);
    next_slot_ = slot + interval;
  }
  const auto wait = slot - clock::now();
  if (wait > clock::duration::zero()) {
    sleep(std::chrono::ceil<std::chrono::milliseconds>(wait));
  }
}

TranslationProvider::TranslationProvider(std::string id, std::set<LanguagePair> supported_pairs,
                                         double requests_per_second, std::size_t max_in_flight)
    : capability_{std::move(id), std::move(supported_pairs)},
      limiter_(requests_per_second),
      max_in_flight_(std::max<std::size_t>(1, max_in_flight)) {
  if (!valid_provider_id(capability_.provider_id)) {
    throw Error(ErrorCode::InvalidConfig, "provider id '" + capability_.provider_id +
                                              "' must be non-empty and use only [A-Za-z0-9._-]");
  }
}

std::vector<std::pair<std::string, std::string>> parse_parallel_file(std::string_view content,
                                                                     std::string_view source_name) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t line_no = 0;
  for (const auto& line : text::lines(content)) {
    ++line_no;
    std::string left, right;
    if (!text::split_parallel(line, left, right)) {
      throw Error(ErrorCode::ParseError, std::string(source_name) + ":" + std::to_string(line_no) +
                                             ": expected exactly one ' ||| ' separator");
    }
    out.emplace_back(text::nfc(left), text::nfc(right));
  }
  return out;
}

OfflineProvider::OfflineProvider(std::string id, const std::map<std::string, std::filesystem::path>& files_by_target,
                                 std::string source_lang)
    : TranslationProvider(
          std::move(id),
          [&] {
            std::set<LanguagePair> pairs;
            for (const auto& [tgt, path] : files_by_target) pairs.insert({source_lang, tgt});
            return pairs;
          }(),
          0.0, 1) {
  for (const auto& [tgt, path] : files_by_target) {
    auto& table = table_[tgt];
    for (auto& [src, trg] : parse_parallel_file(text::read_file(path), path.string())) {
      if (text::trim(trg).empty()) {
        throw Error(ErrorCode::ParseError, path.string() + ": empty translation for '" + src + "'");
      }
      auto [it, inserted] = table.emplace(src, trg);
      if (!inserted && it->second != trg) {
        throw Error(ErrorCode::DuplicateKey, path.string() + ": conflicting translations for '" + src + "'");
      }
    }
  }
}

std::string OfflineProvider::translate(const std::string& source, const LanguagePair& pair) {
  auto t = table_.find(pair.target);
  if (t != table_.end()) {
    auto it = t->second.find(source);
    if (it != t->second.end()) return it->second;
  }
  throw ProviderError(ErrorCode::MissingTranslation,
                      "provider " + id() + " has no " + pair.target + " translation for '" + source + "'", false);
}

std::unique_ptr<TranslationProvider> offline_provider(const std::filesystem::path& path, std::string_view target_lang,
                                                      std::string id) {
  return std::make_unique<OfflineProvider>(std::move(id),
                                           std::map<std::string, std::filesystem::path>{{std::string(target_lang), path}});
}

namespace {

std::string fetch_with_retries(TranslationProvider& provider, const std::string& source, const LanguagePair& pair,
                               const RetryPolicy& retry, const Sleeper& sleep) {
  const int attempts = std::max(1, retry.attempts);
  ErrorCode last_code = ErrorCode::RemoteFailure;
  std::string last_message;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    provider.rate_limiter().acquire(sleep);
    try {
      std::string target = provider.translate(source, pair);
      if (text::trim(target).empty()) {
        throw ProviderError(ErrorCode::RemoteFailure, "provider " + provider.id() + " returned an empty translation",
                            false);
      }
      return target;
    } catch (const ProviderError& e) {
      if (!e.transient()) throw;
      last_code = e.code();
      last_message = e.what();
    }
    if (attempt < attempts) {
      const double factor = std::pow(retry.multiplier, attempt - 1);
      sleep(std::chrono::milliseconds(static_cast<long long>(static_cast<double>(retry.initial_backoff.count()) * factor)));
    }
  }
  const ErrorCode code = last_code == ErrorCode::RateLimited ? ErrorCode::RateLimited : ErrorCode::RemoteFailure;
  throw ProviderError(code,
                      "provider " + provider.id() + " failed after " + std::to_string(attempts) + " attempts: " + last_message,
                      false);
}

}  // namespace

std::vector<TranslationRecord> translate_batch(TranslationProvider& provider, std::span<const std::string> sentences,
                                               std::string_view target_lang, TranslationCache& cache,
                                               const BatchOptions& options) {
  const LanguagePair pair{options.source_lang, std::string(target_lang)};
  if (!is_target_language(target_lang) || !provider.capability().supports(pair)) {
    throw Error(ErrorCode::UnsupportedPair,
                "provider " + provider.id() + " does not support " + pair.source + "->" + pair.target);
  }
  const Sleeper sleep = options.sleep ? options.sleep : Sleeper(default_sleep);
  const auto clock = options.clock ? options.clock : std::function<std::string()>(utc_timestamp);

  std::vector<std::optional<TranslationRecord>> results(sentences.size());
  std::vector<std::string> missing;
  {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      if (auto hit = cache.lookup(provider.id(), pair, sentences[i])) {
        results[i] = std::move(*hit);
      } else if (seen.insert(sentences[i]).second) {
        missing.push_back(sentences[i]);
      }
    }
  }

  std::vector<std::optional<TranslationRecord>> fetched(missing.size());
  std::vector<std::exception_ptr> failures(missing.size());
  if (!missing.empty()) {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    auto worker = [&] {
      for (;;) {
        if (failed.load()) return;
        const std::size_t k = next.fetch_add(1);
        if (k >= missing.size()) return;
        try {
          auto target = fetch_with_retries(provider, missing[k], pair, options.retry, sleep);
          fetched[k] = TranslationRecord{provider.id(), pair.source, pair.target, missing[k], std::move(target), clock()};
        } catch (...) {
          failures[k] = std::current_exception();
          failed.store(true);
        }
      }
    };
    const std::size_t n_workers = std::min(provider.max_in_flight(), missing.size());
    if (n_workers <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(n_workers);
      for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    }
  }

  std::vector<TranslationRecord> fresh;
  for (auto& r : fetched) {
    if (r) fresh.push_back(*r);
  }
  cache.store(fresh);
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  std::vector<TranslationRecord> out;
  out.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (results[i]) {
      out.push_back(std::move(*results[i]));
      continue;
    }
    auto k = static_cast<std::size_t>(std::find(missing.begin(), missing.end(), sentences[i]) - missing.begin());
    out.push_back(*fetched[k]);
  }
  return out;
}

}  // namespace mtgender
