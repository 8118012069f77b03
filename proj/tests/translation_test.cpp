#include <gtest/gtest.h>

#include <atomic>
#include <mutex>
#include <random>
#include <thread>

#include "mtgender/error.hpp"
#include "mtgender/text.hpp"
#include "mtgender/translation.hpp"
#include "test_support.hpp"

using namespace mtgender;
using namespace std::chrono_literals;

namespace {

// Upper-cases the input; fails scripted sentences a fixed number of times.
class FakeProvider : public TranslationProvider {
 public:
  FakeProvider(std::string id = "fake", std::size_t in_flight = 1, double rps = 0.0)
      : TranslationProvider(std::move(id), {{"de", "es"}, {"de", "fr"}}, rps, in_flight) {}

  std::string translate(const std::string& source, const LanguagePair& pair) override {
    calls.fetch_add(1);
    {
      std::lock_guard lock(mu);
      auto it = failures.find(source);
      if (it != failures.end() && it->second.remaining > 0) {
        --it->second.remaining;
        throw ProviderError(it->second.code, "scripted failure", it->second.transient);
      }
    }
    return pair.target + ":" + source;
  }

  struct Script {
    int remaining;
    ErrorCode code;
    bool transient;
  };
  std::mutex mu;
  std::map<std::string, Script> failures;
  std::atomic<int> calls{0};
};

struct RecordingSleep {
  std::shared_ptr<std::vector<std::chrono::milliseconds>> waits = std::make_shared<std::vector<std::chrono::milliseconds>>();
  std::shared_ptr<std::mutex> mu = std::make_shared<std::mutex>();
  void operator()(std::chrono::milliseconds d) const {
    std::lock_guard lock(*mu);
    waits->push_back(d);
  }
};

BatchOptions fast_options(RecordingSleep sleep = {}) {
  BatchOptions o;
  o.sleep = sleep;
  o.clock = [] { return std::string("2024-01-01T00:00:00Z"); };
  return o;
}

ErrorCode batch_error(TranslationProvider& p, const std::vector<std::string>& s, std::string_view lang,
                      TranslationCache& cache, const BatchOptions& o) {
  try {
    translate_batch(p, s, lang, cache, o);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::Io;
}

}  // namespace

TEST(TranslationCache, StoreLookupAndReload) {
  const auto dir = mtgender::testing::scratch("cache_reload");
  TranslationRecord rec{"p", "de", "es", "Die Ärztin\tlacht.", "La doctora\nríe.", "t0"};
  {
    TranslationCache cache(dir);
    EXPECT_FALSE(cache.lookup("p", {"de", "es"}, rec.source));
    cache.store(std::vector{rec});
    EXPECT_EQ(cache.lookup("p", {"de", "es"}, rec.source), rec);
  }
  TranslationCache fresh(dir);
  EXPECT_EQ(fresh.lookup("p", {"de", "es"}, rec.source), rec);
  EXPECT_FALSE(fresh.lookup("p", {"de", "fr"}, rec.source));
  EXPECT_FALSE(fresh.lookup("q", {"de", "es"}, rec.source));
  EXPECT_TRUE(std::filesystem::exists(dir / "p" / "de-es.tsv"));
}

TEST(TranslationCache, FirstRecordWins) {
  const auto dir = mtgender::testing::scratch("cache_first");
  TranslationCache cache(dir);
  cache.store(std::vector{TranslationRecord{"p", "de", "es", "a", "x", "t0"}});
  cache.store(std::vector{TranslationRecord{"p", "de", "es", "a", "y", "t1"}});
  EXPECT_EQ(cache.lookup("p", {"de", "es"}, "a")->target, "x");
  EXPECT_EQ(text::lines(text::read_file(cache.file_for("p", {"de", "es"}))).size(), 1u);
}

TEST(TranslationCache, DetectsCorruption) {
  const auto dir = mtgender::testing::scratch("cache_corrupt");
  {
    TranslationCache cache(dir);
    cache.store(std::vector{TranslationRecord{"p", "de", "es", "a", "x", "t0"}});
  }
  const auto file = dir / "p" / "de-es.tsv";
  auto content = text::read_file(file);
  content[0] = content[0] == '0' ? '1' : '0';
  text::write_file(file, content);
  TranslationCache cache(dir);
  try {
    cache.lookup("p", {"de", "es"}, "a");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
  }
}

TEST(TranslationCacheProperty, DistinctSourcesNeverCollide) {
  const auto dir = mtgender::testing::scratch("cache_distinct");
  std::mt19937_64 rng(47);
  std::map<std::string, std::string> expected;
  std::vector<TranslationRecord> records;
  for (int i = 0; i < 300; ++i) {
    std::string s;
    for (std::size_t k = 0, n = 1 + rng() % 4; k < n; ++k) s += "ab\t\n\\ä"[rng() % 7];
    if (!expected.emplace(s, "t" + std::to_string(i)).second) continue;
    records.push_back({"p", "de", "es", s, expected[s], "t"});
  }
  {
    TranslationCache cache(dir);
    cache.store(records);
  }
  TranslationCache reloaded(dir);
  for (const auto& [s, t] : expected) EXPECT_EQ(reloaded.lookup("p", {"de", "es"}, s)->target, t);
}

TEST(TranslateBatch, CacheFirstAndDeduplicated) {
  const auto dir = mtgender::testing::scratch("batch_cache");
  TranslationCache cache(dir);
  FakeProvider p;
  const std::vector<std::string> s{"a", "b", "a", "c"};
  auto out = translate_batch(p, s, "es", cache, fast_options());
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[2].target, "es:a");
  EXPECT_EQ(out[3].source, "c");
  EXPECT_EQ(p.calls.load(), 3);
  auto again = translate_batch(p, s, "es", cache, fast_options());
  EXPECT_EQ(again, out);
  EXPECT_EQ(p.calls.load(), 3);

  TranslationCache reopened(dir);
  FakeProvider q;
  EXPECT_EQ(translate_batch(q, s, "es", reopened, fast_options()), out);
  EXPECT_EQ(q.calls.load(), 0);
}

TEST(TranslateBatch, UnsupportedPair) {
  TranslationCache cache(mtgender::testing::scratch("batch_unsupported"));
  FakeProvider p;
  const std::vector<std::string> s{"a"};
  EXPECT_EQ(batch_error(p, s, "he", cache, fast_options()), ErrorCode::UnsupportedPair);
  EXPECT_EQ(batch_error(p, s, "de", cache, fast_options()), ErrorCode::UnsupportedPair);
  EXPECT_EQ(p.calls.load(), 0);
}

TEST(TranslateBatch, RetriesTransientFailuresWithBackoff) {
  TranslationCache cache(mtgender::testing::scratch("batch_retry"));
  FakeProvider p;
  p.failures["a"] = {2, ErrorCode::RemoteFailure, true};
  RecordingSleep sleep;
  const std::vector<std::string> s{"a"};
  auto out = translate_batch(p, s, "es", cache, fast_options(sleep));
  EXPECT_EQ(out[0].target, "es:a");
  EXPECT_EQ(*sleep.waits, (std::vector<std::chrono::milliseconds>{1000ms, 2000ms}));
}

TEST(TranslateBatch, ExhaustedRateLimitSurfacesAsRateLimited) {
  TranslationCache cache(mtgender::testing::scratch("batch_ratelimited"));
  FakeProvider p;
  p.failures["a"] = {5, ErrorCode::RateLimited, true};
  const std::vector<std::string> s{"a"};
  EXPECT_EQ(batch_error(p, s, "es", cache, fast_options()), ErrorCode::RateLimited);
  EXPECT_EQ(p.calls.load(), 3);
}

TEST(TranslateBatch, ExhaustedServerErrorsSurfaceAsRemoteFailure) {
  TranslationCache cache(mtgender::testing::scratch("batch_remote"));
  FakeProvider p;
  p.failures["a"] = {5, ErrorCode::RemoteFailure, true};
  const std::vector<std::string> s{"a"};
  EXPECT_EQ(batch_error(p, s, "es", cache, fast_options()), ErrorCode::RemoteFailure);
}

TEST(TranslateBatch, PermanentFailureIsNotRetried) {
  TranslationCache cache(mtgender::testing::scratch("batch_permanent"));
  FakeProvider p;
  p.failures["a"] = {5, ErrorCode::AuthMissing, false};
  const std::vector<std::string> s{"a"};
  EXPECT_EQ(batch_error(p, s, "es", cache, fast_options()), ErrorCode::AuthMissing);
  EXPECT_EQ(p.calls.load(), 1);
}

TEST(TranslateBatch, SuccessesPersistBeforeFailure) {
  const auto dir = mtgender::testing::scratch("batch_partial");
  TranslationCache cache(dir);
  FakeProvider p;
  p.failures["z"] = {5, ErrorCode::RemoteFailure, false};
  const std::vector<std::string> s{"a", "b", "z"};
  EXPECT_EQ(batch_error(p, s, "es", cache, fast_options()), ErrorCode::RemoteFailure);
  TranslationCache reopened(dir);
  EXPECT_TRUE(reopened.lookup("fake", {"de", "es"}, "a"));
  EXPECT_TRUE(reopened.lookup("fake", {"de", "es"}, "b"));
  EXPECT_FALSE(reopened.lookup("fake", {"de", "es"}, "z"));
}

TEST(TranslateBatch, ConcurrentWorkersPreserveOrder) {
  TranslationCache cache(mtgender::testing::scratch("batch_parallel"));
  FakeProvider p("par", 8);
  std::vector<std::string> s;
  for (int i = 0; i < 200; ++i) s.push_back("satz " + std::to_string(i % 150));
  auto out = translate_batch(p, s, "fr", cache, fast_options());
  ASSERT_EQ(out.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(out[i].target, "fr:" + s[i]);
  EXPECT_EQ(p.calls.load(), 150);
}

TEST(RateLimiter, SpacesRequests) {
  RateLimiter limiter(10.0);
  RecordingSleep sleep;
  for (int i = 0; i < 4; ++i) limiter.acquire(sleep);
  // The first slot is immediate; each later one waits up to 100ms.
  ASSERT_GE(sleep.waits->size(), 2u);
  for (auto w : *sleep.waits) EXPECT_LE(w, 400ms);
  RateLimiter unlimited(0.0);
  RecordingSleep none;
  unlimited.acquire(none);
  EXPECT_TRUE(none.waits->empty());
}

TEST(RateLimiter, RealSleepHonoursRate) {
  RateLimiter limiter(50.0);
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 6; ++i) limiter.acquire([](auto d) { std::this_thread::sleep_for(d); });
  EXPECT_GE(std::chrono::steady_clock::now() - start, 95ms);
}

TEST(OfflineProvider, ServesParallelFile) {
  const auto dir = mtgender::testing::scratch("offline");
  text::write_file(dir / "es.txt", "Der Hund. ||| El perro.\n");
  auto p = offline_provider(dir / "es.txt", "es", "rec");
  EXPECT_EQ(p->translate("Der Hund.", {"de", "es"}), "El perro.");
  EXPECT_TRUE(p->capability().supports({"de", "es"}));
  EXPECT_FALSE(p->capability().supports({"de", "fr"}));
  try {
    p->translate("Die Katze.", {"de", "es"});
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingTranslation);
    EXPECT_FALSE(e.transient());
  }
}

TEST(OfflineProvider, RejectsMalformedFiles) {
  const auto dir = mtgender::testing::scratch("offline_bad");
  text::write_file(dir / "a.txt", "no separator\n");
  text::write_file(dir / "b.txt", "x ||| y\nx ||| z\n");
  EXPECT_THROW(offline_provider(dir / "a.txt", "es"), Error);
  EXPECT_THROW(offline_provider(dir / "b.txt", "es"), Error);
}

TEST(Provider, RejectsUnsafeIds) {
  EXPECT_THROW(FakeProvider("../x"), Error);
  EXPECT_THROW(FakeProvider(""), Error);
  EXPECT_NO_THROW(FakeProvider("gpt-4o.mini_v2"));
}
