#include "mtgender/translation.hpp"

#include <fstream>

#include "mtgender/text.hpp"

namespace mtgender {

TranslationCache::TranslationCache(std::filesystem::path root) : root_(std::move(root)) {}

std::filesystem::path TranslationCache::file_for(const std::string& provider_id, const LanguagePair& pair) const {
  return root_ / provider_id / (pair.source + "-" + pair.target + ".tsv");
}

const TranslationCache::Shard& TranslationCache::shard(const std::string& provider_id, const LanguagePair& pair) const {
  ShardKey key{provider_id, pair};
  {
    std::shared_lock lock(mu_);
    auto it = shards_.find(key);
    if (it != shards_.end()) return it->second;
  }
  std::unique_lock lock(mu_);
  auto it = shards_.find(key);
  if (it != shards_.end()) return it->second;

  Shard s;
  const auto path = file_for(provider_id, pair);
  if (std::filesystem::exists(path)) {
    std::size_t line_no = 0;
    for (const auto& line : text::lines(text::read_file(path))) {
      ++line_no;
      auto cols = text::split(line, '\t');
      if (cols.size() != 4) {
        throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": expected 4 columns");
      }
      TranslationRecord rec{provider_id, pair.source, pair.target, text::unescape_field(cols[2]),
                            text::unescape_field(cols[3]), cols[1]};
      if (text::sha256_hex(rec.source) != cols[0]) {
        throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": content hash mismatch");
      }
      s.by_source.insert_or_assign(rec.source, std::move(rec));
    }
  }
  return shards_.emplace(std::move(key), std::move(s)).first->second;
}

std::optional<TranslationRecord> TranslationCache::lookup(const std::string& provider_id, const LanguagePair& pair,
                                                          const std::string& source) const {
  const Shard& s = shard(provider_id, pair);
  std::shared_lock lock(mu_);
  auto it = s.by_source.find(source);
  if (it == s.by_source.end()) return std::nullopt;
  return it->second;
}

void TranslationCache::store(std::span<const TranslationRecord> records) {
  std::lock_guard writer(write_mu_);
  for (const auto& rec : records) {
    const LanguagePair pair{rec.source_lang, rec.target_lang};
    shard(rec.provider_id, pair);
    std::unique_lock lock(mu_);
    auto& s = shards_.at({rec.provider_id, pair});
    if (s.by_source.count(rec.source) != 0) continue;

    const auto path = file_for(rec.provider_id, pair);
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw Error(ErrorCode::Io, "cannot append to " + path.string());
    out << text::sha256_hex(rec.source) << '\t' << rec.fetched_at << '\t' << text::escape_field(rec.source) << '\t'
        << text::escape_field(rec.target) << '\n';
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
    s.by_source.emplace(rec.source, rec);
  }
}

}  // namespace mtgender
