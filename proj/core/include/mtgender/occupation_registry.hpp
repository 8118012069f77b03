#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mtgender {

/// One occupational group from the labor-statistics classification.
struct OccupationRecord {
  std::string code;
  std::string group_name;
  /// Fraction of the group's workforce that is female. Empty when the group
  /// has no usable statistic (e.g. the catch-all "0 Allgemein" group).
  std::optional<double> female_share;
  std::vector<std::string> surface_forms;
};

/// Surface form -> occupational group. Immutable after construction.
class OccupationRegistry {
 public:
  OccupationRegistry() = default;

  /// Throws DuplicateSurfaceForm, DuplicateKey (repeated code) or ShareOutOfRange.
  void add(OccupationRecord record);

  /// Exact, case-sensitive lookup after NFC normalization.
  const OccupationRecord* find_by_surface(std::string_view surface_form) const;
  const OccupationRecord* find_by_code(std::string_view code) const;

  std::span<const OccupationRecord> records() const noexcept { return records_; }
  bool empty() const noexcept { return records_.empty(); }

 private:
  std::vector<OccupationRecord> records_;
  std::unordered_map<std::string, std::size_t> by_surface_;
  std::unordered_map<std::string, std::size_t> by_code_;
};

/// Parses `code<TAB>group_name<TAB>female_share<TAB>form,form,...` rows.
/// Blank lines and lines starting with '#' are ignored; a share of "-" means
/// no statistic.
OccupationRegistry parse_occupation_registry(std::string_view content, std::string_view source_name = "<registry>");
OccupationRegistry load_occupation_registry(const std::filesystem::path& path);

}  // namespace mtgender
