#include "mtgender/occupation_registry.hpp"

#include <charconv>

#include "mtgender/error.hpp"
#include "mtgender/text.hpp"

namespace mtgender {

void OccupationRegistry::add(OccupationRecord record) {
  if (record.female_share && !(*record.female_share >= 0.0 && *record.female_share <= 1.0)) {
    throw Error(ErrorCode::ShareOutOfRange,
                "female share " + std::to_string(*record.female_share) + " of code " + record.code + " is outside [0,1]");
  }
  if (by_code_.count(record.code) != 0) {
    throw Error(ErrorCode::DuplicateKey, "occupation code listed twice: " + record.code);
  }
  for (auto& form : record.surface_forms) form = text::nfc(form);
  for (std::size_t i = 0; i < record.surface_forms.size(); ++i) {
    const auto& form = record.surface_forms[i];
    auto it = by_surface_.find(form);
    bool repeated_here = false;
    for (std::size_t k = 0; k < i; ++k) repeated_here = repeated_here || record.surface_forms[k] == form;
    if (it != by_surface_.end() || repeated_here) {
      std::string other = it != by_surface_.end() ? records_[it->second].code : record.code;
      throw Error(ErrorCode::DuplicateSurfaceForm,
                  "surface form '" + form + "' mapped to both " + other + " and " + record.code);
    }
  }
  const std::size_t idx = records_.size();
  by_code_.emplace(record.code, idx);
  for (const auto& form : record.surface_forms) by_surface_.emplace(form, idx);
  records_.push_back(std::move(record));
}

const OccupationRecord* OccupationRegistry::find_by_surface(std::string_view surface_form) const {
  auto it = by_surface_.find(text::nfc(surface_form));
  return it == by_surface_.end() ? nullptr : &records_[it->second];
}

const OccupationRecord* OccupationRegistry::find_by_code(std::string_view code) const {
  auto it = by_code_.find(std::string(code));
  return it == by_code_.end() ? nullptr : &records_[it->second];
}

OccupationRegistry parse_occupation_registry(std::string_view content, std::string_view source_name) {
  OccupationRegistry registry;
  std::size_t line_no = 0;
  for (const auto& line : text::lines(content)) {
    ++line_no;
    if (text::trim(line).empty() || line.front() == '#') continue;
    const std::string where = std::string(source_name) + ":" + std::to_string(line_no);
    auto cols = text::split(line, '\t');
    if (cols.size() != 4) {
      throw Error(ErrorCode::MalformedRow, where + ": expected 4 tab-separated columns, got " + std::to_string(cols.size()));
    }
    OccupationRecord rec;
    rec.code = std::string(text::trim(cols[0]));
    rec.group_name = std::string(text::trim(cols[1]));
    if (rec.code.empty()) throw Error(ErrorCode::MalformedRow, where + ": empty occupation code");

    auto share = text::trim(cols[2]);
    if (share != "-") {
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(share.data(), share.data() + share.size(), value);
      if (ec != std::errc() || ptr != share.data() + share.size()) {
        throw Error(ErrorCode::MalformedRow, where + ": female share '" + std::string(share) + "' is not a number");
      }
      rec.female_share = value;
    }
    for (const auto& form : text::split(cols[3], ',')) {
      auto f = text::trim(form);
      if (!f.empty()) rec.surface_forms.emplace_back(f);
    }
    try {
      registry.add(std::move(rec));
    } catch (const Error& e) {
      throw Error(e.code(), where + ": " + e.what());
    }
  }
  return registry;
}

OccupationRegistry load_occupation_registry(const std::filesystem::path& path) {
  return parse_occupation_registry(text::read_file(path), path.string());
}

}  // namespace mtgender
