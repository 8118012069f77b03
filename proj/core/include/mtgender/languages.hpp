#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace mtgender {

inline constexpr std::string_view kSourceLanguage = "de";

/// Supported target languages, in report row order.
inline constexpr std::array<std::string_view, 7> kTargetLanguages = {"es", "fr", "it", "uk", "ru", "ar", "he"};

enum class LanguageFamily { Romance, Slavic, Semitic };

constexpr bool is_target_language(std::string_view code) noexcept {
  for (auto l : kTargetLanguages) {
    if (l == code) return true;
  }
  return false;
}

constexpr std::optional<LanguageFamily> language_family(std::string_view code) noexcept {
  if (code == "es" || code == "fr" || code == "it") return LanguageFamily::Romance;
  if (code == "uk" || code == "ru") return LanguageFamily::Slavic;
  if (code == "ar" || code == "he") return LanguageFamily::Semitic;
  return std::nullopt;
}

constexpr std::string_view to_string(LanguageFamily f) noexcept {
  switch (f) {
    case LanguageFamily::Romance: return "Romance";
    case LanguageFamily::Slavic: return "Slavic";
    case LanguageFamily::Semitic: return "Semitic";
  }
  return "";
}

/// English language name, used to fill prompt templates.
constexpr std::string_view language_name(std::string_view code) noexcept {
  if (code == "de") return "German";
  if (code == "es") return "Spanish";
  if (code == "fr") return "French";
  if (code == "it") return "Italian";
  if (code == "uk") return "Ukrainian";
  if (code == "ru") return "Russian";
  if (code == "ar") return "Arabic";
  if (code == "he") return "Hebrew";
  return code;
}

constexpr std::size_t language_rank(std::string_view code) noexcept {
  for (std::size_t i = 0; i < kTargetLanguages.size(); ++i) {
    if (kTargetLanguages[i] == code) return i;
  }
  return kTargetLanguages.size();
}

}  // namespace mtgender
