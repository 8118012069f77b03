#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace mtgender {

/// Gold gender of a challenge-set subject. The challenge set is binary by construction.
enum class Gender { Female, Male };

/// Gender assigned to a translated subject by the morphology stage.
enum class PredictedGender { Female, Male, Neutral, Unknown };

enum class Stereotype { Pro, Anti, Unclassified };

inline constexpr Gender opposite(Gender g) noexcept {
  return g == Gender::Female ? Gender::Male : Gender::Female;
}

inline constexpr PredictedGender as_prediction(Gender g) noexcept {
  return g == Gender::Female ? PredictedGender::Female : PredictedGender::Male;
}

std::string_view to_string(Gender g) noexcept;
std::string_view to_string(PredictedGender g) noexcept;
std::string_view to_string(Stereotype s) noexcept;

// Lower-case names as written in the data files ("female", "pro", ...).
std::optional<Gender> parse_gender(std::string_view text) noexcept;
std::optional<PredictedGender> parse_predicted_gender(std::string_view text) noexcept;
std::optional<Stereotype> parse_stereotype(std::string_view text) noexcept;

}  // namespace mtgender
