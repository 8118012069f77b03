#include "mtgender/error.hpp"
#include "mtgender/types.hpp"

namespace mtgender {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Io: return "Io";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::InvalidGender: return "InvalidGender";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DuplicateSurfaceForm: return "DuplicateSurfaceForm";
    case ErrorCode::ShareOutOfRange: return "ShareOutOfRange";
    case ErrorCode::UnsupportedPair: return "UnsupportedPair";
    case ErrorCode::RemoteFailure: return "RemoteFailure";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::MissingTranslation: return "MissingTranslation";
    case ErrorCode::AuthMissing: return "AuthMissing";
    case ErrorCode::EmptyBitext: return "EmptyBitext";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::UnsupportedLanguage: return "UnsupportedLanguage";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::AllUnknown: return "AllUnknown";
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::UnknownCode: return "UnknownCode";
    case ErrorCode::MissingOutcomes: return "MissingOutcomes";
  }
  return "Unknown";
}

std::string_view to_string(Gender g) noexcept {
  return g == Gender::Female ? "female" : "male";
}

std::string_view to_string(PredictedGender g) noexcept {
  switch (g) {
    case PredictedGender::Female: return "female";
    case PredictedGender::Male: return "male";
    case PredictedGender::Neutral: return "neutral";
    case PredictedGender::Unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(Stereotype s) noexcept {
  switch (s) {
    case Stereotype::Pro: return "pro";
    case Stereotype::Anti: return "anti";
    case Stereotype::Unclassified: return "unclassified";
  }
  return "unclassified";
}

std::optional<Gender> parse_gender(std::string_view text) noexcept {
  if (text == "female") return Gender::Female;
  if (text == "male") return Gender::Male;
  return std::nullopt;
}

std::optional<PredictedGender> parse_predicted_gender(std::string_view text) noexcept {
  if (text == "female") return PredictedGender::Female;
  if (text == "male") return PredictedGender::Male;
  if (text == "neutral") return PredictedGender::Neutral;
  if (text == "unknown") return PredictedGender::Unknown;
  return std::nullopt;
}

std::optional<Stereotype> parse_stereotype(std::string_view text) noexcept {
  if (text == "pro") return Stereotype::Pro;
  if (text == "anti") return Stereotype::Anti;
  if (text == "unclassified") return Stereotype::Unclassified;
  return std::nullopt;
}

}  // namespace mtgender
