#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mtgender {

enum class ErrorCode {
  Io,
  InvalidConfig,
  MalformedRow,
  InvalidGender,
  IndexOutOfRange,
  DuplicateSurfaceForm,
  ShareOutOfRange,
  UnsupportedPair,
  RemoteFailure,
  RateLimited,
  MissingTranslation,
  AuthMissing,
  EmptyBitext,
  ParseError,
  DuplicateKey,
  UnsupportedLanguage,
  EmptyInput,
  AllUnknown,
  EmptySubset,
  UnknownCode,
  MissingOutcomes,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mtgender
