#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "mtgender/translation.hpp"

namespace mtgender {

/// Request/response mapping for a JSON-over-HTTP translation backend.
///
/// String leaves of `request_template` and the endpoint may contain the
/// placeholders {source}, {source_lang}, {target_lang}, {source_language_name},
/// {target_language_name}, {prompt} and {key}. {prompt} expands to
/// `prompt_template`, which may itself use the other placeholders; this is how
/// chat-completion models are driven as translators.
struct HttpProviderConfig {
  std::string id;
  std::string endpoint;
  std::string method = "POST";
  /// Defaults to PROVIDER_<ID>_KEY.
  std::string auth_env;
  bool auth_required = true;
  std::string auth_header = "Authorization";
  std::string auth_template = "Bearer {key}";
  nlohmann::json request_template = nlohmann::json::object();
  /// JSON pointer to the translated text in the response body.
  std::string response_pointer = "/translation";
  std::string prompt_template;
  std::vector<LanguagePair> supported_pairs;
  double requests_per_second = 0.0;
  std::size_t max_in_flight = 4;
  std::chrono::seconds timeout{30};
};

/// PROVIDER_<ID>_KEY with the id upper-cased and non-alphanumerics mapped to '_'.
std::string default_auth_env(std::string_view provider_id);

/// Throws AuthMissing when a required credential is absent from the environment.
std::unique_ptr<TranslationProvider> http_provider(HttpProviderConfig config);

HttpProviderConfig http_config_from_json(const nlohmann::json& j);

/// Builds a provider from a config object with "type": "offline" or "http".
/// Relative file paths resolve against `base_dir`.
std::unique_ptr<TranslationProvider> provider_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

}  // namespace mtgender
