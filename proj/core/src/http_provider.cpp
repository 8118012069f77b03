#include <httplib.h>

#include <cstdlib>

#include "mtgender/languages.hpp"
#include "mtgender/providers.hpp"
#include "mtgender/text.hpp"

namespace mtgender {
namespace {

using Substitutions = std::vector<std::pair<std::string, std::string>>;

std::string substitute(std::string_view tmpl, const Substitutions& subs) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    bool replaced = false;
    if (tmpl[i] == '{') {
      for (const auto& [name, value] : subs) {
        if (tmpl.compare(i, name.size(), name) == 0) {
          out += value;
          i += name.size();
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) out.push_back(tmpl[i++]);
  }
  return out;
}

nlohmann::json substitute_leaves(const nlohmann::json& node, const Substitutions& subs) {
  if (node.is_string()) return substitute(node.get<std::string>(), subs);
  if (node.is_array() || node.is_object()) {
    nlohmann::json out = node;
    for (auto it = out.begin(); it != out.end(); ++it) *it = substitute_leaves(*it, subs);
    return out;
  }
  return node;
}

struct Url {
  std::string scheme_host_port;
  std::string path;
};

Url split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(ErrorCode::InvalidConfig, "endpoint '" + url + "' has no scheme");
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class HttpProvider final : public TranslationProvider {
 public:
  HttpProvider(HttpProviderConfig config, std::string key)
      : TranslationProvider(config.id, {config.supported_pairs.begin(), config.supported_pairs.end()},
                            config.requests_per_second, config.max_in_flight),
        config_(std::move(config)),
        key_(std::move(key)) {
    if (config_.method != "POST" && config_.method != "GET") {
      throw Error(ErrorCode::InvalidConfig, "provider " + id() + ": method must be POST or GET");
    }
    split_url(config_.endpoint);
  }

  std::string translate(const std::string& source, const LanguagePair& pair) override {
    Substitutions subs = {
        {"{source_language_name}", std::string(language_name(pair.source))},
        {"{target_language_name}", std::string(language_name(pair.target))},
        {"{source_lang}", pair.source},
        {"{target_lang}", pair.target},
        {"{source}", source},
        {"{key}", key_},
    };
    subs.insert(subs.begin(), {"{prompt}", substitute(config_.prompt_template, subs)});

    const Url url = split_url(substitute(config_.endpoint, subs));
    httplib::Client client(url.scheme_host_port);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);

    httplib::Headers headers;
    if (!key_.empty() && !config_.auth_header.empty()) {
      headers.emplace(config_.auth_header, substitute(config_.auth_template, subs));
    }

    httplib::Result res = config_.method == "GET"
                              ? client.Get(url.path, headers)
                              : client.Post(url.path, headers, substitute_leaves(config_.request_template, subs).dump(),
                                            "application/json");
    if (!res) {
      throw ProviderError(ErrorCode::RemoteFailure,
                          "provider " + id() + ": request failed: " + httplib::to_string(res.error()), true);
    }
    const int status = res->status;
    const std::string snippet = res->body.substr(0, 200);
    if (status == 429) {
      throw ProviderError(ErrorCode::RateLimited, "provider " + id() + ": HTTP 429 " + snippet, true);
    }
    if (status >= 500 || status == 408) {
      throw ProviderError(ErrorCode::RemoteFailure,
                          "provider " + id() + ": HTTP " + std::to_string(status) + " " + snippet, true);
    }
    if (status < 200 || status >= 300) {
      throw ProviderError(ErrorCode::RemoteFailure,
                          "provider " + id() + ": HTTP " + std::to_string(status) + " " + snippet, false);
    }

    auto body = nlohmann::json::parse(res->body, nullptr, false);
    if (body.is_discarded()) {
      throw ProviderError(ErrorCode::RemoteFailure, "provider " + id() + ": response is not JSON: " + snippet, false);
    }
    const nlohmann::json::json_pointer ptr(config_.response_pointer);
    if (!body.contains(ptr) || !body.at(ptr).is_string()) {
      throw ProviderError(ErrorCode::RemoteFailure,
                          "provider " + id() + ": no string at " + config_.response_pointer + " in " + snippet, false);
    }
    return std::string(text::trim(body.at(ptr).get<std::string>()));
  }

 private:
  HttpProviderConfig config_;
  std::string key_;
};

std::vector<LanguagePair> pairs_from_json(const nlohmann::json& j) {
  std::vector<LanguagePair> pairs;
  if (j.contains("supported_pairs")) {
    for (const auto& p : j.at("supported_pairs")) {
      auto parts = text::split(p.get<std::string>(), '-');
      if (parts.size() != 2) throw Error(ErrorCode::InvalidConfig, "supported pair must look like de-es");
      pairs.push_back({parts[0], parts[1]});
    }
  }
  if (j.contains("supported_targets")) {
    for (const auto& t : j.at("supported_targets")) pairs.push_back({"de", t.get<std::string>()});
  }
  return pairs;
}

}  // namespace

std::string default_auth_env(std::string_view provider_id) {
  std::string env = "PROVIDER_";
  for (char c : provider_id) {
    if (c >= 'a' && c <= 'z') env.push_back(static_cast<char>(c - 'a' + 'A'));
    else if ((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) env.push_back(c);
    else env.push_back('_');
  }
  return env + "_KEY";
}

std::unique_ptr<TranslationProvider> http_provider(HttpProviderConfig config) {
  if (config.auth_env.empty()) config.auth_env = default_auth_env(config.id);
  const char* key = std::getenv(config.auth_env.c_str());
  if (config.auth_required && (key == nullptr || *key == '\0')) {
    throw Error(ErrorCode::AuthMissing, "provider " + config.id + " needs credentials in $" + config.auth_env);
  }
  return std::make_unique<HttpProvider>(std::move(config), key ? std::string(key) : std::string());
}

HttpProviderConfig http_config_from_json(const nlohmann::json& j) {
  try {
    HttpProviderConfig c;
    c.id = j.at("id").get<std::string>();
    c.endpoint = j.at("endpoint").get<std::string>();
    c.method = j.value("method", c.method);
    c.auth_env = j.value("auth_env", std::string());
    c.auth_required = j.value("auth_required", c.auth_required);
    c.auth_header = j.value("auth_header", c.auth_header);
    c.auth_template = j.value("auth_template", c.auth_template);
    if (j.contains("request")) c.request_template = j.at("request");
    c.response_pointer = j.value("response_pointer", c.response_pointer);
    c.prompt_template = j.value("prompt_template", std::string());
    c.supported_pairs = pairs_from_json(j);
    c.requests_per_second = j.value("requests_per_second", c.requests_per_second);
    c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
    c.timeout = std::chrono::seconds(j.value("timeout_seconds", 30));
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("http provider config: ") + e.what());
  }
}

std::unique_ptr<TranslationProvider> provider_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  const std::string type = j.value("type", std::string());
  if (type == "http") return http_provider(http_config_from_json(j));
  if (type == "offline") {
    if (!j.contains("id") || !j.contains("files") || !j.at("files").is_object()) {
      throw Error(ErrorCode::InvalidConfig, "offline provider needs \"id\" and a \"files\" object");
    }
    std::map<std::string, std::filesystem::path> files;
    for (const auto& [lang, path] : j.at("files").items()) {
      std::filesystem::path p = path.get<std::string>();
      files.emplace(lang, p.is_relative() ? base_dir / p : p);
    }
    return std::make_unique<OfflineProvider>(j.at("id").get<std::string>(), files);
  }
  throw Error(ErrorCode::InvalidConfig, "provider type must be \"offline\" or \"http\", got \"" + type + "\"");
}

}  // namespace mtgender
