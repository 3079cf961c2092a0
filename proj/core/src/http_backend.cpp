// Copyright 2026 The dccot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dccot/http_backend.hpp"

#include <cstdlib>
#include <thread>

#include <nlohmann/json.hpp>

#include "httplib.h"

namespace dccot {

using nlohmann::json;

namespace {

class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<4096>& s) : s_(s) { s_.acquire(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;
  ~SlotGuard() { s_.release(); }

 private:
  std::counting_semaphore<4096>& s_;
};

bool tls_enabled() {
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
  return true;
#else
  return false;
#endif
}

}  // namespace

void HttpBackendConfig::validate() const {
  if (!(temperature > 0.0)) throw ConfigError("temperature must be > 0");
  if (!(top_p > 0.0 && top_p <= 1.0)) throw ConfigError("top_p must be in (0, 1]");
  if (max_connections == 0) throw ConfigError("max_connections must be at least 1");
  if (max_connections > 4096) throw ConfigError("max_connections must be at most 4096");
  if (base_url.starts_with("https://")) {
    if (!tls_enabled()) throw ConfigError("this build has no TLS support; use http://");
  } else if (!base_url.starts_with("http://")) {
    throw ConfigError("base_url must start with http:// or https://");
  }
}

void HttpBackendConfig::apply_environment() {
  if (const char* url = std::getenv("DCCOT_BASE_URL"); url != nullptr && *url != '\0') {
    base_url = url;
  }
  if (const char* token = std::getenv("DCCOT_API_TOKEN"); token != nullptr && *token != '\0') {
    auth_token = token;
  }
}

InferResult map_completion_response(const std::string& body, std::span<const std::string> stops,
                                    std::size_t limit, const TokenCounter& counter) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("completion response is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("choices") || !j["choices"].is_array() ||
      j["choices"].empty() || !j["choices"][0].is_object()) {
    throw ProtocolError("completion response has no choices");
  }
  const json& choice = j["choices"][0];
  if (!choice.contains("text") || !choice["text"].is_string()) {
    throw ProtocolError("completion choice has no text");
  }

  InferResult r;
  r.tokens = choice["text"].get<std::string>();

  // Some servers echo the matched stop string; cut there.
  std::size_t echoed = std::string::npos;
  for (const std::string& s : stops) {
    if (!s.empty()) echoed = std::min(echoed, r.tokens.find(s));
  }

  const std::string finish =
      choice.contains("finish_reason") && choice["finish_reason"].is_string()
          ? choice["finish_reason"].get<std::string>()
          : std::string();
  if (echoed != std::string::npos) {
    r.tokens.resize(echoed);
    r.stop_reason = StopReason::FinishString;
  } else if (finish == "length") {
    r.stop_reason = StopReason::Budget;
  } else if (finish == "eos") {
    r.stop_reason = StopReason::Eos;
  } else if (finish == "stop") {
    if (choice.contains("eos") && choice["eos"].is_boolean()) {
      r.stop_reason = choice["eos"].get<bool>() ? StopReason::Eos : StopReason::FinishString;
    } else if (choice.contains("stop_reason")) {
      // null (or a stop token id) means the model ended the sequence itself.
      r.stop_reason = choice["stop_reason"].is_string() ? StopReason::FinishString
                                                         : StopReason::Eos;
    } else {
      r.stop_reason = StopReason::FinishString;
    }
  } else {
    throw ProtocolError("unknown finish_reason '" + finish + "'");
  }

  const json* usage = j.contains("usage") && j["usage"].is_object() ? &j["usage"] : nullptr;
  if (echoed == std::string::npos && usage != nullptr && usage->contains("completion_tokens") &&
      (*usage)["completion_tokens"].is_number_unsigned()) {
    r.token_count = (*usage)["completion_tokens"].get<std::size_t>();
  } else {
    r.token_count = counter.count(r.tokens);
  }
  if (r.token_count > limit) {
    throw ProtocolError("server generated " + std::to_string(r.token_count) +
                        " tokens for max_tokens=" + std::to_string(limit));
  }
  return r;
}

HttpBackend::HttpBackend(HttpBackendConfig config, std::shared_ptr<const TokenCounter> counter)
    : config_(std::move(config)), counter_(std::move(counter)),
      slots_(static_cast<std::ptrdiff_t>(config_.max_connections == 0 ? 1
                                                                      : config_.max_connections)) {
  config_.validate();
  if (!counter_) throw ConfigError("http backend needs a token counter");
  const auto scheme_end = config_.base_url.find("://") + 3;
  const auto path_at = config_.base_url.find('/', scheme_end);
  scheme_host_port_ = config_.base_url.substr(0, path_at);
  path_prefix_ = path_at == std::string::npos ? "" : config_.base_url.substr(path_at);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

InferResult HttpBackend::generate(const std::string& prompt, std::span<const std::string> stops,
                                  std::size_t limit) {
  json req = {
      {"model", config_.model_name},
      {"prompt", prompt},
      {"max_tokens", limit},
      {"stop", json(std::vector<std::string>(stops.begin(), stops.end()))},
      {"temperature", config_.temperature},
      {"top_p", config_.top_p},
  };
  const std::string body = req.dump();
  const std::string path = path_prefix_ + "/v1/completions";

  httplib::Headers headers;
  if (config_.auth_token) {
    headers.emplace("Authorization", "Bearer " + *config_.auth_token);
  }

  SlotGuard slot(slots_);
  std::string last_error;
  for (unsigned attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(config_.initial_backoff * (1u << std::min(attempt - 1, 16u)));
    }
    httplib::Client client(scheme_host_port_);
    if (!client.is_valid()) throw ConfigError("cannot create HTTP client for " + config_.base_url);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.request_timeout);
    const auto usecs =
        std::chrono::duration_cast<std::chrono::microseconds>(config_.request_timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    const auto res = client.Post(path, headers, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) return map_completion_response(res->body, stops, limit, *counter_);
    last_error = "HTTP " + std::to_string(res->status);
    if (res->status == 429 || res->status >= 500) continue;
    throw BackendUnavailable("completion request rejected with " + last_error + ": " +
                             res->body.substr(0, 500));
  }
  throw BackendUnavailable("completion request to " + config_.base_url + " failed after " +
                           std::to_string(config_.max_retries + 1) + " attempts: " + last_error);
}

}  // namespace dccot
