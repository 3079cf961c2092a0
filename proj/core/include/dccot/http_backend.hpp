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

#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>

#include "dccot/backend.hpp"
#include "dccot/token_counter.hpp"

namespace dccot {

struct HttpBackendConfig {
  std::string base_url = "http://127.0.0.1:8000";
  std::string model_name;
  double temperature = 0.6;
  double top_p = 0.95;
  std::chrono::milliseconds request_timeout{120'000};
  unsigned max_retries = 3;
  std::optional<std::string> auth_token;
  unsigned max_connections = 16;
  std::chrono::milliseconds initial_backoff{200};

  // Throws ConfigError: temperature must be > 0, top_p in (0, 1],
  // max_connections >= 1, base_url http:// (or https:// when built with TLS).
  void validate() const;

  // Overrides base_url / auth_token from DCCOT_BASE_URL / DCCOT_API_TOKEN
  // when those are set.
  void apply_environment();
};

// Maps a /v1/completions response body onto an InferResult.
//
// finish_reason "length" -> Budget. finish_reason "stop" (or "eos") -> Eos if
// the choice says so (stop_reason null, or "eos": true), otherwise
// FinishString. When the server echoed a stop string into the text it is cut
// there. token_count comes from usage.completion_tokens when present, else
// from `counter`. Throws ProtocolError on anything malformed.
InferResult map_completion_response(const std::string& body, std::span<const std::string> stops,
                                    std::size_t limit, const TokenCounter& counter);

// Client for any server that speaks the completions JSON API. Each request
// gets its own connection; at most max_connections are in flight at once.
// Transport errors, 429 and 5xx are retried with exponential backoff.
class HttpBackend final : public GenerationBackend {
 public:
  HttpBackend(HttpBackendConfig config, std::shared_ptr<const TokenCounter> counter);

  InferResult generate(const std::string& prompt, std::span<const std::string> stops,
                       std::size_t limit) override;

  const HttpBackendConfig& config() const { return config_; }

 private:
  HttpBackendConfig config_;
  std::shared_ptr<const TokenCounter> counter_;
  std::string scheme_host_port_;
  std::string path_prefix_;
  std::counting_semaphore<4096> slots_;
};

}  // namespace dccot
