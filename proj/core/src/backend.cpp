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

#include "dccot/backend.hpp"

#include <array>

namespace dccot {

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::FinishString: return "finish_string";
    case StopReason::Eos: return "eos";
    case StopReason::Budget: return "budget";
  }
  return "?";
}

InferResult infer(GenerationBackend& backend, const std::string& prompt,
                  const std::string& finish, std::size_t limit, std::string_view context) {
  if (limit == 0) throw ConfigError("infer: limit must be at least 1");
  if (finish.empty()) throw ConfigError("infer: finish string must not be empty");

  const std::array<std::string, 1> stops{finish};
  InferResult result;
  try {
    result = backend.generate(prompt, stops, limit);
  } catch (const BackendUnavailable& e) {
    if (context.empty()) throw;
    throw BackendUnavailable(std::string(context) + ": " + e.what());
  }
  if (result.token_count > limit) {
    throw ProtocolError("backend returned " + std::to_string(result.token_count) +
                        " tokens for a limit of " + std::to_string(limit));
  }
  return result;
}

}  // namespace dccot
