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

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "dccot/error.hpp"

namespace dccot {

enum class StopReason { FinishString, Eos, Budget };

std::string_view to_string(StopReason r);

// Output of one single-thread inference call.
struct InferResult {
  std::string tokens;  // generated text, stop string excluded
  std::size_t token_count = 0;
  StopReason stop_reason = StopReason::Eos;

  friend bool operator==(const InferResult&, const InferResult&) = default;
};

// Transport or provider failure. Retries, if any, have already happened.
class BackendUnavailable : public Error {
 public:
  using Error::Error;
};

// The server answered but the answer does not fit the protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Anything that can continue a prompt. Implementations must allow concurrent
// generate() calls, honor `limit` exactly, stop at the earliest stop string
// and leave that string out of the result.
class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;

  virtual InferResult generate(const std::string& prompt, std::span<const std::string> stops,
                               std::size_t limit) = 0;
};

// Single-thread inference with one finish string. Checks the preconditions
// (limit >= 1, non-empty finish) and the backend's postconditions; a
// BackendUnavailable from the backend is rethrown with `context` prepended.
InferResult infer(GenerationBackend& backend, const std::string& prompt,
                  const std::string& finish, std::size_t limit, std::string_view context = {});

}  // namespace dccot
