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

#include <memory>
#include <string>
#include <vector>

#include "dccot/backend.hpp"
#include "dccot/token_counter.hpp"

namespace dccot {

enum class MatchKind { Exact, Prefix, Contains };

std::string_view to_string(MatchKind m);

struct ScriptRule {
  MatchKind match = MatchKind::Exact;
  std::string pattern;
  std::string continuation;
  bool emits_eos = false;
};

class NoScriptRule : public Error {
 public:
  using Error::Error;
};

// Deterministic backend for tests: the first rule whose pattern matches the
// prompt supplies the whole continuation. The continuation is cut at the
// earliest stop string, or at `limit` tokens, whichever comes first. A rule
// that runs out without a stop string ends with EOS when `emits_eos` is set
// and with stop_reason Budget otherwise.
//
// Immutable after construction, so concurrent generate() calls are safe.
class ScriptedBackend final : public GenerationBackend {
 public:
  ScriptedBackend(std::vector<ScriptRule> rules, std::shared_ptr<const TokenCounter> counter);

  InferResult generate(const std::string& prompt, std::span<const std::string> stops,
                       std::size_t limit) override;

  const std::vector<ScriptRule>& rules() const { return rules_; }

 private:
  const ScriptRule& match(const std::string& prompt) const;

  std::vector<ScriptRule> rules_;
  std::shared_ptr<const TokenCounter> counter_;
};

}  // namespace dccot
