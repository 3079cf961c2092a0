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

#include "dccot/scripted_backend.hpp"

#include <string_view>

namespace dccot {

std::string_view to_string(MatchKind m) {
  switch (m) {
    case MatchKind::Exact: return "exact";
    case MatchKind::Prefix: return "prefix";
    case MatchKind::Contains: return "contains";
  }
  return "?";
}

ScriptedBackend::ScriptedBackend(std::vector<ScriptRule> rules,
                                 std::shared_ptr<const TokenCounter> counter)
    : rules_(std::move(rules)), counter_(std::move(counter)) {
  if (!counter_ || !counter_->can_split()) {
    throw ConfigError("scripted backend needs a token counter that can split text");
  }
}

const ScriptRule& ScriptedBackend::match(const std::string& prompt) const {
  for (const ScriptRule& rule : rules_) {
    switch (rule.match) {
      case MatchKind::Exact:
        if (prompt == rule.pattern) return rule;
        break;
      case MatchKind::Prefix:
        if (prompt.starts_with(rule.pattern)) return rule;
        break;
      case MatchKind::Contains:
        if (prompt.find(rule.pattern) != std::string::npos) return rule;
        break;
    }
  }
  constexpr std::size_t kShown = 200;
  const std::string tail = prompt.size() > kShown ? "..." + prompt.substr(prompt.size() - kShown)
                                                  : prompt;
  throw NoScriptRule("no script rule matches prompt: " + tail);
}

InferResult ScriptedBackend::generate(const std::string& prompt,
                                      std::span<const std::string> stops, std::size_t limit) {
  const ScriptRule& rule = match(prompt);
  const std::string_view cont = rule.continuation;

  std::size_t stop_at = std::string_view::npos;
  for (const std::string& s : stops) {
    if (s.empty()) continue;
    stop_at = std::min(stop_at, cont.find(s));
  }
  const std::string_view before = cont.substr(0, stop_at);

  InferResult r;
  const std::size_t n = counter_->count(before);
  if (n > limit) {
    r.tokens = std::string(counter_->truncate(before, limit));
    r.token_count = limit;
    r.stop_reason = StopReason::Budget;
    return r;
  }
  r.tokens = std::string(before);
  r.token_count = n;
  if (stop_at != std::string_view::npos) {
    r.stop_reason = StopReason::FinishString;
  } else {
    r.stop_reason = rule.emits_eos ? StopReason::Eos : StopReason::Budget;
  }
  return r;
}

}  // namespace dccot
