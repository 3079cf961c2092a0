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
#include <optional>
#include <string>
#include <vector>

#include "dccot/backend.hpp"
#include "dccot/tags.hpp"
#include "dccot/token_counter.hpp"
#include "dccot/transcript.hpp"

namespace dccot {

struct OrchestratorConfig {
  std::size_t num_workers = 3;  // K
  std::size_t budget = 12000;   // L, longest-path tokens
  TagConfig tags;
  std::optional<std::size_t> max_rounds;

  // Throws ConfigError unless K >= 1, L >= 1 and the tags are valid.
  void validate() const;
};

// One inference call as it was issued.
struct TraceCall {
  Role role = Role::Director;
  // Directors: rounds completed before the call. Workers: 1-based round.
  std::size_t round = 0;
  std::optional<std::size_t> worker_index;
  // The prompt, as the pieces it was assembled from: the user prompt first,
  // then generated segments and tags in append order. Their concatenation is
  // exactly the text sent to the backend.
  std::vector<std::string> context;
  std::size_t prompt_length = 0;
  std::size_t limit = 0;
  InferResult result;

  std::string prompt() const;
};

// Calls in issue order; the workers of a round appear in index order.
struct EpisodeTrace {
  std::vector<TraceCall> calls;
};

struct Episode {
  Transcript transcript;
  EpisodeTrace trace;
};

// Runs the director/worker loop for one prompt:
//
//   director infers up to spawn_open (limit = remaining budget);
//   on EOS or budget the episode ends, otherwise K workers run concurrently
//   from context + worker_open(i) up to worker_close(i), all with the same
//   limit; the budget drops by the longest worker; workers are appended in
//   index order with their tags, then spawn_close, and the director resumes.
//
// Segment lengths are the token counts the backend reported, so the
// transcript's longest path length never exceeds cfg.budget. Tags are not
// charged to the budget. Reaching zero budget right after a round, or a round
// in which the director and every worker produced zero tokens, leaves an
// empty final director segment and ends the episode as budget_exhausted. Hitting max_rounds ends the episode as
// budget_exhausted when the director asks for one more round.
//
// `counter` only measures prompt_length for the trace.
Episode run_episode(GenerationBackend& backend, const std::string& prompt,
                    const OrchestratorConfig& cfg, const TokenCounter& counter);

}  // namespace dccot
