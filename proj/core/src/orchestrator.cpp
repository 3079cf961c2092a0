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

#include "dccot/orchestrator.hpp"

#include <algorithm>
#include <future>

namespace dccot {

namespace {

std::string join(const std::vector<std::string>& pieces) {
  std::size_t n = 0;
  for (const auto& p : pieces) n += p.size();
  std::string out;
  out.reserve(n);
  for (const auto& p : pieces) out += p;
  return out;
}

Segment director_segment(std::size_t round, std::string text, std::size_t length) {
  return Segment{Role::Director, round, std::nullopt, std::move(text), length};
}

}  // namespace

void OrchestratorConfig::validate() const {
  if (num_workers == 0) throw ConfigError("num_workers must be at least 1");
  if (budget == 0) throw ConfigError("budget must be at least 1");
  tags.validate();
}

std::string TraceCall::prompt() const { return join(context); }

Episode run_episode(GenerationBackend& backend, const std::string& prompt,
                    const OrchestratorConfig& cfg, const TokenCounter& counter) {
  cfg.validate();
  const TagConfig& tags = cfg.tags;

  Episode ep;
  Transcript& t = ep.transcript;
  t.prompt = prompt;

  std::vector<std::string> context{prompt};
  std::size_t remaining = cfg.budget;

  for (;;) {
    const std::size_t round = t.rounds.size();
    TraceCall call;
    call.role = Role::Director;
    call.round = round;
    call.context = context;
    const std::string director_prompt = join(context);
    call.prompt_length = counter.count(director_prompt);
    call.limit = remaining;
    call.result = infer(backend, director_prompt, tags.spawn_open, remaining,
                        "director after round " + std::to_string(round));
    const InferResult& d = call.result;
    const std::size_t director_tokens = d.token_count;
    remaining -= d.token_count;
    t.directors.push_back(director_segment(round, d.tokens, d.token_count));
    context.push_back(d.tokens);
    const StopReason stop = d.stop_reason;
    ep.trace.calls.push_back(std::move(call));

    if (stop == StopReason::Eos) {
      t.terminated = Termination::Eos;
      break;
    }
    if (stop == StopReason::Budget || remaining == 0 ||
        (cfg.max_rounds && round >= *cfg.max_rounds)) {
      t.terminated = Termination::BudgetExhausted;
      break;
    }

    context.push_back(tags.spawn_open);
    const std::size_t r = round + 1;
    const std::size_t k = cfg.num_workers;

    std::vector<TraceCall> worker_calls(k);
    std::vector<std::future<InferResult>> pending;
    pending.reserve(k);
    for (std::size_t i = 1; i <= k; ++i) {
      TraceCall& wc = worker_calls[i - 1];
      wc.role = Role::Worker;
      wc.round = r;
      wc.worker_index = i;
      wc.context = context;
      wc.context.push_back(tags.worker_open(i));
      wc.limit = remaining;
      std::string wprompt = join(wc.context);
      wc.prompt_length = counter.count(wprompt);
      pending.push_back(std::async(
          std::launch::async,
          [&backend, p = std::move(wprompt), finish = tags.worker_close(i), limit = remaining,
           ctx = "worker " + std::to_string(i) + " of round " + std::to_string(r)]() {
            return infer(backend, p, finish, limit, ctx);
          }));
    }
    // Every future is waited on before the first failure is rethrown.
    std::exception_ptr failure;
    for (std::size_t i = 0; i < k; ++i) {
      try {
        worker_calls[i].result = pending[i].get();
      } catch (...) {
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);

    SpawnRound spawned;
    std::size_t longest = 0;
    for (std::size_t i = 1; i <= k; ++i) {
      const InferResult& w = worker_calls[i - 1].result;
      longest = std::max(longest, w.token_count);
      spawned.workers.push_back(Segment{Role::Worker, r, i, w.tokens, w.token_count});
      context.push_back(tags.worker_open(i));
      context.push_back(w.tokens);
      context.push_back(tags.worker_close(i));
    }
    context.push_back(tags.spawn_close);
    t.rounds.push_back(std::move(spawned));
    for (TraceCall& wc : worker_calls) ep.trace.calls.push_back(std::move(wc));
    remaining -= longest;

    // A round that spent nothing would repeat forever against a deterministic backend.
    if (remaining == 0 || director_tokens + longest == 0) {
      t.directors.push_back(director_segment(r, {}, 0));
      t.terminated = Termination::BudgetExhausted;
      break;
    }
  }
  return ep;
}

}  // namespace dccot
