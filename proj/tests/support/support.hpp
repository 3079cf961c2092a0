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

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <sstream>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "dccot/orchestrator.hpp"
#include "dccot/scripted_backend.hpp"
#include "dccot/tags.hpp"
#include "dccot/token_counter.hpp"
#include "dccot/trainseq.hpp"
#include "dccot/transcript.hpp"

namespace dccot::support {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

// Words that never form markup, plus a few that stress the lexer.
inline std::string random_word(Rng& rng) {
  static const std::vector<std::string> kWords = {
      "so",  "x=3",   "thus", "<b>",  "worker", "spawn", "{42}", "</w>", "<worker_>",
      "1/2", "then,", "is",   "ok.",  "<worker_01>", "a",  "</worker_x>", "7", "π"};
  return kWords[uniform(rng, 0, kWords.size() - 1)];
}

inline std::string random_text(Rng& rng, std::size_t max_words) {
  const std::size_t n = uniform(rng, 0, max_words);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) out += coin(rng, 0.9) ? " " : "\n";
    out += random_word(rng);
  }
  return out;
}

// Gives every round some text, so an orchestrator replaying it never sees a
// round that spends no budget.
inline void ensure_progress(Rng& rng, const std::vector<std::string>& directors,
                            std::vector<std::vector<std::string>>& workers) {
  for (std::size_t j = 0; j < workers.size(); ++j) {
    bool empty = directors[j].empty();
    for (const std::string& w : workers[j]) empty = empty && w.empty();
    if (empty) workers[j][uniform(rng, 0, workers[j].size() - 1)] = random_word(rng);
  }
}

struct TranscriptShape {
  std::size_t max_rounds = 3;
  std::size_t max_workers = 5;
  std::size_t max_words = 8;
};

inline Transcript random_transcript(Rng& rng, const TokenCounter& counter,
                                    const TranscriptShape& shape = {}) {
  const std::size_t rounds = uniform(rng, 0, shape.max_rounds);
  std::vector<std::string> directors;
  std::vector<std::vector<std::string>> workers(rounds);
  for (std::size_t j = 0; j <= rounds; ++j) directors.push_back(random_text(rng, shape.max_words));
  for (auto& r : workers) {
    const std::size_t k = uniform(rng, 1, shape.max_workers);
    for (std::size_t i = 0; i < k; ++i) r.push_back(random_text(rng, shape.max_words));
  }
  return make_transcript("Q: " + random_text(rng, 4), directors, workers,
                         coin(rng) ? Termination::Eos : Termination::BudgetExhausted, counter);
}

// Longest source-to-sink path over the segment DAG, found by a topological
// relaxation that knows nothing about rounds: nodes are segments weighted by
// length, edges run from each director to the workers of the round after it
// and from each worker to the next director.
inline std::size_t dag_longest_path(const Transcript& t) {
  std::vector<std::size_t> weight;
  std::vector<std::vector<std::size_t>> out;
  auto node = [&](std::size_t w) {
    weight.push_back(w);
    out.emplace_back();
    return weight.size() - 1;
  };
  std::vector<std::size_t> director_ids;
  for (const Segment& d : t.directors) director_ids.push_back(node(d.length));
  for (std::size_t r = 0; r < t.rounds.size(); ++r) {
    for (const Segment& w : t.rounds[r].workers) {
      const std::size_t id = node(w.length);
      out[director_ids[r]].push_back(id);
      out[id].push_back(director_ids[r + 1]);
    }
  }
  std::vector<std::size_t> indegree(weight.size(), 0);
  for (const auto& es : out)
    for (std::size_t v : es) ++indegree[v];
  std::vector<std::size_t> best(weight.size(), 0);
  std::queue<std::size_t> ready;
  for (std::size_t v = 0; v < weight.size(); ++v) {
    if (indegree[v] == 0) {
      ready.push(v);
      best[v] = weight[v];
    }
  }
  std::size_t longest = 0;
  while (!ready.empty()) {
    const std::size_t u = ready.front();
    ready.pop();
    longest = std::max(longest, best[u]);
    for (std::size_t v : out[u]) {
      best[v] = std::max(best[v], best[u] + weight[v]);
      if (--indegree[v] == 0) ready.push(v);
    }
  }
  return longest;
}

// Script that makes the orchestrator replay `t` call by call: one exact rule
// per director and worker prompt. Extra text after each stop string checks
// that backends really cut there.
inline std::vector<ScriptRule> script_for(const Transcript& t, const TagConfig& tags) {
  std::vector<ScriptRule> rules;
  std::string context = t.prompt;
  for (std::size_t j = 0; j < t.directors.size(); ++j) {
    const std::string& s = t.directors[j].text;
    const bool last = j == t.rounds.size();
    if (last) {
      rules.push_back({MatchKind::Exact, context, s, t.terminated == Termination::Eos});
      break;
    }
    rules.push_back({MatchKind::Exact, context, s + tags.spawn_open + " ignored tail", false});
    context += s + tags.spawn_open;
    std::string reassembled;
    for (const Segment& w : t.rounds[j].workers) {
      const std::size_t i = *w.worker_index;
      rules.push_back({MatchKind::Exact, context + tags.worker_open(i),
                       w.text + tags.worker_close(i) + " never read", false});
      reassembled += tags.worker_open(i) + w.text + tags.worker_close(i);
    }
    context += reassembled + tags.spawn_close;
  }
  return rules;
}

// Whitespace tokens, except that a token which is exactly a tag or the EOS
// marker vanishes. Lets layouts be checked with the tags elided.
class TagElidingCounter final : public TokenCounter {
 public:
  explicit TagElidingCounter(TagConfig tags) : tags_(std::move(tags)) {}

  std::size_t count(std::string_view text) const override { return split(text).size(); }
  bool can_split() const override { return true; }
  std::vector<std::string_view> split(std::string_view text) const override {
    std::vector<std::string_view> out;
    for (std::string_view tok : base_.split(text)) {
      if (is_tag(tok)) continue;
      out.push_back(tok);
    }
    return out;
  }
  std::string name() const override { return "tag-eliding"; }

 private:
  bool is_tag(std::string_view tok) const {
    if (tok == tags_.eos_marker) return true;
    const auto found = lex_tags(tags_, tok);
    return found.size() == 1 && found[0].begin == 0 && found[0].end == tok.size();
  }

  TagConfig tags_;
  WhitespaceCounter base_;
};

// Picks a continuation by the prompt's ending: a worker prompt ends with its
// open tag and a director prompt with spawn_close (or is the bare prompt).
// Cutting and budget handling are ScriptedBackend's.
class SuffixBackend final : public GenerationBackend {
 public:
  struct Rule {
    std::string suffix;
    std::string continuation;
    bool emits_eos = false;
  };

  SuffixBackend(std::vector<Rule> rules, std::shared_ptr<const TokenCounter> counter)
      : rules_(std::move(rules)), counter_(std::move(counter)) {}

  InferResult generate(const std::string& prompt, std::span<const std::string> stops,
                       std::size_t limit) override {
    for (const Rule& r : rules_) {
      if (prompt.ends_with(r.suffix)) {
        ScriptedBackend one({{MatchKind::Prefix, "", r.continuation, r.emits_eos}}, counter_);
        return one.generate(prompt, stops, limit);
      }
    }
    throw NoScriptRule("no suffix rule for prompt: " + prompt);
  }

 private:
  std::vector<Rule> rules_;
  std::shared_ptr<const TokenCounter> counter_;
};

inline std::size_t occurrences(std::string_view hay, std::string_view needle) {
  std::size_t n = 0;
  for (auto at = hay.find(needle); at != std::string_view::npos; at = hay.find(needle, at + 1)) ++n;
  return n;
}

inline std::string words(std::size_t n, const std::string& stem) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) out += ' ';
    out += stem + std::to_string(i + 1);
  }
  return out;
}

// Checks every loss-bearing token of a packed episode against the trace: the
// tokens it may attend to (itself excluded) must be exactly the tokens of the
// context its call was given plus what that call had generated before it, and
// their position IDs must run 0, 1, 2, ... with the token itself next.
struct ReplayReport {
  std::size_t checked = 0;
  std::string mismatch;  // empty when everything matched
};

inline ReplayReport replay_check(const Episode& ep, const train::PackedSequence& seq,
                                 const TokenCounter& counter) {
  ReplayReport report;
  const auto& blocks = seq.layout.blocks;
  const train::DenseMask dense = train::expand_dense(seq.mask, seq.layout, 1u << 14);

  auto tokens_of = [&](const std::vector<std::string>& pieces) {
    std::vector<std::string> out;
    for (const std::string& piece : pieces)
      for (std::string_view tok : counter.split(piece)) out.emplace_back(tok);
    return out;
  };
  auto find_call = [&](Role role, std::size_t round, std::size_t worker) -> const TraceCall* {
    for (const TraceCall& c : ep.trace.calls) {
      if (c.role != role || c.round != round) continue;
      if (role == Role::Worker && *c.worker_index != worker) continue;
      return &c;
    }
    return nullptr;
  };

  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const train::Block& b = blocks[bi];
    for (std::size_t p = b.start; p < b.end; ++p) {
      if (!seq.loss_mask[p]) continue;
      const TraceCall* call = nullptr;
      std::vector<std::string> generated;  // pieces the call produced before this block
      const std::string& name = b.name;
      if (b.copy == train::Copy::A) {
        call = find_call(Role::Worker, b.round, b.worker);
      } else if (name == "EOS") {
        call = find_call(Role::Director, ep.transcript.rounds.size(), 0);
        generated.push_back(ep.transcript.directors.back().text);
      } else if (name.size() > 1 && name[0] == 'S') {
        const std::size_t j = std::stoul(name.substr(1));
        call = find_call(Role::Director, j - 1, 0);
        if (name.ends_with(":spawn")) generated.push_back(ep.transcript.directors[j - 1].text);
      }
      std::ostringstream where;
      where << "token " << p << " in block " << name;
      if (call == nullptr) {
        report.mismatch = where.str() + ": no matching call in the trace";
        return report;
      }
      std::vector<std::string> expected = tokens_of(call->context);
      for (const std::string& t : tokens_of(generated)) expected.push_back(t);
      for (std::size_t q = b.start; q < p; ++q) expected.push_back(seq.tokens[q]);

      std::vector<std::string> visible;
      std::vector<std::size_t> positions;
      for (std::size_t q = 0; q < p; ++q) {
        if (dense.at(p, q)) {
          visible.push_back(seq.tokens[q]);
          positions.push_back(seq.position_ids[q]);
        }
      }
      if (!dense.at(p, p)) {
        report.mismatch = where.str() + ": cannot see itself";
        return report;
      }
      if (visible != expected) {
        report.mismatch = where.str() + ": visible " + std::to_string(visible.size()) +
                          " tokens, context has " + std::to_string(expected.size());
        return report;
      }
      for (std::size_t k = 0; k < positions.size(); ++k) {
        if (positions[k] != k) {
          report.mismatch = where.str() + ": visible position IDs are not 0..n-1";
          return report;
        }
      }
      if (seq.position_ids[p] != positions.size()) {
        report.mismatch = where.str() + ": position ID " + std::to_string(seq.position_ids[p]) +
                          ", expected " + std::to_string(positions.size());
        return report;
      }
      ++report.checked;
    }
  }
  return report;
}

// A random episode replayed through the orchestrator: `rounds` rounds of k
// workers each, with random texts.
inline Episode random_episode(Rng& rng, std::size_t rounds, std::size_t k,
                              const std::shared_ptr<const TokenCounter>& counter,
                              const TagConfig& tags = {}) {
  std::vector<std::string> directors;
  std::vector<std::vector<std::string>> workers(rounds);
  for (std::size_t j = 0; j <= rounds; ++j) directors.push_back(random_text(rng, 6));
  for (auto& r : workers)
    for (std::size_t i = 0; i < k; ++i) r.push_back(random_text(rng, 6));
  ensure_progress(rng, directors, workers);
  const Transcript target =
      make_transcript("Q: " + random_text(rng, 4) + "\n", directors, workers,
                      coin(rng) ? Termination::Eos : Termination::BudgetExhausted, *counter);
  ScriptedBackend backend(script_for(target, tags), counter);
  OrchestratorConfig cfg;
  cfg.num_workers = k;
  cfg.budget = 100000;
  cfg.tags = tags;
  return run_episode(backend, target.prompt, cfg, *counter);
}

}  // namespace dccot::support
