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

#include "dccot/json_io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace dccot::io {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw SchemaError(std::string("expected an object with \"") + key + "\"");
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("missing field \"") + key + "\"");
  return *it;
}

template <typename T>
T get(const json& j, const char* key) {
  const json& v = field(j, key);
  try {
    if constexpr (std::is_same_v<T, std::size_t>) {
      if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw SchemaError("");
      }
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw SchemaError("");
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw SchemaError("");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw SchemaError("");
    }
    return v.get<T>();
  } catch (const std::exception&) {
    throw SchemaError(std::string("field \"") + key + "\" has the wrong type: " + v.dump());
  }
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.is_object() && j.contains(key)) out = get<T>(j, key);
}

std::string problem_id_of(const json& j) {
  const json& v = field(j, "problem_id");
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  throw SchemaError("problem_id must be a string or an integer");
}

json to_json(const train::Block& b) {
  return {{"name", b.name},
          {"start", b.start},
          {"end", b.end},
          {"origin", to_string(b.origin)},
          {"copy", to_string(b.copy)},
          {"round", b.round},
          {"worker", b.worker}};
}

}  // namespace

json to_json(const Transcript& t) {
  json parts = json::array();
  for (std::size_t j = 0; j < t.directors.size(); ++j) {
    parts.push_back({{"kind", "director"}, {"text", t.directors[j].text}});
    if (j < t.rounds.size()) {
      json workers = json::array();
      for (const Segment& w : t.rounds[j].workers) {
        workers.push_back({{"index", w.worker_index.value_or(0)}, {"text", w.text}});
      }
      parts.push_back({{"kind", "round"}, {"workers", std::move(workers)}});
    }
  }
  return {{"prompt", t.prompt}, {"terminated", to_string(t.terminated)}, {"parts", parts}};
}

Transcript transcript_from_json(const json& j, const TokenCounter& counter) {
  const std::string term = get<std::string>(j, "terminated");
  Termination terminated;
  if (term == "eos") {
    terminated = Termination::Eos;
  } else if (term == "budget_exhausted") {
    terminated = Termination::BudgetExhausted;
  } else {
    throw SchemaError("terminated must be \"eos\" or \"budget_exhausted\", got \"" + term + "\"");
  }
  std::string prompt;
  maybe(j, "prompt", prompt);

  const json& parts = field(j, "parts");
  if (!parts.is_array() || parts.empty()) throw SchemaError("parts must be a non-empty array");
  std::vector<std::string> directors;
  std::vector<std::vector<std::string>> rounds;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const std::string kind = get<std::string>(parts[p], "kind");
    const bool want_director = p % 2 == 0;
    if (kind != (want_director ? "director" : "round")) {
      throw SchemaError("part " + std::to_string(p) + " must be a " +
                        (want_director ? "director" : "round") + ", got \"" + kind + "\"");
    }
    if (want_director) {
      directors.push_back(get<std::string>(parts[p], "text"));
      continue;
    }
    const json& workers = field(parts[p], "workers");
    if (!workers.is_array() || workers.empty()) {
      throw SchemaError("round at part " + std::to_string(p) + " has no workers");
    }
    std::vector<std::string> texts;
    for (const json& w : workers) {
      const std::size_t index = get<std::size_t>(w, "index");
      if (index != texts.size() + 1) {
        throw SchemaError("round at part " + std::to_string(p) + ": expected worker " +
                          std::to_string(texts.size() + 1) + ", got " + std::to_string(index));
      }
      texts.push_back(get<std::string>(w, "text"));
    }
    rounds.push_back(std::move(texts));
  }
  if (parts.size() % 2 == 0) throw SchemaError("parts must end with a director");
  return make_transcript(std::move(prompt), directors, rounds, terminated, counter);
}

json to_json(const TraceCall& c) {
  json j = {{"role", to_string(c.role)},
            {"round", c.round},
            {"context", c.context},
            {"prompt_length", c.prompt_length},
            {"limit", c.limit},
            {"tokens", c.result.tokens},
            {"token_count", c.result.token_count},
            {"stop_reason", to_string(c.result.stop_reason)}};
  if (c.worker_index) j["worker_index"] = *c.worker_index;
  return j;
}

json to_json(const EpisodeTrace& trace) {
  json calls = json::array();
  for (const TraceCall& c : trace.calls) calls.push_back(to_json(c));
  return {{"calls", calls}};
}

json to_json(const FormatReport& r) {
  return {{"spawned_workers", r.spawned_workers},
          {"tags_balanced", r.tags_balanced},
          {"tags_nested", r.tags_nested},
          {"format_ok", r.format_ok},
          {"violations", r.violations}};
}

json to_json(const train::PackedSequence& seq) {
  json layout = json::array();
  for (const train::Block& b : seq.layout.blocks) layout.push_back(to_json(b));
  return {{"tokens", seq.tokens},
          {"layout", layout},
          {"visibility", seq.mask.visibility},
          {"position_ids", seq.position_ids},
          {"loss_mask", seq.loss_mask},
          {"length", seq.tokens.size()},
          {"exceeds_max_length", seq.exceeds_max_length}};
}

json to_json(const TagConfig& tags) {
  return {{"spawn_open", tags.spawn_open},
          {"spawn_close", tags.spawn_close},
          {"worker_open", tags.worker_open_template},
          {"worker_close", tags.worker_close_template},
          {"eos_marker", tags.eos_marker}};
}

TagConfig tags_from_json(const json& j) {
  TagConfig tags;
  maybe(j, "spawn_open", tags.spawn_open);
  maybe(j, "spawn_close", tags.spawn_close);
  maybe(j, "worker_open", tags.worker_open_template);
  maybe(j, "worker_close", tags.worker_close_template);
  maybe(j, "eos_marker", tags.eos_marker);
  tags.validate();
  return tags;
}

HttpBackendConfig http_config_from_json(const json& j) {
  HttpBackendConfig c;
  maybe(j, "base_url", c.base_url);
  maybe(j, "model_name", c.model_name);
  maybe(j, "temperature", c.temperature);
  maybe(j, "top_p", c.top_p);
  std::size_t n = 0;
  if (j.contains("request_timeout_ms")) {
    n = get<std::size_t>(j, "request_timeout_ms");
    c.request_timeout = std::chrono::milliseconds(n);
  }
  if (j.contains("initial_backoff_ms")) {
    n = get<std::size_t>(j, "initial_backoff_ms");
    c.initial_backoff = std::chrono::milliseconds(n);
  }
  if (j.contains("max_retries")) c.max_retries = static_cast<unsigned>(get<std::size_t>(j, "max_retries"));
  if (j.contains("max_connections")) {
    c.max_connections = static_cast<unsigned>(get<std::size_t>(j, "max_connections"));
  }
  if (j.contains("auth_token")) c.auth_token = get<std::string>(j, "auth_token");
  c.validate();
  return c;
}

std::vector<ScriptRule> script_from_json(const json& j) {
  const json& rules = field(j, "rules");
  if (!rules.is_array()) throw SchemaError("rules must be an array");
  std::vector<ScriptRule> out;
  for (const json& r : rules) {
    ScriptRule rule;
    const std::string match = get<std::string>(r, "match");
    if (match == "exact") {
      rule.match = MatchKind::Exact;
    } else if (match == "prefix") {
      rule.match = MatchKind::Prefix;
    } else if (match == "contains") {
      rule.match = MatchKind::Contains;
    } else {
      throw SchemaError("match must be exact, prefix or contains, got \"" + match + "\"");
    }
    rule.pattern = get<std::string>(r, "pattern");
    rule.continuation = get<std::string>(r, "continuation");
    maybe(r, "eos", rule.emits_eos);
    out.push_back(std::move(rule));
  }
  return out;
}

json to_json(const std::vector<ScriptRule>& rules) {
  json arr = json::array();
  for (const ScriptRule& r : rules) {
    arr.push_back({{"match", to_string(r.match)},
                   {"pattern", r.pattern},
                   {"continuation", r.continuation},
                   {"eos", r.emits_eos}});
  }
  return {{"rules", arr}};
}

namespace {

rl::ScoredResponse response_from_json(const json& j) {
  rl::ScoredResponse r;
  r.correct = get<bool>(j, "correct");
  r.format_ok = get<bool>(j, "format_ok");
  r.lpl = get<std::size_t>(j, "lpl");
  return r;
}

}  // namespace

ScoredLine scored_from_json(const json& j) {
  return ScoredLine{problem_id_of(j), response_from_json(j)};
}

rl::RolloutGroup group_from_json(const json& j) {
  rl::RolloutGroup g;
  g.problem_id = problem_id_of(j);
  const json& rs = field(j, "responses");
  if (!rs.is_array()) throw SchemaError("responses must be an array");
  for (const json& r : rs) g.responses.push_back(response_from_json(r));
  return g;
}

json to_json(const rl::RolloutGroup& g) {
  json rs = json::array();
  for (const rl::ScoredResponse& r : g.responses) {
    rs.push_back({{"correct", r.correct}, {"format_ok", r.format_ok}, {"lpl", r.lpl}});
  }
  return {{"problem_id", g.problem_id}, {"responses", rs}};
}

json to_json(const rl::RewardConfig& cfg) {
  return {{"C_L", cfg.c_l},
          {"L_cutoff", cfg.l_cutoff},
          {"L_max", cfg.l_max},
          {"mode", rl::to_string(cfg.mode)}};
}

rl::RewardConfig reward_config_from_json(const json& j) {
  rl::RewardConfig cfg;
  maybe(j, "C_L", cfg.c_l);
  maybe(j, "L_cutoff", cfg.l_cutoff);
  maybe(j, "L_max", cfg.l_max);
  if (j.contains("mode")) cfg.mode = rl::parse_reward_mode(get<std::string>(j, "mode"));
  cfg.validate();
  return cfg;
}

json to_json(const rl::StagePreset& p) {
  json j = {{"name", p.name},
            {"objective", rl::to_string(p.objective)},
            {"filter", rl::to_string(p.filter)},
            {"C_L", p.reward.c_l},
            {"L_cutoff", p.reward.l_cutoff},
            {"L_max", p.reward.l_max},
            {"reward_mode", rl::to_string(p.reward.mode)},
            {"eps_high", p.eps_high},
            {"beta", p.beta},
            {"optimization_steps_per_rollout", p.optimization_steps_per_rollout}};
  if (p.objective == rl::Objective::Dapo) j["eps_low"] = p.eps_low;
  if (p.learning_rate) j["learning_rate"] = *p.learning_rate;
  if (p.rollout_batch) j["rollout_batch"] = *p.rollout_batch;
  if (p.train_batch) j["train_batch"] = *p.train_batch;
  if (p.steps) j["steps"] = *p.steps;
  if (p.schedule) {
    j["schedule"] = {{"after_step", p.schedule->after_step},
                     {"train_batch", p.schedule->train_batch},
                     {"learning_rate", p.schedule->learning_rate}};
  }
  return j;
}

eval::EvalRecord record_from_json(const json& j) {
  eval::EvalRecord r;
  r.problem_id = problem_id_of(j);
  const json& rs = field(j, "responses");
  if (!rs.is_array()) throw SchemaError("responses must be an array");
  for (const json& x : rs) {
    eval::Response resp;
    maybe(x, "answer", resp.answer);
    resp.correct = get<bool>(x, "correct");
    resp.lpl = get<std::size_t>(x, "lpl");
    r.responses.push_back(std::move(resp));
  }
  return r;
}

json to_json(const eval::EvalRecord& r) {
  json rs = json::array();
  for (const eval::Response& x : r.responses) {
    rs.push_back({{"answer", x.answer}, {"correct", x.correct}, {"lpl", x.lpl}});
  }
  return {{"problem_id", r.problem_id}, {"responses", rs}};
}

eval::ResultsTable results_from_json(const json& j) {
  eval::ResultsTable t;
  const json& benches = field(j, "benchmarks");
  if (!benches.is_array()) throw SchemaError("benchmarks must be an array");
  for (const json& b : benches) {
    if (!b.is_string()) throw SchemaError("benchmark names must be strings");
    t.benchmarks.push_back(b.get<std::string>());
  }
  for (const json& m : field(j, "methods")) {
    eval::MethodRow row;
    row.name = get<std::string>(m, "name");
    const json& results = field(m, "results");
    if (!results.is_object()) throw SchemaError("results of " + row.name + " must be an object");
    for (const auto& [bench, cell] : results.items()) {
      row.results[bench] = eval::Cell{get<double>(cell, "acc"), get<double>(cell, "lpl")};
    }
    t.methods.push_back(std::move(row));
  }
  if (j.contains("comparisons")) {
    for (const json& c : field(j, "comparisons")) {
      t.comparisons.push_back({get<std::string>(c, "method"), get<std::string>(c, "baseline")});
    }
  }
  for (const eval::Comparison& c : t.comparisons) {
    t.method(c.method);
    t.method(c.baseline);
  }
  return t;
}

json to_json(const eval::ResultsTable& t) {
  json methods = json::array();
  for (const eval::MethodRow& m : t.methods) {
    json results = json::object();
    for (const auto& [bench, cell] : m.results) results[bench] = {{"acc", cell.acc}, {"lpl", cell.lpl}};
    methods.push_back({{"name", m.name}, {"results", results}});
  }
  json comparisons = json::array();
  for (const eval::Comparison& c : t.comparisons) {
    comparisons.push_back({{"method", c.method}, {"baseline", c.baseline}});
  }
  return {{"benchmarks", t.benchmarks}, {"methods", methods}, {"comparisons", comparisons}};
}

json to_json(const std::vector<eval::DeltaRow>& deltas, const eval::ResultsTable& t) {
  json rows = json::array();
  for (const eval::DeltaRow& d : deltas) {
    json cells = json::object();
    for (std::size_t b = 0; b < t.benchmarks.size(); ++b) {
      if (!d.cells[b]) continue;
      cells[t.benchmarks[b]] = {{"acc_points", d.cells[b]->acc_points},
                                {"lpl_percent", d.cells[b]->lpl_percent}};
    }
    rows.push_back({{"method", d.method}, {"baseline", d.baseline}, {"deltas", cells}});
  }
  return rows;
}

json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

std::vector<json> read_jsonl_file(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::vector<json> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw SchemaError(path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("error writing " + path);
}

}  // namespace dccot::io
