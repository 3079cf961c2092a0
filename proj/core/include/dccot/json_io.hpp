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

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dccot/error.hpp"
#include "dccot/eval.hpp"
#include "dccot/http_backend.hpp"
#include "dccot/orchestrator.hpp"
#include "dccot/presets.hpp"
#include "dccot/report.hpp"
#include "dccot/rlmath.hpp"
#include "dccot/scripted_backend.hpp"
#include "dccot/trainseq.hpp"
#include "dccot/transcript.hpp"

namespace dccot::io {

using json = nlohmann::json;

// Input that does not match the expected JSON shape.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// {"prompt", "terminated", "parts": [{"kind": "director", "text"} |
//  {"kind": "round", "workers": [{"index", "text"}, ...]}, ...]}
json to_json(const Transcript& t);
Transcript transcript_from_json(const json& j, const TokenCounter& counter);

json to_json(const TraceCall& c);
json to_json(const EpisodeTrace& trace);
json to_json(const FormatReport& r);
json to_json(const train::PackedSequence& seq);

// Missing keys keep their defaults.
json to_json(const TagConfig& tags);
TagConfig tags_from_json(const json& j);
HttpBackendConfig http_config_from_json(const json& j);

// {"rules": [{"match": "exact"|"prefix"|"contains", "pattern", "continuation", "eos"}]}
std::vector<ScriptRule> script_from_json(const json& j);
json to_json(const std::vector<ScriptRule>& rules);

// {"problem_id", "correct", "format_ok", "lpl"}
struct ScoredLine {
  std::string problem_id;
  rl::ScoredResponse response;
};
ScoredLine scored_from_json(const json& j);

// {"problem_id", "responses": [{"correct", "format_ok", "lpl"}, ...]}
rl::RolloutGroup group_from_json(const json& j);
json to_json(const rl::RolloutGroup& g);

json to_json(const rl::RewardConfig& cfg);
rl::RewardConfig reward_config_from_json(const json& j);
json to_json(const rl::StagePreset& p);

// {"problem_id", "responses": [{"answer", "correct", "lpl"}, ...]}
eval::EvalRecord record_from_json(const json& j);
json to_json(const eval::EvalRecord& r);

// {"benchmarks": [...], "methods": [{"name", "results": {bench: {"acc", "lpl"}}}],
//  "comparisons": [{"method", "baseline"}]}
eval::ResultsTable results_from_json(const json& j);
json to_json(const eval::ResultsTable& t);
json to_json(const std::vector<eval::DeltaRow>& deltas, const eval::ResultsTable& t);

// File helpers. Errors name the file and, for JSONL, the line.
json read_json_file(const std::string& path);
std::vector<json> read_jsonl_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace dccot::io
