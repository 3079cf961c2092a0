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

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "dccot/json_io.hpp"
#include "support.hpp"

using namespace dccot;
using dccot::io::json;
using dccot::io::SchemaError;

namespace {

const WhitespaceCounter kWs;

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("dccot_json_io_" + name)).string();
}

}  // namespace

TEST(JsonIo, TranscriptRoundTripProperty) {
  support::Rng rng(31);
  for (int n = 0; n < 500; ++n) {
    const Transcript t = support::random_transcript(rng, kWs);
    const json j = io::to_json(t);
    // Text form survives a dump and re-parse too.
    const Transcript back = io::transcript_from_json(json::parse(j.dump()), kWs);
    ASSERT_EQ(back, t);
  }
}

TEST(JsonIo, TranscriptShape) {
  const Transcript t =
      make_transcript("P", {"d1", "d2"}, {{"w1", "w2"}}, Termination::Eos, kWs);
  const json j = io::to_json(t);
  EXPECT_EQ(j["terminated"], "eos");
  ASSERT_EQ(j["parts"].size(), 3u);
  EXPECT_EQ(j["parts"][1]["kind"], "round");
  EXPECT_EQ(j["parts"][1]["workers"][1]["index"], 2);
  EXPECT_EQ(j["parts"][1]["workers"][1]["text"], "w2");
}

TEST(JsonIo, TranscriptSchemaErrors) {
  const auto bad = [](const char* text) {
    EXPECT_THROW(io::transcript_from_json(json::parse(text), kWs), SchemaError) << text;
  };
  bad(R"({"parts": [{"kind": "director", "text": ""}]})");
  bad(R"({"terminated": "done", "parts": [{"kind": "director", "text": ""}]})");
  bad(R"({"terminated": "eos", "parts": []})");
  bad(R"({"terminated": "eos", "parts": [{"kind": "round", "workers": []}]})");
  bad(R"({"terminated": "eos", "parts": [{"kind": "director", "text": "a"},
          {"kind": "round", "workers": [{"index": 1, "text": "w"}]}]})");
  bad(R"({"terminated": "eos", "parts": [{"kind": "director", "text": "a"},
          {"kind": "round", "workers": [{"index": 2, "text": "w"}]},
          {"kind": "director", "text": "b"}]})");
  bad(R"({"terminated": "eos", "parts": [{"kind": "director", "text": 3}]})");
  bad(R"([1, 2])");
}

TEST(JsonIo, TagsRoundTripAndDefaults) {
  TagConfig tags;
  tags.spawn_open = "[[S]]";
  tags.spawn_close = "[[/S]]";
  tags.worker_open_template = "[[W{i}]]";
  tags.worker_close_template = "[[/W{i}]]";
  tags.eos_marker = "[[END]]";
  EXPECT_EQ(io::tags_from_json(io::to_json(tags)), tags);
  EXPECT_EQ(io::tags_from_json(json::object()), TagConfig{});
  EXPECT_THROW(io::tags_from_json(json{{"worker_open", "<w>"}}), ConfigError);
  EXPECT_THROW(io::tags_from_json(json{{"spawn_open", 5}}), SchemaError);
}

TEST(JsonIo, ScriptRoundTrip) {
  const std::vector<ScriptRule> rules = {{MatchKind::Exact, "a", "b", true},
                                         {MatchKind::Prefix, "c", "d", false},
                                         {MatchKind::Contains, "e", "f", false}};
  const auto back = io::script_from_json(io::to_json(rules));
  ASSERT_EQ(back.size(), rules.size());
  for (std::size_t i = 0; i < rules.size(); ++i) {
    EXPECT_EQ(back[i].match, rules[i].match);
    EXPECT_EQ(back[i].pattern, rules[i].pattern);
    EXPECT_EQ(back[i].continuation, rules[i].continuation);
    EXPECT_EQ(back[i].emits_eos, rules[i].emits_eos);
  }
  EXPECT_FALSE(io::script_from_json(json::parse(
                   R"({"rules": [{"match": "exact", "pattern": "", "continuation": ""}]})"))[0]
                   .emits_eos);
  EXPECT_THROW(io::script_from_json(json::parse(
                   R"({"rules": [{"match": "regex", "pattern": "", "continuation": ""}]})")),
               SchemaError);
  EXPECT_THROW(io::script_from_json(json::parse(R"({"rules": 1})")), SchemaError);
}

TEST(JsonIo, GroupsAndScoredLines) {
  rl::RolloutGroup g{"p7", {{true, true, 10}, {false, true, 20}, {true, false, 0}}};
  const rl::RolloutGroup back = io::group_from_json(io::to_json(g));
  EXPECT_EQ(back.problem_id, "p7");
  ASSERT_EQ(back.responses.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.responses[i].correct, g.responses[i].correct);
    EXPECT_EQ(back.responses[i].format_ok, g.responses[i].format_ok);
    EXPECT_EQ(back.responses[i].lpl, g.responses[i].lpl);
  }
  // Integer ids are accepted and kept as their decimal text.
  const auto line = io::scored_from_json(
      json::parse(R"({"problem_id": 12, "correct": true, "format_ok": false, "lpl": 5})"));
  EXPECT_EQ(line.problem_id, "12");
  EXPECT_TRUE(line.response.correct);
  EXPECT_FALSE(line.response.format_ok);
  EXPECT_EQ(line.response.lpl, 5u);

  EXPECT_THROW(io::scored_from_json(json::parse(
                   R"({"problem_id": "a", "correct": 1, "format_ok": true, "lpl": 5})")),
               SchemaError);
  EXPECT_THROW(io::scored_from_json(json::parse(
                   R"({"problem_id": "a", "correct": true, "format_ok": true, "lpl": -5})")),
               SchemaError);
  EXPECT_THROW(io::scored_from_json(json::parse(
                   R"({"problem_id": [], "correct": true, "format_ok": true, "lpl": 5})")),
               SchemaError);
  EXPECT_THROW(io::group_from_json(json::parse(R"({"problem_id": "a", "responses": {}})")),
               SchemaError);
}

TEST(JsonIo, RewardConfig) {
  rl::RewardConfig cfg;
  cfg.c_l = 0.25;
  cfg.l_cutoff = 100;
  cfg.l_max = 300;
  EXPECT_EQ(io::reward_config_from_json(io::to_json(cfg)), cfg);
  EXPECT_THROW(io::reward_config_from_json(json{{"L_cutoff", 10}, {"L_max", 5}}), ConfigError);
}

TEST(JsonIo, EvalRecordRoundTrip) {
  eval::EvalRecord r{"q", {{"42", true, 100}, {"41", false, 80}}};
  const eval::EvalRecord back = io::record_from_json(io::to_json(r));
  EXPECT_EQ(back.problem_id, "q");
  ASSERT_EQ(back.responses.size(), 2u);
  EXPECT_EQ(back.responses[1].answer, "41");
  EXPECT_FALSE(back.responses[1].correct);
  EXPECT_EQ(back.responses[0].lpl, 100u);
}

TEST(JsonIo, ResultsRoundTripAndValidation) {
  const eval::ResultsTable t =
      io::results_from_json(io::read_json_file(DCCOT_TEST_DATA_DIR "/published_results.json"));
  EXPECT_EQ(t.benchmarks.size(), 6u);
  EXPECT_EQ(t.methods.size(), 8u);
  EXPECT_EQ(t.comparisons.size(), 3u);
  const eval::ResultsTable back = io::results_from_json(io::to_json(t));
  EXPECT_EQ(back.benchmarks, t.benchmarks);
  ASSERT_EQ(back.methods.size(), t.methods.size());
  EXPECT_EQ(back.method("DSR-32K").results.at("HMMT").lpl, 10685);
  EXPECT_THROW(io::results_from_json(json::parse(
                   R"({"benchmarks": [], "methods": [], "comparisons": [{"method": "a", "baseline": "b"}]})")),
               Error);
}

TEST(JsonIo, Files) {
  const std::string path = temp_path("lines.jsonl");
  io::write_text_file(path, "{\"a\": 1}\n\n  \n{\"a\": 2}\n");
  const auto lines = io::read_jsonl_file(path);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[1]["a"], 2);

  io::write_text_file(path, "{\"a\": 1}\n{oops\n");
  try {
    io::read_jsonl_file(path);
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find(path + ":2"), std::string::npos);
  }
  std::remove(path.c_str());
  EXPECT_THROW(io::read_text_file(temp_path("missing")), Error);
}
