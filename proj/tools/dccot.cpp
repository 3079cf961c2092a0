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

// dccot: command-line front end for the director/worker reasoning toolkit.

#include <atomic>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "dccot/eval.hpp"
#include "dccot/http_backend.hpp"
#include "dccot/json_io.hpp"
#include "dccot/orchestrator.hpp"
#include "dccot/presets.hpp"
#include "dccot/prompts.hpp"
#include "dccot/report.hpp"
#include "dccot/rlmath.hpp"
#include "dccot/scripted_backend.hpp"
#include "dccot/trainseq.hpp"
#include "dccot/transcript.hpp"

namespace fs = std::filesystem;
using dccot::io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBudget = 2;

class UsageError : public dccot::Error {
 public:
  using dccot::Error::Error;
};

// Flags shared by every subcommand, then the config file they override.
struct Global {
  std::string config_path;
  std::string counter;
  std::string tags_path = "default";
};

struct Settings {
  json config = json::object();
  dccot::TagConfig tags;
  std::shared_ptr<const dccot::TokenCounter> counter;
};

Settings resolve(const Global& g) {
  Settings s;
  if (!g.config_path.empty()) s.config = dccot::io::read_json_file(g.config_path);
  if (!s.config.is_object()) throw UsageError("--config must hold a JSON object");

  if (g.tags_path != "default") {
    s.tags = dccot::io::tags_from_json(dccot::io::read_json_file(g.tags_path));
  } else if (s.config.contains("tags")) {
    s.tags = dccot::io::tags_from_json(s.config["tags"]);
  }
  s.tags.validate();

  std::string counter = g.counter;
  if (counter.empty()) counter = s.config.value("counter", std::string("whitespace"));
  s.counter = dccot::make_token_counter(counter);
  return s;
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  return dccot::io::read_text_file(path);
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    dccot::io::write_text_file(out, text);
  }
}

std::string doc(const json& j) { return j.dump(2) + "\n"; }

std::string lines(const std::vector<json>& rows) {
  std::string out;
  for (const json& r : rows) out += r.dump() + "\n";
  return out;
}

std::string problem_id(const json& j, std::size_t line) {
  if (j.contains("problem_id")) {
    const json& v = j["problem_id"];
    return v.is_string() ? v.get<std::string>() : v.dump();
  }
  return std::to_string(line);
}

// Groups JSONL rows by problem_id, keeping first-appearance order.
std::vector<std::pair<std::string, std::vector<json>>> group_rows(const std::vector<json>& rows) {
  std::vector<std::pair<std::string, std::vector<json>>> groups;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string id = problem_id(rows[i], i);
    auto [it, fresh] = index.try_emplace(id, groups.size());
    if (fresh) groups.push_back({id, {}});
    groups[it->second].second.push_back(rows[i]);
  }
  return groups;
}

// ---------------------------------------------------------------- infer

struct InferOptions {
  std::string prompt_file;
  std::string prompt;
  std::string prompts;
  std::string template_name;
  std::string backend;
  std::string script;
  std::string backend_config;
  std::size_t workers = 3;
  std::size_t budget = 12000;
  std::size_t max_rounds = 0;
  std::string out;
  std::string trace;
  std::size_t parallel = 1;
  CLI::Option* workers_opt = nullptr;
  CLI::Option* budget_opt = nullptr;
  CLI::Option* max_rounds_opt = nullptr;
};

std::unique_ptr<dccot::GenerationBackend> make_backend(const InferOptions& o, const Settings& s) {
  std::string kind = o.backend;
  if (kind.empty()) kind = s.config.value("backend", std::string("scripted"));
  if (kind == "scripted") {
    std::string script = o.script;
    if (script.empty()) script = s.config.value("script", std::string());
    if (script.empty()) throw UsageError("the scripted backend needs --script FILE");
    return std::make_unique<dccot::ScriptedBackend>(
        dccot::io::script_from_json(dccot::io::read_json_file(script)), s.counter);
  }
  if (kind == "http") {
    json cfg = s.config.value("http", json::object());
    if (!o.backend_config.empty()) cfg = dccot::io::read_json_file(o.backend_config);
    dccot::HttpBackendConfig http = dccot::io::http_config_from_json(cfg);
    http.apply_environment();
    http.validate();
    return std::make_unique<dccot::HttpBackend>(http, s.counter);
  }
  throw UsageError("--backend must be scripted or http");
}

int run_infer(const Global& g, const InferOptions& o) {
  const Settings s = resolve(g);
  dccot::OrchestratorConfig cfg;
  cfg.tags = s.tags;
  cfg.num_workers = o.workers_opt->count() ? o.workers : s.config.value("workers", o.workers);
  cfg.budget = o.budget_opt->count() ? o.budget : s.config.value("budget", o.budget);
  if (o.max_rounds_opt->count()) {
    cfg.max_rounds = o.max_rounds;
  } else if (s.config.contains("max_rounds")) {
    cfg.max_rounds = s.config["max_rounds"].get<std::size_t>();
  }
  cfg.validate();

  std::string tmpl_name = o.template_name;
  if (tmpl_name.empty()) tmpl_name = s.config.value("template", std::string());
  const auto backend = make_backend(o, s);

  const int sources = !o.prompt_file.empty() + !o.prompt.empty() + !o.prompts.empty();
  if (sources != 1) throw UsageError("give exactly one of --prompt-file, --prompt, --prompts");

  if (o.prompts.empty()) {
    std::string prompt = o.prompt_file.empty() ? o.prompt : read_input(o.prompt_file);
    if (!tmpl_name.empty()) {
      prompt = dccot::prompts::apply_template(dccot::prompts::find_template(tmpl_name), prompt);
    }
    const dccot::Episode ep = dccot::run_episode(*backend, prompt, cfg, *s.counter);
    emit(o.out, doc(dccot::io::to_json(ep.transcript)));
    if (!o.trace.empty()) emit(o.trace, doc(dccot::io::to_json(ep.trace)));
    return ep.transcript.terminated == dccot::Termination::Eos ? kExitOk : kExitBudget;
  }

  // Batch: one episode per JSONL line, {"problem_id", "prompt"} or {"problem_id", "question"}.
  const std::vector<json> rows = dccot::io::read_jsonl_file(o.prompts);
  const std::string_view tmpl =
      dccot::prompts::find_template(tmpl_name.empty() ? "parallel" : tmpl_name);
  std::vector<std::string> prompts;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].contains("prompt")) {
      prompts.push_back(rows[i]["prompt"].get<std::string>());
    } else if (rows[i].contains("question")) {
      prompts.push_back(
          dccot::prompts::apply_template(tmpl, rows[i]["question"].get<std::string>()));
    } else {
      throw dccot::io::SchemaError(o.prompts + ":" + std::to_string(i + 1) +
                                   ": needs \"prompt\" or \"question\"");
    }
  }

  std::vector<std::optional<dccot::Episode>> episodes(rows.size());
  std::vector<std::exception_ptr> errors(rows.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      try {
        episodes[i] = dccot::run_episode(*backend, prompts[i], cfg, *s.counter);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t threads = std::max<std::size_t>(1, std::min(o.parallel, rows.size()));
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const std::exception& e) {
        throw dccot::Error("episode " + problem_id(rows[i], i) + ": " + e.what());
      }
    }
  }

  std::vector<json> out;
  std::vector<json> traces;
  bool all_eos = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    json t = dccot::io::to_json(episodes[i]->transcript);
    t["problem_id"] = problem_id(rows[i], i);
    out.push_back(std::move(t));
    json tr = dccot::io::to_json(episodes[i]->trace);
    tr["problem_id"] = problem_id(rows[i], i);
    traces.push_back(std::move(tr));
    all_eos = all_eos && episodes[i]->transcript.terminated == dccot::Termination::Eos;
  }
  emit(o.out, lines(out));
  if (!o.trace.empty()) emit(o.trace, lines(traces));
  return all_eos ? kExitOk : kExitBudget;
}

// ---------------------------------------------------------------- transcripts

dccot::Transcript load_transcript(const std::string& path, const Settings& s) {
  return dccot::io::transcript_from_json(json::parse(read_input(path)), *s.counter);
}

json metrics_json(const dccot::Transcript& t) {
  const std::size_t lpl = dccot::longest_path_length(t);
  json j = {{"lpl", lpl}, {"total", dccot::total_tokens(t)}};
  j["dp"] = lpl == 0 ? json(nullptr) : json(dccot::degree_of_parallelism(t));
  return j;
}

// ---------------------------------------------------------------- rewards

dccot::rl::RewardConfig reward_config(const std::string& preset, const std::string& file) {
  if (!preset.empty() && !file.empty()) throw UsageError("give --preset or --reward-config, not both");
  if (!file.empty()) return dccot::io::reward_config_from_json(dccot::io::read_json_file(file));
  return dccot::rl::find_preset(preset.empty() ? "stage1" : preset).reward;
}

// A group line holds "responses"; anything else is one scored response.
dccot::rl::RolloutGroup to_group(const std::string& id, const std::vector<json>& rows) {
  dccot::rl::RolloutGroup g;
  g.problem_id = id;
  for (const json& r : rows) {
    if (r.contains("responses")) {
      for (const auto& x : dccot::io::group_from_json(r).responses) g.responses.push_back(x);
    } else {
      g.responses.push_back(dccot::io::scored_from_json(r).response);
    }
  }
  return g;
}

std::vector<double> rewards_of(const std::vector<json>& rows) {
  std::vector<double> out;
  for (const json& r : rows) {
    if (r.contains("rewards")) {
      for (const json& x : r["rewards"]) out.push_back(x.get<double>());
    } else if (r.contains("reward")) {
      out.push_back(r["reward"].get<double>());
    } else {
      throw dccot::io::SchemaError("group rows need \"rewards\" or \"reward\"");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Director/worker parallel reasoning toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dccot 0.1.0");

  Global g;
  app.add_option("--config", g.config_path, "JSON config file (tags, counter, backend, http, ...)")
      ->check(CLI::ExistingFile);
  app.add_option("--counter", g.counter, "Token counter: whitespace, chars or cmd:<command>");
  app.add_option("--tags", g.tags_path, "Tag set: default or a JSON file")->capture_default_str();

  std::function<int()> action;

  // infer
  InferOptions io;
  auto* infer = app.add_subcommand("infer", "Run director/worker episodes against a backend");
  infer->add_option("--prompt-file", io.prompt_file, "File holding one prompt (- for stdin)");
  infer->add_option("--prompt", io.prompt, "Prompt text");
  infer->add_option("--prompts", io.prompts, "JSONL of {problem_id, prompt|question}")
      ->check(CLI::ExistingFile);
  infer->add_option("--template", io.template_name,
                    "Wrap the input with a prompt template: parallel, sequential, sequential_cot");
  infer->add_option("--backend", io.backend, "scripted or http");
  infer->add_option("--script", io.script, "Scripted backend rules (JSON)");
  infer->add_option("--backend-config", io.backend_config, "HTTP backend settings (JSON)");
  io.workers_opt = infer->add_option("--workers", io.workers, "Workers per round")->capture_default_str();
  io.budget_opt = infer->add_option("--budget", io.budget, "Longest-path token budget")->capture_default_str();
  io.max_rounds_opt = infer->add_option("--max-rounds", io.max_rounds, "Cap on spawn rounds");
  infer->add_option("--out", io.out, "Transcript output (default stdout)");
  infer->add_option("--trace", io.trace, "Episode trace output");
  infer->add_option("--parallel-episodes", io.parallel, "Episodes run at once with --prompts")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  infer->callback([&] { action = [&] { return run_infer(g, io); }; });

  // parse
  std::string parse_text, parse_prompt, parse_out;
  auto* parse = app.add_subcommand("parse", "Flat response text to transcript JSON");
  parse->add_option("--text", parse_text, "Response text file (- for stdin)")->required();
  parse->add_option("--prompt-file", parse_prompt, "Prompt to record in the transcript");
  parse->add_option("--out", parse_out, "Output file (default stdout)");
  parse->callback([&] {
    action = [&] {
      const Settings s = resolve(g);
      std::string prompt = parse_prompt.empty() ? "" : read_input(parse_prompt);
      const auto t = dccot::parse_transcript(read_input(parse_text), s.tags, *s.counter, prompt);
      emit(parse_out, doc(dccot::io::to_json(t)));
      return kExitOk;
    };
  });

  // render
  std::string render_in, render_out;
  auto* render = app.add_subcommand("render", "Transcript JSON to flat response text");
  render->add_option("--transcript", render_in, "Transcript JSON (- for stdin)")->required();
  render->add_option("--out", render_out, "Output file (default stdout)");
  render->callback([&] {
    action = [&] {
      const Settings s = resolve(g);
      emit(render_out, dccot::render_transcript(load_transcript(render_in, s), s.tags));
      return kExitOk;
    };
  });

  // validate
  std::string validate_text, validate_transcript, validate_out;
  auto* validate = app.add_subcommand("validate", "Check the tag format of a response");
  auto* vt = validate->add_option("--text", validate_text, "Response text file (- for stdin)");
  auto* vj = validate->add_option("--transcript", validate_transcript, "Transcript JSON");
  vt->excludes(vj);
  validate->add_option("--out", validate_out, "Output file (default stdout)");
  validate->callback([&] {
    action = [&] {
      const Settings s = resolve(g);
      dccot::FormatReport r;
      if (!validate_text.empty()) {
        r = dccot::validate_format(read_input(validate_text), s.tags);
      } else if (!validate_transcript.empty()) {
        r = dccot::validate_format(load_transcript(validate_transcript, s), s.tags);
      } else {
        throw UsageError("give --text or --transcript");
      }
      emit(validate_out, doc(dccot::io::to_json(r)));
      return kExitOk;
    };
  });

  // metrics
  std::string metrics_one, metrics_many, metrics_out;
  auto* metrics = app.add_subcommand("metrics", "Longest path length, total tokens, parallelism");
  auto* m1 = metrics->add_option("--transcript", metrics_one, "Transcript JSON (- for stdin)");
  auto* m2 = metrics->add_option("--transcripts", metrics_many, "JSONL of transcripts")
                 ->check(CLI::ExistingFile);
  m1->excludes(m2);
  metrics->add_option("--out", metrics_out, "Output file (default stdout)");
  metrics->callback([&] {
    action = [&] {
      const Settings s = resolve(g);
      if (!metrics_one.empty()) {
        emit(metrics_out, doc(metrics_json(load_transcript(metrics_one, s))));
        return kExitOk;
      }
      if (metrics_many.empty()) throw UsageError("give --transcript or --transcripts");
      const auto rows = dccot::io::read_jsonl_file(metrics_many);
      std::vector<json> out;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto t = dccot::io::transcript_from_json(rows[i], *s.counter);
        json m = metrics_json(t);
        m["problem_id"] = problem_id(rows[i], i);
        m["format_ok"] = dccot::validate_format(t, s.tags).format_ok;
        m["terminated"] = dccot::to_string(t.terminated);
        out.push_back(std::move(m));
      }
      emit(metrics_out, lines(out));
      return kExitOk;
    };
  });

  // batch
  std::string batch_in, batch_dir;
  std::size_t batch_max_len = 10000;
  auto* batch = app.add_subcommand("batch", "Build packed training sequences from transcripts");
  batch->add_option("--transcripts", batch_in, "JSONL of transcripts")
      ->required()
      ->check(CLI::ExistingFile);
  batch->add_option("--out", batch_dir, "Output directory")->required();
  batch->add_option("--max-len", batch_max_len, "Flag sequences longer than this")
      ->capture_default_str();
  batch->callback([&] {
    action = [&] {
      const Settings s = resolve(g);
      const auto rows = dccot::io::read_jsonl_file(batch_in);
      fs::create_directories(batch_dir);
      std::vector<json> index;
      std::size_t flagged = 0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto t = dccot::io::transcript_from_json(rows[i], *s.counter);
        const auto seq = dccot::train::build_training_sequence(t, s.tags, *s.counter,
                                                               {batch_max_len});
        char name[32];
        std::snprintf(name, sizeof name, "seq_%06zu.json", i);
        json j = dccot::io::to_json(seq);
        j["problem_id"] = problem_id(rows[i], i);
        dccot::io::write_text_file((fs::path(batch_dir) / name).string(), j.dump() + "\n");
        index.push_back({{"problem_id", problem_id(rows[i], i)},
                         {"file", name},
                         {"length", seq.tokens.size()},
                         {"exceeds_max_length", seq.exceeds_max_length}});
        flagged += seq.exceeds_max_length ? 1 : 0;
      }
      dccot::io::write_text_file((fs::path(batch_dir) / "index.jsonl").string(), lines(index));
      std::cerr << rows.size() << " sequences written, " << flagged << " longer than "
                << batch_max_len << " tokens\n";
      return kExitOk;
    };
  });

  // reward
  std::string reward_in, reward_preset, reward_cfg, reward_out;
  auto* reward = app.add_subcommand("reward", "Score responses under a stage's reward");
  reward->add_option("--scored", reward_in, "JSONL of {problem_id, correct, format_ok, lpl}")
      ->required()
      ->check(CLI::ExistingFile);
  reward->add_option("--preset", reward_preset, "Stage preset (default stage1)");
  reward->add_option("--reward-config", reward_cfg, "RewardConfig JSON instead of a preset");
  reward->add_option("--out", reward_out, "Output file (default stdout)");
  reward->callback([&] {
    action = [&] {
      const auto cfg = reward_config(reward_preset, reward_cfg);
      std::vector<json> out;
      std::size_t truncated = 0;
      for (const json& row : dccot::io::read_jsonl_file(reward_in)) {
        const auto line = dccot::io::scored_from_json(row);
        const auto r = dccot::rl::score(line.response, cfg);
        json o = row;
        o["reward"] = r.value;
        o["truncated"] = r.truncated;
        truncated += r.truncated ? 1 : 0;
        out.push_back(std::move(o));
      }
      emit(reward_out, lines(out));
      if (truncated > 0) std::cerr << truncated << " responses over L_max scored 0\n";
      return kExitOk;
    };
  });

  // filter
  std::string filter_in, filter_preset, filter_kind, filter_out;
  auto* filter = app.add_subcommand("filter", "Drop problem groups a stage would not train on");
  filter->add_option("--groups", filter_in, "JSONL of groups or scored responses")
      ->required()
      ->check(CLI::ExistingFile);
  filter->add_option("--preset", filter_preset, "Take the filter from this preset");
  filter->add_option("--filter", filter_kind, "include_easy or remove_easy");
  filter->add_option("--out", filter_out, "Output file (default stdout)");
  filter->callback([&] {
    action = [&] {
      if (filter_preset.empty() == filter_kind.empty()) {
        throw UsageError("give exactly one of --preset or --filter");
      }
      const auto kind = filter_kind.empty() ? dccot::rl::find_preset(filter_preset).filter
                                            : dccot::rl::parse_filter_kind(filter_kind);
      std::vector<json> out;
      std::size_t kept = 0;
      const auto groups = group_rows(dccot::io::read_jsonl_file(filter_in));
      for (const auto& [id, rows] : groups) {
        if (!dccot::rl::keep_group(to_group(id, rows), kind)) continue;
        ++kept;
        out.insert(out.end(), rows.begin(), rows.end());
      }
      emit(filter_out, lines(out));
      std::cerr << kept << " of " << groups.size() << " groups kept (" << dccot::rl::to_string(kind)
                << ")\n";
      return kExitOk;
    };
  });

  // advantages
  std::string adv_in, adv_out;
  auto* adv = app.add_subcommand("advantages", "Group-normalized advantages per problem");
  adv->add_option("--groups", adv_in,
                  "JSONL of {problem_id, rewards: [...]} or {problem_id, reward} rows")
      ->required()
      ->check(CLI::ExistingFile);
  adv->add_option("--out", adv_out, "Output file (default stdout)");
  adv->callback([&] {
    action = [&] {
      std::vector<json> out;
      for (const auto& [id, rows] : group_rows(dccot::io::read_jsonl_file(adv_in))) {
        const std::vector<double> rewards = rewards_of(rows);
        json o = {{"problem_id", id}, {"rewards", rewards}};
        try {
          o["advantages"] = dccot::rl::group_advantages(rewards);
        } catch (const dccot::rl::DegenerateGroup& e) {
          o["advantages"] = nullptr;
          o["degenerate"] = true;
        }
        out.push_back(std::move(o));
      }
      emit(adv_out, lines(out));
      return kExitOk;
    };
  });

  // eval
  std::string eval_records, eval_results, eval_mode = "pass1", eval_oracle = "exact", eval_out;
  std::string eval_method = "model", eval_bench = "records";
  std::size_t eval_k = 3, eval_threads = 0;
  dccot::eval::MajOptions maj;
  bool eval_table = false;
  auto* ev = app.add_subcommand("eval", "pass@1 / maj@k over rollouts, or a results report");
  auto* er = ev->add_option("--records", eval_records, "JSONL of {problem_id, responses}")
                 ->check(CLI::ExistingFile);
  auto* es = ev->add_option("--results", eval_results, "Results table JSON; prints deltas")
                 ->check(CLI::ExistingFile);
  er->excludes(es);
  ev->add_option("--mode", eval_mode, "pass1, maj3 or majk")
      ->check(CLI::IsMember({"pass1", "maj3", "majk"}))
      ->capture_default_str();
  ev->add_option("--k", eval_k, "Subset size for majk")->capture_default_str();
  ev->add_option("--oracle", eval_oracle, "exact or cmd:<command>")->capture_default_str();
  ev->add_option("--threads", eval_threads, "Worker threads (0 = all cores)");
  ev->add_option("--max-subsets", maj.max_subsets, "Enumerate exactly up to this many subsets")
      ->capture_default_str();
  ev->add_option("--samples", maj.samples, "Subsets sampled past the cap")->capture_default_str();
  ev->add_option("--seed", maj.seed, "Sampling seed")->capture_default_str();
  ev->add_flag("--table", eval_table, "Also print an aligned text table");
  ev->add_option("--method", eval_method, "Row label for --table")->capture_default_str();
  ev->add_option("--benchmark", eval_bench, "Column label for --table")->capture_default_str();
  ev->add_option("--out", eval_out, "JSON output file (default stdout)");
  ev->callback([&] {
    action = [&] {
      if (!eval_results.empty()) {
        const auto table = dccot::io::results_from_json(dccot::io::read_json_file(eval_results));
        const auto deltas = dccot::eval::compute_deltas(table);
        emit(eval_out, doc({{"deltas", dccot::io::to_json(deltas, table)}}));
        if (eval_table) {
          std::cerr << dccot::eval::render_results_table(table) << "\n"
                    << dccot::eval::render_delta_table(table, deltas);
        }
        return kExitOk;
      }
      if (eval_records.empty()) throw UsageError("give --records or --results");
      std::vector<dccot::eval::EvalRecord> records;
      for (const json& row : dccot::io::read_jsonl_file(eval_records)) {
        records.push_back(dccot::io::record_from_json(row));
      }
      json out;
      double acc = 0.0;
      double lpl = 0.0;
      if (eval_mode == "pass1") {
        const auto p = dccot::eval::pass_at_1(records);
        out = {{"mode", "pass1"},
               {"accuracy", p.accuracy},
               {"lpl", p.lpl},
               {"problems", p.problems},
               {"responses", p.responses}};
        acc = p.accuracy;
        lpl = p.lpl;
      } else {
        const std::size_t k = eval_mode == "maj3" ? 3 : eval_k;
        const auto oracle = dccot::eval::make_oracle(eval_oracle);
        const auto m = dccot::eval::maj_at_k_all(records, *oracle, k, maj, eval_threads);
        json per = json::array();
        for (std::size_t i = 0; i < records.size(); ++i) {
          per.push_back({{"problem_id", records[i].problem_id},
                         {"accuracy", m.per_problem[i].accuracy},
                         {"lpl", m.per_problem[i].lpl},
                         {"sampled", m.per_problem[i].sampled}});
        }
        out = {{"mode", "maj" + std::to_string(k)},
               {"k", k},
               {"oracle", oracle->name()},
               {"accuracy", m.accuracy},
               {"lpl", m.lpl},
               {"problems", m.problems},
               {"sampled", m.sampled},
               {"per_problem", per}};
        acc = m.accuracy;
        lpl = m.lpl;
      }
      emit(eval_out, doc(out));
      if (eval_table) {
        dccot::eval::ResultsTable t;
        t.benchmarks = {eval_bench};
        t.methods.push_back({eval_method, {{eval_bench, {acc * 100.0, lpl}}}});
        std::cerr << dccot::eval::render_results_table(t);
      }
      return kExitOk;
    };
  });

  // presets
  std::string presets_show;
  bool presets_list = false;
  auto* pr = app.add_subcommand("presets", "Show RL stage presets");
  auto* ps = pr->add_option("--show", presets_show, "Preset name");
  auto* pl = pr->add_flag("--list", presets_list, "All presets");
  ps->excludes(pl);
  pr->callback([&] {
    action = [&] {
      if (!presets_show.empty()) {
        emit("", doc(dccot::io::to_json(dccot::rl::find_preset(presets_show))));
        return kExitOk;
      }
      json all = json::array();
      for (const auto& p : dccot::rl::presets()) all.push_back(dccot::io::to_json(p));
      emit("", doc(all));
      return kExitOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    return action ? action() : kExitOk;
  } catch (const UsageError& e) {
    std::cerr << "dccot: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "dccot: error: " << e.what() << "\n";
    return kExitError;
  }
}
