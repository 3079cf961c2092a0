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

// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "dccot/eval.hpp"
#include "dccot/json_io.hpp"
#include "dccot/orchestrator.hpp"
#include "dccot/report.hpp"
#include "dccot/rlmath.hpp"
#include "dccot/trainseq.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace dccot;
using dccot::io::json;
using dccot::support::Rng;

namespace {

struct Failed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failed(what);
}

template <typename A, typename B>
void require_eq(const A& a, const B& b, const std::string& what) {
  if (!(a == b)) {
    std::ostringstream ss;
    ss << what << ": got " << a << ", want " << b;
    throw Failed(ss.str());
  }
}

void require_near(double got, double want, double tol, const std::string& what) {
  if (!(std::abs(got - want) <= tol)) {
    std::ostringstream ss;
    ss.precision(17);
    ss << what << ": got " << got << ", want " << want << " +- " << tol;
    throw Failed(ss.str());
  }
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

// Runs one criterion; the body returns a short detail string on success.
void criterion(const std::string& name, const std::function<std::string()>& body) {
  std::string line;
  try {
    const std::string detail = body();
    line = "PASS " + name + (detail.empty() ? "" : " (" + detail + ")");
  } catch (const std::exception& e) {
    ++failures;
    line = "FAIL " + name + ": " + e.what();
  }
  std::cout << line << std::endl;
}

const TagConfig kTags;
const auto kWs = std::make_shared<WhitespaceCounter>();

// ---------------------------------------------------------------- transcripts

std::string round_trip() {
  Rng rng(1001);
  const auto t0 = Clock::now();
  for (int n = 0; n < 10000; ++n) {
    const Transcript t = support::random_transcript(rng, *kWs);
    const Transcript back = parse_transcript(render_transcript(t, kTags), kTags, *kWs, t.prompt);
    require(back == t, "transcript " + std::to_string(n) + " did not survive render/parse");
  }
  const double s = seconds_since(t0);
  require(s < 10.0, "took " + std::to_string(s) + " s");
  return "10000 transcripts in " + std::to_string(s) + " s";
}

std::string lpl_oracle() {
  Rng rng(1002);
  for (int n = 0; n < 1000; ++n) {
    const Transcript t = support::random_transcript(rng, *kWs);
    require_eq(longest_path_length(t), support::dag_longest_path(t),
               "transcript " + std::to_string(n));
  }
  return "1000 transcripts";
}

// ---------------------------------------------------------------- orchestrator

std::string orchestrator_conformance() {
  // Hand episode: director 3 tokens, workers 5/2/4, director 1 token.
  const std::string s1 = "Q a b c<spawn_workers>";
  ScriptedBackend hand({{MatchKind::Exact, "Q ", "a b c<spawn_workers>", false},
                        {MatchKind::Exact, s1 + "<worker_1>", "1 2 3 4 5</worker_1>", false},
                        {MatchKind::Exact, s1 + "<worker_2>", "1 2</worker_2>", false},
                        {MatchKind::Exact, s1 + "<worker_3>", "1 2 3 4</worker_3>", false},
                        {MatchKind::Prefix, s1, "z", true}},
                       kWs);
  OrchestratorConfig cfg;
  cfg.budget = 100;
  cfg.num_workers = 3;
  const Episode ep = run_episode(hand, "Q ", cfg, *kWs);
  require_eq(longest_path_length(ep.transcript), 9u, "hand episode lpl");
  require_eq(ep.trace.calls.size(), 5u, "hand episode calls");
  require_eq(ep.trace.calls[0].limit, 100u, "director limit");
  for (std::size_t i = 1; i <= 3; ++i) require_eq(ep.trace.calls[i].limit, 97u, "worker limit");
  require_eq(ep.trace.calls[4].limit, 92u, "second director limit");

  // Every worker limit equals the budget left after the directors and
  // longest workers before it, on random budget-bound episodes.
  Rng rng(1003);
  std::size_t episodes = 0;
  for (int n = 0; n < 500; ++n) {
    const std::size_t budget = support::uniform(rng, 1, 40);
    const std::size_t k = support::uniform(rng, 1, 4);
    const std::string director =
        support::words(support::uniform(rng, 0, 5), "d") + "<spawn_workers>";
    std::vector<support::SuffixBackend::Rule> rules;
    for (std::size_t i = 1; i <= k; ++i) {
      std::string body = support::words(support::uniform(rng, 0, 10), "w");
      if (support::coin(rng)) body += kTags.worker_close(i);
      rules.push_back({kTags.worker_open(i), body});
    }
    rules.push_back({"P", director});
    rules.push_back({kTags.spawn_close,
                     support::coin(rng, 0.3) ? std::string("end") : director,
                     support::coin(rng, 0.3)});
    support::SuffixBackend b(rules, kWs);
    cfg.budget = budget;
    cfg.num_workers = k;
    const Episode e = run_episode(b, "P", cfg, *kWs);
    require(longest_path_length(e.transcript) <= budget, "lpl over budget");
    std::size_t remaining = budget;
    std::size_t longest = 0;
    std::size_t round = 0;
    for (const TraceCall& c : e.trace.calls) {
      if (c.role == Role::Director) {
        if (c.round > 0) {
          require_eq(c.round, round, "director round");
          remaining -= longest;
        }
        require_eq(c.limit, remaining, "director limit");
        remaining -= c.result.token_count;
        longest = 0;
        ++round;
      } else {
        require_eq(c.limit, remaining, "worker limit");
        longest = std::max(longest, c.result.token_count);
      }
    }
    ++episodes;
  }
  return "hand episode lpl 9, " + std::to_string(episodes) + " budgeted episodes";
}

// ---------------------------------------------------------------- training sequences

std::string replay_equivalence() {
  Rng rng(1004);
  std::size_t checked = 0;
  std::size_t two_round = 0;
  for (int n = 0; n < 150; ++n) {
    const std::size_t rounds = n < 50 ? 2 : support::uniform(rng, 0, 3);
    const std::size_t k = support::uniform(rng, 1, 5);
    const Episode ep = support::random_episode(rng, rounds, k, kWs);
    const auto seq = train::build_training_sequence(ep.transcript, kTags, *kWs);
    const support::ReplayReport r = support::replay_check(ep, seq, *kWs);
    require(r.mismatch.empty(), "episode " + std::to_string(n) + ": " + r.mismatch);
    checked += r.checked;
    two_round += rounds == 2;
  }
  require(two_round >= 50, "too few two-round episodes");
  return "150 episodes, " + std::to_string(two_round) + " with 2 rounds, " +
         std::to_string(checked) + " tokens";
}

std::string position_ids() {
  const support::TagElidingCounter elide{kTags};
  const std::vector<std::vector<std::string>> workers = {
      {support::words(3, "a"), support::words(5, "b"), support::words(2, "c")}};
  const Transcript t = make_transcript("p1 p2 p3 p4", {support::words(2, "s"), "t"}, workers,
                                       Termination::BudgetExhausted, elide);
  const auto seq = train::build_training_sequence(t, kTags, elide);
  auto start = [&](const std::string& name) {
    for (const train::Block& b : seq.layout.blocks)
      if (b.name == name) return seq.position_ids.at(b.start);
    throw Failed("no block " + name);
  };
  for (const char* w : {"W1A", "W2A", "W3A"}) require_eq(start(w), 6u, std::string(w) + " start");
  require_eq(start("W2B"), 9u, "W2B start");
  require_eq(start("S2"), 16u, "S2 start");
  return "";
}

// ---------------------------------------------------------------- rewards and objectives

std::string reward_arithmetic() {
  const rl::RewardConfig std_cfg{0.1, 2000, 7500, rl::RewardMode::Standard};
  const rl::RewardConfig hlp{0.9, 2000, 12000, rl::RewardMode::Hlp};
  require_near(rl::length_penalty(4750, std_cfg), 0.05, 1e-12, "penalty at 4750");
  require_near(rl::reward_standard({true, true, 4750}, std_cfg), 0.95, 1e-12, "standard reward");
  Rng rng(1005);
  for (int n = 0; n < 10000; ++n) {
    const rl::ScoredResponse r{support::coin(rng), support::coin(rng),
                               support::uniform(rng, 0, hlp.l_max)};
    const double v = rl::reward_hlp(r, hlp);
    if (r.correct && r.format_ok) {
      require(v >= 0.1 - 1e-12, "correct and formatted below 0.1");
    } else if (r.correct) {
      require_eq(v, 0.01, "correct only");
    } else {
      require_eq(v, 0.0, "incorrect");
    }
  }
  return "";
}

std::string advantages() {
  require(rl::group_advantages(std::vector<double>{1, 1, 0, 0}) ==
              std::vector<double>{1, 1, -1, -1},
          "[1,1,0,0]");
  Rng rng(1006);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  for (int n = 0; n < 10000; ++n) {
    std::vector<double> r(support::uniform(rng, 2, 16));
    for (double& x : r) x = support::coin(rng, 0.3) ? std::round(val(rng)) : val(rng);
    if (std::all_of(r.begin(), r.end(), [&](double x) { return x == r[0]; })) r[0] += 0.5;
    const auto a = rl::group_advantages(r);
    const double g = static_cast<double>(a.size());
    const double mean = std::accumulate(a.begin(), a.end(), 0.0) / g;
    double ss = 0;
    for (double x : a) ss += (x - mean) * (x - mean);
    require(std::abs(mean) < 1e-9, "mean");
    require(std::abs(std::sqrt(ss / g) - 1.0) < 1e-9, "std");
  }
  return "10000 groups";
}

std::string objective_identities() {
  Rng rng(1007);
  std::uniform_real_distribution<double> lp(-5.0, -0.01);
  std::uniform_real_distribution<double> adv(-2.0, 2.0);
  std::uniform_real_distribution<double> ratio(0.8, 1.28);
  for (int n = 0; n < 500; ++n) {
    const std::size_t g = support::uniform(rng, 1, 6);
    std::vector<rl::TokenLogProbs> on, off;
    std::vector<double> a;
    double reinforce = 0, unclipped = 0;
    std::size_t tokens = 0;
    for (std::size_t i = 0; i < g; ++i) {
      a.push_back(adv(rng));
      rl::TokenLogProbs x, y;
      for (std::size_t t = support::uniform(rng, 1, 20); t > 0; --t) {
        const double cur = lp(rng);
        x.current.push_back(cur);
        x.old.push_back(cur);
        x.ref.push_back(cur);
        const double r = ratio(rng);
        y.current.push_back(cur);
        y.old.push_back(cur - std::log(r));
        y.ref.push_back(cur);
        reinforce += a.back() * cur;
        unclipped += std::exp(y.current.back() - y.old.back()) * a.back();
        ++tokens;
      }
      on.push_back(std::move(x));
      off.push_back(std::move(y));
    }
    const double T = static_cast<double>(tokens);
    require_near(rl::cispo_objective(on, a, {5.0, 0.0}), reinforce / T, 1e-12, "cispo on-policy");
    require_near(rl::dapo_objective(off, a, {0.2, 0.28, 0.0}), unclipped / T, 1e-12,
                 "dapo unclipped");
  }
  require_eq(rl::kl_estimate(-1.7, -1.7), 0.0, "kl at u=1");
  require_near(rl::kl_estimate(std::log(2.0) - 1.0, -1.0), 2.0 - std::log(2.0) - 1.0, 1e-12,
               "kl at u=2");
  return "";
}

std::string filter_truth_table() {
  std::size_t easy = 0;
  for (unsigned bits = 0; bits < 256; ++bits) {
    rl::RolloutGroup g;
    std::size_t correct = 0;
    bool any_good = false;
    for (unsigned i = 0; i < 4; ++i) {
      const bool c = (bits >> (2 * i)) & 1u;
      const bool f = (bits >> (2 * i + 1)) & 1u;
      g.responses.push_back({c, f, 100});
      correct += c;
      any_good = any_good || (c && f);
    }
    require_eq(rl::filter_include_easy(g), any_good, "include_easy " + std::to_string(bits));
    require_eq(rl::filter_remove_easy(g), correct != 0 && correct != 4,
               "remove_easy " + std::to_string(bits));
    if (correct == 4 && any_good) {
      require(rl::filter_include_easy(g) && !rl::filter_remove_easy(g),
              "all-correct group " + std::to_string(bits));
      ++easy;
    }
  }
  return "256 combinations, " + std::to_string(easy) + " all-correct formatted groups";
}

// ---------------------------------------------------------------- evaluation

std::string maj3_oracle() {
  Rng rng(1008);
  const eval::ExactMatchOracle exact;
  for (int n = 0; n < 2000; ++n) {
    eval::EvalRecord rec{"r", {}};
    const std::size_t answers = support::uniform(rng, 1, 5);
    std::vector<bool> truth(answers);
    for (std::size_t a = 0; a < answers; ++a) truth[a] = support::coin(rng, 0.4);
    for (int i = 0; i < 5; ++i) {
      const std::size_t a = support::uniform(rng, 0, answers - 1);
      rec.responses.push_back({"x" + std::to_string(a), truth[a], support::uniform(rng, 1, 999)});
    }
    // Ten subsets, each voting in sixths.
    std::uint64_t sixths = 0;
    const auto& r = rec.responses;
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j)
        for (int k = j + 1; k < 5; ++k) {
          const std::uint64_t ci = r[i].correct, cj = r[j].correct, ck = r[k].correct;
          const bool ij = r[i].answer == r[j].answer, ik = r[i].answer == r[k].answer,
                     jk = r[j].answer == r[k].answer;
          if (ij && ik) sixths += 2 * (ci + cj + ck);
          else if (ij) sixths += 3 * (ci + cj);
          else if (ik) sixths += 3 * (ci + ck);
          else if (jk) sixths += 3 * (cj + ck);
          else sixths += 2 * (ci + cj + ck);
        }
    const auto classes = eval::answer_classes(rec, exact);
    std::array<bool, 5> flags{};
    for (std::size_t i = 0; i < 5; ++i) flags[i] = r[i].correct;
    const eval::Fraction f = eval::maj3_accuracy(classes, flags);
    require_eq(f.num * 60, sixths * f.den, "record " + std::to_string(n));
  }
  const eval::EvalRecord aab{"p", {{"A", true, 1}, {"A", true, 1}, {"B", false, 1}}};
  require_eq(eval::maj_at_3(aab, exact).accuracy, 1.0, "{A,A,B}");
  return "2000 records at N=5";
}

std::string published_deltas() {
  const auto t0 = Clock::now();
  const auto table =
      io::results_from_json(io::read_json_file(DCCOT_TEST_DATA_DIR "/published_results.json"));
  const auto deltas = eval::compute_deltas(table);
  const std::string text = eval::render_delta_table(table, deltas);
  const double s = seconds_since(t0);
  require_eq(deltas.at(0).method, std::string("DC-CoT"), "first comparison");
  require_eq(deltas.at(0).baseline, std::string("DSR-32K"), "first baseline");
  const auto& aime = deltas.at(0).cells.at(0);
  require(aime.has_value(), "AIME cell missing");
  require_near(aime->lpl_percent, -37.4, 0.05, "AIME LPL change");
  require_near(aime->acc_points, 1.67, 0.005, "AIME accuracy change");
  require(text.find("-37.4%") != std::string::npos && text.find("+1.67") != std::string::npos,
          "rendered table");
  require(s < 1.0, "took " + std::to_string(s) + " s");
  return std::to_string(aime->lpl_percent) + "%, " + std::to_string(aime->acc_points) + " points";
}

// ---------------------------------------------------------------- CLI chain

#ifdef DCCOT_CLI_PATH
int run(const std::string& args) {
  const std::string cmd = std::string(DCCOT_CLI_PATH) + " " + args + " 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string cli_chain() {
  const auto t0 = Clock::now();
  std::random_device rd;
  const fs::path dir = fs::temp_directory_path() / ("dccot_acceptance_" + std::to_string(rd()));
  fs::create_directories(dir);
  struct Cleanup {
    fs::path p;
    ~Cleanup() { fs::remove_all(p); }
  } cleanup{dir};
  auto path = [&](const std::string& name) { return (dir / name).string(); };

  // 20 problems, 4 rollouts each, with 3 workers per round.
  constexpr std::size_t kProblems = 20, kRollouts = 4, kWorkers = 3;
  Rng rng(1009);
  std::string prompts;
  json rules = json::array();
  std::vector<std::string> answers;
  std::vector<bool> correct;
  for (std::size_t p = 0; p < kProblems; ++p) {
    for (std::size_t r = 0; r < kRollouts; ++r) {
      const std::size_t rounds = support::uniform(rng, 0, 2);
      std::vector<std::string> directors;
      std::vector<std::vector<std::string>> workers(rounds);
      for (std::size_t j = 0; j < rounds; ++j) directors.push_back(support::words(support::uniform(rng, 1, 6), "plan"));
      for (auto& w : workers)
        for (std::size_t i = 0; i < kWorkers; ++i)
          w.push_back(support::words(support::uniform(rng, 0, 8), "step"));
      const std::string answer = std::to_string(support::uniform(rng, 1, 3));
      directors.push_back("answer " + answer);
      answers.push_back(answer);
      correct.push_back(answer == "1");
      const std::string prompt =
          "Problem " + std::to_string(p) + " rollout " + std::to_string(r) + "\n";
      const Transcript t =
          make_transcript(prompt, directors, workers, Termination::Eos, *kWs);
      for (const ScriptRule& rule : support::script_for(t, kTags)) {
        rules.push_back({{"match", "exact"},
                         {"pattern", rule.pattern},
                         {"continuation", rule.continuation},
                         {"eos", rule.emits_eos}});
      }
      prompts += json{{"problem_id", "p" + std::to_string(p)}, {"prompt", prompt}}.dump() + "\n";
    }
  }
  io::write_text_file(path("prompts.jsonl"), prompts);
  io::write_text_file(path("script.json"), json{{"rules", rules}}.dump());

  require_eq(run("infer --backend scripted --script " + path("script.json") + " --prompts " +
                 path("prompts.jsonl") + " --workers 3 --budget 1000 --parallel-episodes 4 --out " +
                 path("transcripts.jsonl")),
             0, "infer exit status");
  const auto transcripts = io::read_jsonl_file(path("transcripts.jsonl"));
  require_eq(transcripts.size(), kProblems * kRollouts, "transcript count");
  std::string scored;
  std::string records;
  for (std::size_t i = 0; i < transcripts.size(); ++i) {
    const Transcript t = io::transcript_from_json(transcripts[i], *kWs);
    const std::string id = transcripts[i].at("problem_id").get<std::string>();
    require_eq(id, "p" + std::to_string(i / kRollouts), "problem order");
    // Stands in for an external grader.
    scored += json{{"problem_id", id},
                   {"correct", static_cast<bool>(correct[i])},
                   {"format_ok", validate_format(t, kTags).format_ok},
                   {"lpl", longest_path_length(t)}}
                  .dump() +
              "\n";
    if (i % kRollouts == 0) records += "{\"problem_id\": \"" + id + "\", \"responses\": [";
    records += json{{"answer", answers[i]},
                    {"correct", static_cast<bool>(correct[i])},
                    {"lpl", longest_path_length(t)}}
                   .dump();
    records += i % kRollouts == kRollouts - 1 ? "]}\n" : ", ";
  }
  io::write_text_file(path("scored.jsonl"), scored);
  io::write_text_file(path("records.jsonl"), records);

  require_eq(run("batch --transcripts " + path("transcripts.jsonl") + " --out " + path("batch")),
             0, "batch exit status");
  const auto index = io::read_jsonl_file(path("batch/index.jsonl"));
  require_eq(index.size(), transcripts.size(), "batch index size");
  for (const json& row : index) {
    const json seq = io::read_json_file(path("batch/" + row.at("file").get<std::string>()));
    const std::size_t n = seq.at("tokens").size();
    require(n > 0 && seq.at("position_ids").size() == n && seq.at("loss_mask").size() == n &&
                seq.at("length") == n,
            "sequence arrays disagree in " + row.at("file").get<std::string>());
  }

  require_eq(run("reward --scored " + path("scored.jsonl") + " --preset stage1 --out " +
                 path("rewards.jsonl")),
             0, "reward exit status");
  const auto rewards = io::read_jsonl_file(path("rewards.jsonl"));
  require_eq(rewards.size(), transcripts.size(), "reward count");
  for (const json& r : rewards) {
    const double v = r.at("reward").get<double>();
    require(v >= 0.0 && v <= 1.0 && r.at("truncated").is_boolean(), "reward row " + r.dump());
  }

  require_eq(run("advantages --groups " + path("rewards.jsonl") + " --out " + path("adv.jsonl")),
             0, "advantages exit status");
  const auto adv = io::read_jsonl_file(path("adv.jsonl"));
  require_eq(adv.size(), kProblems, "advantage groups");
  for (const json& a : adv) {
    require(a.at("advantages").is_null() ? a.at("degenerate").get<bool>()
                                         : a.at("advantages").size() == kRollouts,
            "advantage row " + a.dump());
  }

  require_eq(run("eval --records " + path("records.jsonl") + " --mode maj3 --out " +
                 path("eval.json")),
             0, "eval exit status");
  const json ev = io::read_json_file(path("eval.json"));
  require_eq(ev.at("problems").get<std::size_t>(), kProblems, "eval problems");
  const double acc = ev.at("accuracy").get<double>();
  require(acc >= 0.0 && acc <= 1.0 && ev.at("lpl").get<double>() > 0.0, "eval summary");

  const double s = seconds_since(t0);
  require(s < 30.0, "took " + std::to_string(s) + " s");
  return std::to_string(kProblems) + " problems x " + std::to_string(kRollouts) +
         " rollouts in " + std::to_string(s) + " s";
}
#endif

}  // namespace

int main() {
  criterion("parser round-trip", round_trip);
  criterion("longest path matches DAG oracle", lpl_oracle);
  criterion("orchestrator budget and limits", orchestrator_conformance);
  criterion("training mask replays inference context", replay_equivalence);
  criterion("position ID rule", position_ids);
  criterion("reward arithmetic", reward_arithmetic);
  criterion("advantage normalization", advantages);
  criterion("objective identities", objective_identities);
  criterion("filter truth table", filter_truth_table);
  criterion("maj@3 closed form", maj3_oracle);
  criterion("published delta reproduction", published_deltas);
#ifdef DCCOT_CLI_PATH
  criterion("CLI chain", cli_chain);
#else
  std::cout << "FAIL CLI chain: built without the CLI\n";
  ++failures;
#endif
  return failures;
}
