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

#include "dccot/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "dccot/subprocess.hpp"

namespace dccot::eval {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// True when s[0] is a brace whose match is the last character.
bool wrapped_in_braces(std::string_view s) {
  if (s.size() < 2 || s.front() != '{' || s.back() != '}') return false;
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '{') ++depth;
    if (s[i] == '}' && --depth == 0) return i + 1 == s.size();
  }
  return false;
}

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n-k+i) / i without overflow: i / gcd(r, i) divides n-k+i.
    const std::uint64_t g = std::gcd(r, i);
    const std::uint64_t f = (n - k + i) / (i / g);
    r /= g;
    if (r > kMax / f) return kMax;
    r *= f;
  }
  return r;
}

double choose_real(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0.0;
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Accuracy of one subset under majority vote with ties split evenly.
double vote(std::span<const std::size_t> members, std::span<const std::size_t> classes,
            std::span<const bool> correct) {
  // Members are few; linear scans beat hashing here.
  std::vector<std::pair<std::size_t, std::pair<std::size_t, std::size_t>>> tally;
  for (std::size_t m : members) {
    auto it = std::find_if(tally.begin(), tally.end(),
                           [&](const auto& e) { return e.first == classes[m]; });
    if (it == tally.end()) {
      tally.push_back({classes[m], {0, 0}});
      it = tally.end() - 1;
    }
    ++it->second.first;
    if (correct[m]) ++it->second.second;
  }
  std::size_t top = 0;
  for (const auto& e : tally) top = std::max(top, e.second.first);
  double sum = 0.0;
  std::size_t tied = 0;
  for (const auto& e : tally) {
    if (e.second.first != top) continue;
    sum += static_cast<double>(e.second.second) / static_cast<double>(top);
    ++tied;
  }
  return sum / static_cast<double>(tied);
}

struct Flat {
  std::vector<std::size_t> classes;
  std::unique_ptr<bool[]> flags;  // std::vector<bool> has no span view
  std::vector<std::size_t> lpl;

  std::span<const bool> correct() const { return {flags.get(), classes.size()}; }
};

Flat flatten(const EvalRecord& record, const EquivalenceOracle& oracle) {
  Flat f;
  f.classes = answer_classes(record, oracle);
  f.flags = std::make_unique<bool[]>(record.responses.size());
  for (std::size_t i = 0; i < record.responses.size(); ++i) {
    f.flags[i] = record.responses[i].correct;
    f.lpl.push_back(record.responses[i].lpl);
  }
  return f;
}

}  // namespace

std::string normalize_answer(std::string_view answer) {
  std::string collapsed;
  bool pending_space = false;
  for (char c : trim(answer)) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) collapsed += ' ';
    pending_space = false;
    collapsed += c;
  }
  std::string_view s = collapsed;
  while (wrapped_in_braces(s)) s = trim(s.substr(1, s.size() - 2));
  return std::string(s);
}

bool ExactMatchOracle::equivalent(std::string_view a, std::string_view b) const {
  return normalize_answer(a) == normalize_answer(b);
}

std::optional<std::string> ExactMatchOracle::canonical_key(std::string_view a) const {
  return normalize_answer(a);
}

CommandOracle::CommandOracle(std::string command) : command_(std::move(command)) {
  if (command_.empty()) throw ConfigError("oracle command must not be empty");
}

bool CommandOracle::equivalent(std::string_view a, std::string_view b) const {
  if (a == b) return true;
  std::pair<std::string, std::string> key{std::string(a), std::string(b)};
  if (key.second < key.first) std::swap(key.first, key.second);
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const nlohmann::json input = {{"a", key.first}, {"b", key.second}};
  const std::string out = run_command(command_, input.dump());
  const std::string_view verdict = trim(out);
  bool same = false;
  if (verdict == "true" || verdict == "1") {
    same = true;
  } else if (verdict != "false" && verdict != "0") {
    throw Error("oracle command printed '" + std::string(verdict) + "', expected true or false");
  }
  std::lock_guard lock(mu_);
  cache_.emplace(std::move(key), same);
  return same;
}

std::unique_ptr<EquivalenceOracle> make_oracle(std::string_view name) {
  if (name == "exact") return std::make_unique<ExactMatchOracle>();
  if (name.starts_with("cmd:")) return std::make_unique<CommandOracle>(std::string(name.substr(4)));
  throw ConfigError("unknown oracle '" + std::string(name) + "' (use exact or cmd:<command>)");
}

std::vector<std::size_t> answer_classes(const EvalRecord& record,
                                        const EquivalenceOracle& oracle) {
  const auto& rs = record.responses;
  // Identical strings share a representative before the oracle is asked.
  std::vector<std::string> distinct;
  std::vector<std::size_t> rep(rs.size());
  {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      std::string key = oracle.canonical_key(rs[i].answer).value_or(rs[i].answer);
      auto [it, fresh] = index.try_emplace(std::move(key), distinct.size());
      if (fresh) distinct.push_back(rs[i].answer);
      rep[i] = it->second;
    }
  }
  UnionFind uf(distinct.size());
  if (!oracle.canonical_key("").has_value()) {
    for (std::size_t a = 0; a < distinct.size(); ++a) {
      for (std::size_t b = a + 1; b < distinct.size(); ++b) {
        if (uf.find(a) == uf.find(b)) continue;
        if (oracle.equivalent(distinct[a], distinct[b])) uf.unite(a, b);
      }
    }
  }
  std::vector<std::size_t> out(rs.size());
  std::unordered_map<std::size_t, std::size_t> dense;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    auto [it, fresh] = dense.try_emplace(uf.find(rep[i]), dense.size());
    out[i] = it->second;
  }
  return out;
}

Pass1 pass_at_1(std::span<const EvalRecord> records) {
  Pass1 p;
  double acc_sum = 0.0;
  double lpl_sum = 0.0;
  for (const EvalRecord& rec : records) {
    if (rec.responses.empty()) continue;
    std::size_t correct = 0;
    for (const Response& r : rec.responses) {
      correct += r.correct ? 1 : 0;
      lpl_sum += static_cast<double>(r.lpl);
    }
    acc_sum += static_cast<double>(correct) / static_cast<double>(rec.responses.size());
    ++p.problems;
    p.responses += rec.responses.size();
  }
  if (p.problems > 0) p.accuracy = acc_sum / static_cast<double>(p.problems);
  if (p.responses > 0) p.lpl = lpl_sum / static_cast<double>(p.responses);
  return p;
}

Fraction maj3_accuracy(std::span<const std::size_t> classes, std::span<const bool> correct) {
  const std::uint64_t n = classes.size();
  if (n < 3) throw TooFewResponses("maj@3 needs at least 3 responses");
  if (correct.size() != n) throw Error("classes and correctness flags differ in length");

  std::unordered_map<std::size_t, std::pair<std::uint64_t, std::uint64_t>> tally;  // size, correct
  for (std::size_t i = 0; i < n; ++i) {
    auto& t = tally[classes[i]];
    ++t.first;
    if (correct[i]) ++t.second;
  }
  std::uint64_t sum_sq = 0;
  for (const auto& [c, t] : tally) sum_sq += t.first * t.first;

  // Scaled by 6 so every subset contributes an integer.
  std::uint64_t num = 0;
  for (const auto& [c, t] : tally) {
    const auto [size, good] = t;
    const std::uint64_t rest = n - size;
    const std::uint64_t mixed_pairs = (rest * rest - (sum_sq - size * size)) / 2;
    num += 2 * good * choose(size - 1, 2);
    num += 3 * good * (size - 1) * rest;
    num += 2 * good * mixed_pairs;
  }
  std::uint64_t den = 6 * choose(n, 3);
  const std::uint64_t g = std::gcd(num, den);
  return Fraction{num / g, den / g};
}

double maj3_lpl(std::span<const std::size_t> lpls) {
  const std::uint64_t n = lpls.size();
  if (n < 3) throw TooFewResponses("maj@3 needs at least 3 responses");
  std::vector<std::size_t> sorted(lpls.begin(), lpls.end());
  std::sort(sorted.begin(), sorted.end());
  long double sum = 0.0L;
  for (std::uint64_t j = 2; j < n; ++j) {
    sum += static_cast<long double>(sorted[j]) * static_cast<long double>(choose(j, 2));
  }
  return static_cast<double>(sum / static_cast<long double>(choose(n, 3)));
}

MajResult maj_at_3(const EvalRecord& record, const EquivalenceOracle& oracle) {
  if (record.responses.size() < 3) {
    throw TooFewResponses("problem '" + record.problem_id + "' has " +
                          std::to_string(record.responses.size()) + " responses; maj@3 needs 3");
  }
  const Flat f = flatten(record, oracle);
  MajResult r;
  r.accuracy = maj3_accuracy(f.classes, f.correct()).value();
  r.lpl = maj3_lpl(f.lpl);
  r.subsets = choose(f.classes.size(), 3);
  return r;
}

MajResult maj_at_k(const EvalRecord& record, const EquivalenceOracle& oracle, std::size_t k,
                   const MajOptions& options) {
  const std::size_t n = record.responses.size();
  if (k == 0) throw ConfigError("k must be at least 1");
  if (n < k) {
    throw TooFewResponses("problem '" + record.problem_id + "' has " + std::to_string(n) +
                          " responses; maj@" + std::to_string(k) + " needs " + std::to_string(k));
  }
  const Flat f = flatten(record, oracle);
  const std::span<const bool> correct = f.correct();

  std::vector<std::size_t> members(k);
  auto score = [&](double& acc, double& lpl) {
    acc += vote(members, f.classes, correct);
    std::size_t top = 0;
    for (std::size_t m : members) top = std::max(top, f.lpl[m]);
    lpl += static_cast<double>(top);
  };

  MajResult r;
  const std::uint64_t total = choose(n, k);
  if (total <= options.max_subsets) {
    std::iota(members.begin(), members.end(), 0);
    double acc = 0.0;
    double lpl = 0.0;
    for (;;) {
      score(acc, lpl);
      ++r.subsets;
      std::size_t i = k;
      while (i > 0 && members[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) break;
      ++members[i - 1];
      for (std::size_t j = i; j < k; ++j) members[j] = members[j - 1] + 1;
    }
    r.accuracy = acc / static_cast<double>(r.subsets);
    r.lpl = lpl / static_cast<double>(r.subsets);
    return r;
  }

  r.sampled = true;
  std::mt19937_64 rng(options.seed);
  const double total_real = choose_real(n, k);
  std::unordered_set<std::size_t> picked;
  for (std::size_t s = 0; s + k <= n; ++s) {
    const double weight = choose_real(n - 1 - s, k - 1) / total_real;
    const auto draws = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::llround(weight * static_cast<double>(options.samples))));
    double acc = 0.0;
    double lpl = 0.0;
    const std::size_t pool = n - 1 - s;  // candidates s+1 .. n-1
    for (std::uint64_t d = 0; d < draws; ++d) {
      // Floyd's algorithm: k-1 distinct picks from the pool.
      picked.clear();
      for (std::size_t j = pool - (k - 1); j < pool; ++j) {
        const std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
        if (!picked.insert(t).second) picked.insert(j);
      }
      members.assign(1, s);
      for (std::size_t t : picked) members.push_back(s + 1 + t);
      score(acc, lpl);
    }
    r.accuracy += weight * acc / static_cast<double>(draws);
    r.lpl += weight * lpl / static_cast<double>(draws);
    r.subsets += draws;
  }
  return r;
}

MajSummary maj_at_k_all(std::span<const EvalRecord> records, const EquivalenceOracle& oracle,
                        std::size_t k, const MajOptions& options, std::size_t threads) {
  MajSummary s;
  s.problems = records.size();
  s.per_problem.resize(records.size());
  if (records.empty()) return s;

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, records.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(records.size());
  auto work = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      try {
        s.per_problem[i] = k == 3 ? maj_at_3(records[i], oracle)
                                  : maj_at_k(records[i], oracle, k, options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (const MajResult& r : s.per_problem) {
    s.accuracy += r.accuracy;
    s.lpl += r.lpl;
    s.sampled = s.sampled || r.sampled;
  }
  s.accuracy /= static_cast<double>(s.problems);
  s.lpl /= static_cast<double>(s.problems);
  return s;
}

}  // namespace dccot::eval
