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
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dccot/error.hpp"

namespace dccot::eval {

struct Response {
  std::string answer;
  bool correct = false;
  std::size_t lpl = 0;
};

struct EvalRecord {
  std::string problem_id;
  std::vector<Response> responses;
};

class TooFewResponses : public Error {
 public:
  using Error::Error;
};

// Decides whether two final answers are the same. Must be reflexive and
// symmetric and safe to call concurrently; transitivity is imposed by the
// caller.
class EquivalenceOracle {
 public:
  virtual ~EquivalenceOracle() = default;
  virtual bool equivalent(std::string_view a, std::string_view b) const = 0;
  // When equivalence is plain equality of some normal form, that form.
  // Lets callers partition in one pass instead of comparing pairs.
  virtual std::optional<std::string> canonical_key(std::string_view) const { return std::nullopt; }
  virtual std::string name() const = 0;
};

// Trims, collapses whitespace runs to one space and strips braces that wrap
// the whole answer ("{ {42} }" -> "42").
std::string normalize_answer(std::string_view answer);

class ExactMatchOracle final : public EquivalenceOracle {
 public:
  bool equivalent(std::string_view a, std::string_view b) const override;
  std::optional<std::string> canonical_key(std::string_view a) const override;
  std::string name() const override { return "exact"; }
};

// Runs a shell command per distinct pair. The command reads
// {"a": ..., "b": ...} on stdin and prints true/false (or 1/0). Verdicts are
// cached per unordered pair.
class CommandOracle final : public EquivalenceOracle {
 public:
  explicit CommandOracle(std::string command);
  bool equivalent(std::string_view a, std::string_view b) const override;
  std::string name() const override { return "cmd:" + command_; }

 private:
  std::string command_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<std::string, std::string>, bool> cache_;
};

// "exact" or "cmd:<shell command>".
std::unique_ptr<EquivalenceOracle> make_oracle(std::string_view name);

// Class id per response: the transitive closure of the oracle's verdicts.
// Ids are dense and numbered in order of first appearance.
std::vector<std::size_t> answer_classes(const EvalRecord& record, const EquivalenceOracle& oracle);

struct Pass1 {
  double accuracy = 0.0;  // mean over problems of per-problem accuracy
  double lpl = 0.0;       // mean over all responses
  std::size_t problems = 0;
  std::size_t responses = 0;
};

Pass1 pass_at_1(std::span<const EvalRecord> records);

struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

// Exact maj@3 accuracy of one problem, from class ids and correctness. Each
// 3-subset votes: one class averages all three flags, a 2+1 split averages
// the pair, three singletons average all three. The result is the mean over
// all C(N, 3) subsets, in lowest terms.
Fraction maj3_accuracy(std::span<const std::size_t> classes, std::span<const bool> correct);

// Mean over all 3-subsets of the largest lpl in the subset.
double maj3_lpl(std::span<const std::size_t> lpls);

struct MajResult {
  double accuracy = 0.0;
  double lpl = 0.0;
  std::uint64_t subsets = 0;  // subsets scored
  bool sampled = false;       // true when subsets were sampled, not enumerated
};

// Throws TooFewResponses when N < 3.
MajResult maj_at_3(const EvalRecord& record, const EquivalenceOracle& oracle);

struct MajOptions {
  std::uint64_t max_subsets = 10'000'000;  // enumerate exactly up to this many
  std::uint64_t samples = 1'000'000;       // subsets drawn past the cap
  std::uint64_t seed = 0x5eed;
};

// maj@k by enumerating k-subsets: the largest answer class wins and ties are
// split evenly among the tied classes. Above max_subsets, subsets are drawn
// per stratum of their smallest member, proportionally to stratum size.
MajResult maj_at_k(const EvalRecord& record, const EquivalenceOracle& oracle, std::size_t k,
                   const MajOptions& options = {});

struct MajSummary {
  double accuracy = 0.0;  // mean over problems
  double lpl = 0.0;       // mean over problems
  std::size_t problems = 0;
  bool sampled = false;   // any problem was sampled
  std::vector<MajResult> per_problem;
};

// Scores every record on a pool of `threads` workers (0 = hardware
// concurrency). k == 3 uses the closed form.
MajSummary maj_at_k_all(std::span<const EvalRecord> records, const EquivalenceOracle& oracle,
                        std::size_t k, const MajOptions& options = {}, std::size_t threads = 0);

}  // namespace dccot::eval
