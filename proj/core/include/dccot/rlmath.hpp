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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dccot/error.hpp"

namespace dccot::rl {

class OverMax : public Error {
 public:
  using Error::Error;
};

class DegenerateGroup : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

// standard: f - penalty, floored at 0, with f in {1, 0.5, 0}.
// hlp:      1 - penalty for correct and formatted, 0.01 for correct only, else 0.
// binary:   1 - penalty for correct and formatted, else 0.
enum class RewardMode { Standard, Hlp, Binary };

std::string_view to_string(RewardMode m);
RewardMode parse_reward_mode(std::string_view s);

struct RewardConfig {
  double c_l = 0.1;
  std::size_t l_cutoff = 2000;
  std::size_t l_max = 7500;
  RewardMode mode = RewardMode::Standard;

  // Throws ConfigError unless c_l >= 0 and l_cutoff < l_max.
  void validate() const;

  friend bool operator==(const RewardConfig&, const RewardConfig&) = default;
};

struct ScoredResponse {
  bool correct = false;
  bool format_ok = false;
  std::size_t lpl = 0;
};

struct RolloutGroup {
  std::string problem_id;
  std::vector<ScoredResponse> responses;
};

// 0 up to l_cutoff, then linear up to c_l at l_max. Throws OverMax past l_max.
double length_penalty(std::size_t lpl, const RewardConfig& cfg);

// 1.0 correct and formatted, 0.5 correct only, 0 otherwise.
double correctness_format_reward(const ScoredResponse& r);

double reward_standard(const ScoredResponse& r, const RewardConfig& cfg);
double reward_hlp(const ScoredResponse& r, const RewardConfig& cfg);
double reward_binary(const ScoredResponse& r, const RewardConfig& cfg);

struct Reward {
  double value = 0.0;
  bool truncated = false;  // lpl > l_max; value forced to 0
};

// Reward under cfg.mode. Responses longer than l_max score 0 and are flagged.
Reward score(const ScoredResponse& r, const RewardConfig& cfg);

// (R_i - mean) / population stddev. Throws DegenerateGroup for fewer than two
// rewards or a (numerically) constant group.
std::vector<double> group_advantages(std::span<const double> rewards);

enum class FilterKind { IncludeEasy, RemoveEasy };

std::string_view to_string(FilterKind f);
FilterKind parse_filter_kind(std::string_view s);

// Keep iff some response is both correct and formatted.
bool filter_include_easy(const RolloutGroup& g);
// Keep iff correctness is mixed. Format is ignored.
bool filter_remove_easy(const RolloutGroup& g);
bool keep_group(const RolloutGroup& g, FilterKind kind);

// Per-token log-probabilities of one response under the current, behavior
// (old) and reference policies. Only loss-bearing tokens belong here.
struct TokenLogProbs {
  std::vector<double> current;
  std::vector<double> old;
  std::vector<double> ref;
};

struct DapoParams {
  double eps_low = 0.2;
  double eps_high = 0.28;
  double beta = 0.0;
};

struct CispoParams {
  double eps_high = 5.0;
  double beta = 0.0;
};

// Token mean over every response of min(r A, clip(r, 1-eps_low, 1+eps_high) A)
// - beta KL, with r = exp(current - old). `advantages[i]` belongs to
// `responses[i]`. Throws ShapeMismatch on length mismatches or zero tokens.
double dapo_objective(std::span<const TokenLogProbs> responses,
                      std::span<const double> advantages, const DapoParams& params = {});

// Token mean of min(r, eps_high) A current - beta KL. In a training framework
// the min(r, eps_high) A factor is a constant (stop-gradient) coefficient.
double cispo_objective(std::span<const TokenLogProbs> responses,
                       std::span<const double> advantages, const CispoParams& params = {});

// u - log u - 1 with u = exp(ref_lp - cur_lp). Always >= 0.
double kl_estimate(double ref_lp, double cur_lp);
std::vector<double> kl_estimate(std::span<const double> ref_lp, std::span<const double> cur_lp);

struct Percentile {
  double p = 0.0;
  double value = 0.0;
};

struct EntropySummary {
  double mean = 0.0;
  std::vector<Percentile> percentiles;
};

// Mean and nearest-rank percentiles (rank ceil(p/100 * N), at least 1) for p
// in [0, 100]. Throws EmptyInput for no entropies.
EntropySummary entropy_stats(std::span<const double> entropies,
                             std::span<const double> percentiles);

}  // namespace dccot::rl
