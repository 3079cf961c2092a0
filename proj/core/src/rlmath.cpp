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

#include "dccot/rlmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dccot::rl {

std::string_view to_string(RewardMode m) {
  switch (m) {
    case RewardMode::Standard: return "standard";
    case RewardMode::Hlp: return "hlp";
    case RewardMode::Binary: return "binary";
  }
  return "?";
}

RewardMode parse_reward_mode(std::string_view s) {
  if (s == "standard") return RewardMode::Standard;
  if (s == "hlp") return RewardMode::Hlp;
  if (s == "binary") return RewardMode::Binary;
  throw ConfigError("unknown reward mode '" + std::string(s) + "'");
}

std::string_view to_string(FilterKind f) {
  switch (f) {
    case FilterKind::IncludeEasy: return "include_easy";
    case FilterKind::RemoveEasy: return "remove_easy";
  }
  return "?";
}

FilterKind parse_filter_kind(std::string_view s) {
  if (s == "include_easy") return FilterKind::IncludeEasy;
  if (s == "remove_easy") return FilterKind::RemoveEasy;
  throw ConfigError("unknown filter '" + std::string(s) + "'");
}

void RewardConfig::validate() const {
  if (!(c_l >= 0.0) || !std::isfinite(c_l)) throw ConfigError("C_L must be a finite value >= 0");
  if (l_cutoff >= l_max) throw ConfigError("L_cutoff must be below L_max");
}

double length_penalty(std::size_t lpl, const RewardConfig& cfg) {
  cfg.validate();
  if (lpl > cfg.l_max) {
    throw OverMax("longest path length " + std::to_string(lpl) + " exceeds L_max " +
                  std::to_string(cfg.l_max));
  }
  if (lpl <= cfg.l_cutoff) return 0.0;
  return cfg.c_l * static_cast<double>(lpl - cfg.l_cutoff) /
         static_cast<double>(cfg.l_max - cfg.l_cutoff);
}

double correctness_format_reward(const ScoredResponse& r) {
  if (!r.correct) return 0.0;
  return r.format_ok ? 1.0 : 0.5;
}

double reward_standard(const ScoredResponse& r, const RewardConfig& cfg) {
  return std::max(0.0, correctness_format_reward(r) - length_penalty(r.lpl, cfg));
}

double reward_hlp(const ScoredResponse& r, const RewardConfig& cfg) {
  const double penalty = length_penalty(r.lpl, cfg);
  if (!r.correct) return 0.0;
  return r.format_ok ? 1.0 - penalty : 0.01;
}

double reward_binary(const ScoredResponse& r, const RewardConfig& cfg) {
  const double penalty = length_penalty(r.lpl, cfg);
  return r.correct && r.format_ok ? 1.0 - penalty : 0.0;
}

Reward score(const ScoredResponse& r, const RewardConfig& cfg) {
  cfg.validate();
  if (r.lpl > cfg.l_max) return Reward{0.0, true};
  switch (cfg.mode) {
    case RewardMode::Standard: return Reward{reward_standard(r, cfg), false};
    case RewardMode::Hlp: return Reward{reward_hlp(r, cfg), false};
    case RewardMode::Binary: return Reward{reward_binary(r, cfg), false};
  }
  return Reward{};
}

std::vector<double> group_advantages(std::span<const double> rewards) {
  const std::size_t g = rewards.size();
  if (g < 2) throw DegenerateGroup("advantages need at least two rewards");
  const double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / static_cast<double>(g);
  double ss = 0.0;
  for (double r : rewards) ss += (r - mean) * (r - mean);
  const double sigma = std::sqrt(ss / static_cast<double>(g));
  const double scale = std::max(1.0, std::abs(mean));
  if (!(sigma > 1e-12 * scale)) throw DegenerateGroup("rewards in the group are constant");
  std::vector<double> out;
  out.reserve(g);
  for (double r : rewards) out.push_back((r - mean) / sigma);
  return out;
}

bool filter_include_easy(const RolloutGroup& g) {
  return std::any_of(g.responses.begin(), g.responses.end(),
                     [](const ScoredResponse& r) { return r.correct && r.format_ok; });
}

bool filter_remove_easy(const RolloutGroup& g) {
  const auto correct = std::count_if(g.responses.begin(), g.responses.end(),
                                     [](const ScoredResponse& r) { return r.correct; });
  return correct > 0 && static_cast<std::size_t>(correct) < g.responses.size();
}

bool keep_group(const RolloutGroup& g, FilterKind kind) {
  return kind == FilterKind::IncludeEasy ? filter_include_easy(g) : filter_remove_easy(g);
}

double kl_estimate(double ref_lp, double cur_lp) {
  const double d = ref_lp - cur_lp;
  return std::expm1(d) - d;
}

std::vector<double> kl_estimate(std::span<const double> ref_lp, std::span<const double> cur_lp) {
  if (ref_lp.size() != cur_lp.size()) throw ShapeMismatch("reference and current lengths differ");
  std::vector<double> out(ref_lp.size());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = kl_estimate(ref_lp[t], cur_lp[t]);
  return out;
}

namespace {

// Token mean of term(r, A, current, kl) over every token of every response.
template <typename Term>
double token_mean(std::span<const TokenLogProbs> responses, std::span<const double> advantages,
                  Term term) {
  if (responses.size() != advantages.size()) {
    throw ShapeMismatch(std::to_string(responses.size()) + " responses but " +
                        std::to_string(advantages.size()) + " advantages");
  }
  double sum = 0.0;
  std::size_t tokens = 0;
  for (std::size_t i = 0; i < responses.size(); ++i) {
    const TokenLogProbs& lp = responses[i];
    if (lp.old.size() != lp.current.size() || lp.ref.size() != lp.current.size()) {
      throw ShapeMismatch("response " + std::to_string(i) + " has log-prob vectors of unequal length");
    }
    for (std::size_t t = 0; t < lp.current.size(); ++t) {
      const double ratio = std::exp(lp.current[t] - lp.old[t]);
      sum += term(ratio, advantages[i], lp.current[t], kl_estimate(lp.ref[t], lp.current[t]));
    }
    tokens += lp.current.size();
  }
  if (tokens == 0) throw ShapeMismatch("objective over zero tokens");
  return sum / static_cast<double>(tokens);
}

}  // namespace

double dapo_objective(std::span<const TokenLogProbs> responses,
                      std::span<const double> advantages, const DapoParams& p) {
  return token_mean(responses, advantages, [&](double r, double a, double, double kl) {
    const double clipped = std::clamp(r, 1.0 - p.eps_low, 1.0 + p.eps_high);
    return std::min(r * a, clipped * a) - p.beta * kl;
  });
}

double cispo_objective(std::span<const TokenLogProbs> responses,
                       std::span<const double> advantages, const CispoParams& p) {
  return token_mean(responses, advantages, [&](double r, double a, double cur, double kl) {
    return std::min(r, p.eps_high) * a * cur - p.beta * kl;
  });
}

EntropySummary entropy_stats(std::span<const double> entropies,
                             std::span<const double> percentiles) {
  if (entropies.empty()) throw EmptyInput("entropy statistics need at least one value");
  EntropySummary s;
  s.mean = std::accumulate(entropies.begin(), entropies.end(), 0.0) /
           static_cast<double>(entropies.size());
  std::vector<double> sorted(entropies.begin(), entropies.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  for (double p : percentiles) {
    if (!(p >= 0.0 && p <= 100.0)) throw ConfigError("percentile must be in [0, 100]");
    // Rounding guards ceil against products like 60/100*100 = 60.000000000000007.
    const double exact = p / 100.0 * n;
    const double nearest = std::round(exact);
    const double rank_d = std::abs(exact - nearest) < 1e-9 ? nearest : std::ceil(exact);
    const std::size_t rank = std::max<std::size_t>(1, static_cast<std::size_t>(rank_d));
    s.percentiles.push_back(Percentile{p, sorted[rank - 1]});
  }
  return s;
}

}  // namespace dccot::rl
