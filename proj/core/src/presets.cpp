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

#include "dccot/presets.hpp"

namespace dccot::rl {

std::string_view to_string(Objective o) {
  switch (o) {
    case Objective::Dapo: return "dapo";
    case Objective::Cispo: return "cispo";
  }
  return "?";
}

namespace {

std::vector<StagePreset> make_presets() {
  std::vector<StagePreset> all;

  StagePreset s1;
  s1.name = "stage1";
  s1.objective = Objective::Dapo;
  s1.filter = FilterKind::IncludeEasy;
  s1.reward = RewardConfig{0.1, 2000, 7500, RewardMode::Standard};
  s1.eps_low = 0.2;
  s1.eps_high = 0.28;
  s1.learning_rate = 7.071e-7;
  s1.rollout_batch = 288;
  s1.train_batch = 96;
  s1.steps = 700;
  all.push_back(s1);

  StagePreset s2;
  s2.name = "stage2";
  s2.objective = Objective::Cispo;
  s2.filter = FilterKind::IncludeEasy;
  s2.reward = RewardConfig{0.1, 2000, 7500, RewardMode::Standard};
  s2.learning_rate = 1.414e-6;
  s2.rollout_batch = 288;
  s2.train_batch = 96;
  s2.steps = 480;
  s2.schedule = ScheduleChange{200, 192, 2.828e-6};
  all.push_back(s2);

  StagePreset s3;
  s3.name = "stage3";
  s3.objective = Objective::Cispo;
  s3.filter = FilterKind::RemoveEasy;
  s3.reward = RewardConfig{0.1, 2000, 7500, RewardMode::Standard};
  s3.learning_rate = 2e-6;
  s3.rollout_batch = 288;
  s3.train_batch = 96;
  s3.steps = 240;
  all.push_back(s3);

  StagePreset s4;
  s4.name = "stage4";
  s4.objective = Objective::Cispo;
  s4.filter = FilterKind::RemoveEasy;
  s4.reward = RewardConfig{0.1, 6500, 12000, RewardMode::Standard};
  s4.learning_rate = 2e-6;
  s4.rollout_batch = 360;
  s4.train_batch = 96;
  s4.steps = 220;
  all.push_back(s4);

  StagePreset hlp;
  hlp.name = "hlp";
  hlp.objective = Objective::Cispo;
  hlp.filter = FilterKind::RemoveEasy;
  hlp.reward = RewardConfig{0.9, 2000, 12000, RewardMode::Hlp};
  hlp.learning_rate = 2e-6;
  hlp.rollout_batch = 360;
  hlp.train_batch = 96;
  hlp.steps = 200;
  all.push_back(hlp);

  for (const auto& [name, l_max] : {std::pair<const char*, std::size_t>{"dsr-hlp-12k", 12000},
                                    std::pair<const char*, std::size_t>{"dsr-hlp-24k", 24000}}) {
    StagePreset dsr;
    dsr.name = name;
    dsr.objective = Objective::Cispo;
    dsr.filter = FilterKind::RemoveEasy;
    dsr.reward = RewardConfig{0.9, 2000, l_max, RewardMode::Binary};
    dsr.learning_rate = 2e-6;
    dsr.rollout_batch = 360;
    dsr.train_batch = 96;
    dsr.steps = 200;
    all.push_back(dsr);
  }
  return all;
}

}  // namespace

const std::vector<StagePreset>& presets() {
  static const std::vector<StagePreset> all = make_presets();
  return all;
}

const StagePreset& find_preset(std::string_view name) {
  for (const StagePreset& p : presets()) {
    if (p.name == name) return p;
  }
  std::string known;
  for (const StagePreset& p : presets()) known += (known.empty() ? "" : ", ") + p.name;
  throw ConfigError("unknown preset '" + std::string(name) + "' (known: " + known + ")");
}

}  // namespace dccot::rl
