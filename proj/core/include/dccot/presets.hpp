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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dccot/rlmath.hpp"

namespace dccot::rl {

enum class Objective { Dapo, Cispo };

std::string_view to_string(Objective o);

// A change of batch size and learning rate part-way through a stage.
struct ScheduleChange {
  std::size_t after_step = 0;
  std::size_t train_batch = 0;
  double learning_rate = 0.0;
};

// One RL stage. Everything below `beta` is inert metadata for the training
// framework; nothing here reads it.
struct StagePreset {
  std::string name;
  Objective objective = Objective::Cispo;
  FilterKind filter = FilterKind::RemoveEasy;
  RewardConfig reward;
  double eps_low = 0.2;   // DAPO only
  double eps_high = 5.0;
  double beta = 0.0;
  std::optional<double> learning_rate;
  std::optional<std::size_t> rollout_batch;
  std::optional<std::size_t> train_batch;
  std::optional<std::size_t> steps;
  std::size_t optimization_steps_per_rollout = 2;
  std::optional<ScheduleChange> schedule;
};

// stage1, stage2, stage3, stage4, hlp, dsr-hlp-12k, dsr-hlp-24k.
const std::vector<StagePreset>& presets();

// Throws ConfigError for an unknown name.
const StagePreset& find_preset(std::string_view name);

}  // namespace dccot::rl
