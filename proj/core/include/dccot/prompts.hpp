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
#include <string_view>
#include <vector>

namespace dccot::prompts {

// Templates carry a single "{question}" placeholder.

// Parallel-reasoning prompt used for fine-tuning and RL of the
// director/worker model.
extern const std::string_view kParallel;
// Sequential prompt for a plain long-CoT model, ending in an open think tag.
extern const std::string_view kSequential;
// Bare sequential prompt used to sample long CoTs for data generation.
extern const std::string_view kSequentialCot;

// "parallel", "sequential" or "sequential_cot"; throws ConfigError otherwise.
std::string_view find_template(std::string_view name);
std::vector<std::string_view> template_names();

// Replaces every "{question}" in `tmpl`.
std::string apply_template(std::string_view tmpl, std::string_view question);

}  // namespace dccot::prompts
