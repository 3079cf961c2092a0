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

#include "dccot/prompts.hpp"

#include "dccot/error.hpp"

namespace dccot::prompts {

const std::string_view kParallel =
    "<｜begin▁of▁sentence｜><｜User｜>{question} You can spawn multiple workers to solve this "
    "problem in parallel. The workers' thoughts are enclosed within "
    "<spawn_workers></spawn_workers> tags, and each worker's thought is enclosed within "
    "<worker_i></worker_i> tags, where i is the worker number, i.e. "
    "<spawn_workers><worker_1>worker 1's thought</worker_1><worker_2>worker 2's "
    "thought</worker_2>...</spawn_workers>. Let's think step by step and output the final "
    "answer within \\boxed{}.<｜Assistant｜>";

const std::string_view kSequential =
    "<｜begin▁of▁sentence｜><｜User｜>{question} Let's think step by step and output the final "
    "answer within \\boxed{}.<｜Assistant｜><think>\n";

const std::string_view kSequentialCot =
    "{question} Let's think step by step and output the final answer within \\boxed{}.<think>\n";

std::string_view find_template(std::string_view name) {
  if (name == "parallel") return kParallel;
  if (name == "sequential") return kSequential;
  if (name == "sequential_cot") return kSequentialCot;
  throw ConfigError("unknown prompt template '" + std::string(name) +
                    "' (use parallel, sequential or sequential_cot)");
}

std::vector<std::string_view> template_names() { return {"parallel", "sequential", "sequential_cot"}; }

std::string apply_template(std::string_view tmpl, std::string_view question) {
  static constexpr std::string_view kSlot = "{question}";
  std::string out;
  std::size_t from = 0;
  for (std::size_t at = tmpl.find(kSlot); at != std::string_view::npos;
       at = tmpl.find(kSlot, from)) {
    out.append(tmpl.substr(from, at - from));
    out.append(question);
    from = at + kSlot.size();
  }
  out.append(tmpl.substr(from));
  return out;
}

}  // namespace dccot::prompts
