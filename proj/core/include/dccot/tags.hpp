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
#include <string>
#include <string_view>
#include <vector>

namespace dccot {

// The markup a director/worker response is written in. Worker tags are
// templates; "{i}" is replaced by the 1-based worker number.
struct TagConfig {
  std::string spawn_open = "<spawn_workers>";
  std::string spawn_close = "</spawn_workers>";
  std::string worker_open_template = "<worker_{i}>";
  std::string worker_close_template = "</worker_{i}>";
  std::string eos_marker = "<｜end▁of▁sentence｜>";

  std::string worker_open(std::size_t i) const;
  std::string worker_close(std::size_t i) const;

  // Throws ConfigError unless every tag is non-empty, the tags are pairwise
  // distinct, and each worker template has exactly one "{i}" with a
  // non-digit boundary on both sides.
  void validate() const;

  friend bool operator==(const TagConfig&, const TagConfig&) = default;
};

enum class TagKind { SpawnOpen, SpawnClose, WorkerOpen, WorkerClose };

// One structural tag occurrence in a flat response, [begin, end) in bytes.
struct TagToken {
  TagKind kind;
  std::size_t worker = 0;  // set for WorkerOpen/WorkerClose
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const TagToken&, const TagToken&) = default;
};

// Finds every structural tag in `text`, left to right, non-overlapping.
// Worker numbers must be canonical decimals (no sign, no leading zero, >= 1);
// anything else is literal text. When two tags start at the same offset the
// longer one wins.
std::vector<TagToken> lex_tags(const TagConfig& tags, std::string_view text);

std::string_view to_string(TagKind kind);

}  // namespace dccot
