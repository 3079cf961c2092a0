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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dccot/error.hpp"
#include "dccot/tags.hpp"
#include "dccot/token_counter.hpp"

namespace dccot {

enum class Role { Director, Worker };
enum class Termination { Eos, BudgetExhausted };

std::string_view to_string(Role role);
std::string_view to_string(Termination t);

// A contiguous run of generated text by one role. Tag text is never part of
// a segment and never counted in `length`.
struct Segment {
  Role role = Role::Director;
  // Directors: number of rounds completed before this segment.
  // Workers: 1-based round the worker belongs to.
  std::size_t round_index = 0;
  std::optional<std::size_t> worker_index;  // set iff role == Worker
  std::string text;
  std::size_t length = 0;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct SpawnRound {
  std::vector<Segment> workers;  // worker_index 1..K in order, K >= 1

  friend bool operator==(const SpawnRound&, const SpawnRound&) = default;
};

// One response: director segments interleaved with spawn rounds,
// directors[0], rounds[0], directors[1], ..., rounds[R-1], directors[R].
// The alternation is carried by the shape: directors.size() == rounds.size() + 1.
struct Transcript {
  std::string prompt;
  std::vector<Segment> directors;
  std::vector<SpawnRound> rounds;
  Termination terminated = Termination::Eos;

  std::size_t max_workers_per_round() const;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

class TranscriptError : public Error {
 public:
  enum class Kind {
    UnbalancedTags,   // an open tag never closed
    CrossedNesting,   // tags overlap or appear where they cannot nest
    WorkerIndexGap,   // worker k+1 expected, something else found
    StrayClose,       // close tag with nothing open
    MisplacedText,    // text inside a spawn block but outside any worker
    InvalidStructure  // a Transcript value violating its own invariants
  };

  TranscriptError(Kind kind, std::size_t offset, const std::string& what);

  Kind kind() const { return kind_; }
  // Byte offset into the flat text where the problem was found (0 for
  // structural errors on Transcript values).
  std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

std::string_view to_string(TranscriptError::Kind kind);

class ZeroLengthError : public Error {
 public:
  using Error::Error;
};

// Builds a Transcript from raw texts, computing every length with `counter`.
// `round_texts[r]` holds the worker texts of round r+1.
Transcript make_transcript(std::string prompt,
                           const std::vector<std::string>& director_texts,
                           const std::vector<std::vector<std::string>>& round_texts,
                           Termination terminated, const TokenCounter& counter);

// Throws TranscriptError(InvalidStructure) if `t` is not a renderable value:
// shape, role/index bookkeeping, or segment text that would be read back as
// structure (a tag in director text, a worker tag or spawn_close in worker
// text, a final director text ending in the EOS marker).
void check_transcript(const Transcript& t, const TagConfig& tags);

// Flat text in the order the orchestrator appends it. The EOS marker is
// appended when the response terminated on EOS.
std::string render_transcript(const Transcript& t, const TagConfig& tags);

// Inverse of render_transcript. Inside a worker block an opening spawn tag is
// literal text; every other tag is structural.
Transcript parse_transcript(std::string_view text, const TagConfig& tags,
                            const TokenCounter& counter, std::string prompt = {});

struct FormatReport {
  bool spawned_workers = false;
  bool tags_balanced = false;
  bool tags_nested = false;
  bool format_ok = false;
  std::vector<std::string> violations;
};

// Never throws on malformed input; problems are reported as data.
FormatReport validate_format(std::string_view text, const TagConfig& tags);
FormatReport validate_format(const Transcript& t, const TagConfig& tags);

// Sum of director lengths plus, per round, the longest worker.
std::size_t longest_path_length(const Transcript& t);
std::size_t total_tokens(const Transcript& t);
// total_tokens / longest_path_length; throws ZeroLengthError when lpl is 0.
double degree_of_parallelism(const Transcript& t);

}  // namespace dccot
