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
#include <string>
#include <string_view>
#include <vector>

#include "dccot/error.hpp"
#include "dccot/tags.hpp"
#include "dccot/token_counter.hpp"
#include "dccot/transcript.hpp"

namespace dccot::train {

enum class Origin { PolicyGenerated, ScaffoldInserted };

// Worker text is packed twice. The A copy is the one the worker attended
// with while generating; the B copy is what the director read afterwards.
enum class Copy { None, A, B };

std::string_view to_string(Origin o);
std::string_view to_string(Copy c);

struct Block {
  std::string name;
  std::size_t start = 0;  // [start, end) in the packed token stream
  std::size_t end = 0;
  Origin origin = Origin::PolicyGenerated;
  Copy copy = Copy::None;
  std::size_t round = 0;   // 1-based for worker blocks and spawn_close, else 0
  std::size_t worker = 0;  // 1-based for worker blocks, else 0

  std::size_t size() const { return end - start; }

  friend bool operator==(const Block&, const Block&) = default;
};

// Blocks in stream order. Names: PROMPT, S<j> for director text, S<j>:spawn
// for the spawn tag the director emitted, W<i>A / W<i>B for worker text with
// :open / :close tag blocks on either side, spawn_close, EOS. Blocks of the
// second and later rounds carry an "@r<round>" suffix on worker and
// spawn_close names.
struct BlockLayout {
  std::vector<Block> blocks;

  std::size_t total_tokens() const { return blocks.empty() ? 0 : blocks.back().end; }
  // Index of the block containing token `pos`.
  std::size_t block_of(std::size_t pos) const;
};

// visibility[a][b]: tokens of block a may attend to tokens of block b. Within
// a block attention is causal; blocks never see later blocks.
struct AttentionMaskSpec {
  std::vector<std::vector<bool>> visibility;
};

struct PackedSequence {
  std::vector<std::string> tokens;  // token texts, as split by the counter
  BlockLayout layout;
  AttentionMaskSpec mask;
  std::vector<std::size_t> position_ids;
  std::vector<bool> loss_mask;
  bool exceeds_max_length = false;
};

struct BuildOptions {
  std::size_t max_length = 10000;
};

// Lays out a transcript for training. `counter` must be able to split; every
// block is tokenized on its own. Throws TranscriptError(InvalidStructure) for
// transcripts check_transcript rejects.
PackedSequence build_training_sequence(const Transcript& t, const TagConfig& tags,
                                       const TokenCounter& counter,
                                       const BuildOptions& options = {});

// Non-A blocks form the main line and take consecutive positions from 0.
// Every A copy of a round restarts at the position where that round's worker
// region begins; each worker's :open, text and :close run on from there.
std::vector<std::size_t> build_position_ids(const BlockLayout& layout);

// A copies see the main line before them and their own worker's A blocks.
// Main-line blocks see every earlier main-line block and no A copy.
AttentionMaskSpec build_visibility(const BlockLayout& layout);

// True on policy-generated blocks outside the B copies.
std::vector<bool> build_loss_mask(const BlockLayout& layout);

class SizeLimit : public Error {
 public:
  using Error::Error;
};

// Row-major n x n token mask.
struct DenseMask {
  std::size_t n = 0;
  std::vector<std::uint8_t> cells;

  bool at(std::size_t row, std::size_t col) const { return cells[row * n + col] != 0; }

  friend bool operator==(const DenseMask&, const DenseMask&) = default;
};

// Throws SizeLimit when the stream is longer than max_tokens.
DenseMask expand_dense(const AttentionMaskSpec& mask, const BlockLayout& layout,
                       std::size_t max_tokens = 8192);

}  // namespace dccot::train
