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

#include "dccot/trainseq.hpp"

#include <algorithm>
#include <map>

namespace dccot::train {

std::string_view to_string(Origin o) {
  switch (o) {
    case Origin::PolicyGenerated: return "policy_generated";
    case Origin::ScaffoldInserted: return "scaffold_inserted";
  }
  return "?";
}

std::string_view to_string(Copy c) {
  switch (c) {
    case Copy::None: return "none";
    case Copy::A: return "A";
    case Copy::B: return "B";
  }
  return "?";
}

std::size_t BlockLayout::block_of(std::size_t pos) const {
  auto it = std::upper_bound(blocks.begin(), blocks.end(), pos,
                             [](std::size_t p, const Block& b) { return p < b.end; });
  while (it != blocks.end() && it->size() == 0) ++it;
  if (it == blocks.end()) throw Error("token position " + std::to_string(pos) + " out of range");
  return static_cast<std::size_t>(it - blocks.begin());
}

namespace {

class Packer {
 public:
  Packer(const TokenCounter& counter, PackedSequence& out) : counter_(counter), out_(out) {}

  void add(std::string name, std::string_view text, Origin origin, Copy copy = Copy::None,
           std::size_t round = 0, std::size_t worker = 0) {
    Block b;
    b.name = std::move(name);
    b.origin = origin;
    b.copy = copy;
    b.round = round;
    b.worker = worker;
    b.start = out_.tokens.size();
    for (std::string_view tok : counter_.split(text)) out_.tokens.emplace_back(tok);
    b.end = out_.tokens.size();
    out_.layout.blocks.push_back(std::move(b));
  }

 private:
  const TokenCounter& counter_;
  PackedSequence& out_;
};

bool is_a(const Block& b) { return b.copy == Copy::A; }

}  // namespace

PackedSequence build_training_sequence(const Transcript& t, const TagConfig& tags,
                                       const TokenCounter& counter,
                                       const BuildOptions& options) {
  if (!counter.can_split()) {
    throw ConfigError("training sequences need a token counter that can split text");
  }
  check_transcript(t, tags);

  PackedSequence seq;
  Packer pack(counter, seq);
  constexpr auto kPolicy = Origin::PolicyGenerated;
  constexpr auto kScaffold = Origin::ScaffoldInserted;

  pack.add("PROMPT", t.prompt, kScaffold);
  for (std::size_t j = 0; j < t.directors.size(); ++j) {
    const std::string s = "S" + std::to_string(j + 1);
    pack.add(s, t.directors[j].text, kPolicy);
    if (j == t.rounds.size()) break;

    pack.add(s + ":spawn", tags.spawn_open, kPolicy);
    const std::size_t r = j + 1;
    const std::string suffix = r >= 2 ? "@r" + std::to_string(r) : "";
    const auto& workers = t.rounds[j].workers;
    for (const Copy copy : {Copy::A, Copy::B}) {
      const std::string letter(to_string(copy));
      for (const Segment& w : workers) {
        const std::size_t i = *w.worker_index;
        const std::string base = "W" + std::to_string(i) + letter;
        pack.add(base + ":open" + suffix, tags.worker_open(i), kScaffold, copy, r, i);
        pack.add(base + suffix, w.text, kPolicy, copy, r, i);
        pack.add(base + ":close" + suffix, tags.worker_close(i), kScaffold, copy, r, i);
      }
    }
    pack.add("spawn_close" + suffix, tags.spawn_close, kScaffold, Copy::None, r);
  }
  if (t.terminated == Termination::Eos) pack.add("EOS", tags.eos_marker, kPolicy);

  seq.position_ids = build_position_ids(seq.layout);
  seq.mask = build_visibility(seq.layout);
  seq.loss_mask = build_loss_mask(seq.layout);
  seq.exceeds_max_length = seq.tokens.size() > options.max_length;
  return seq;
}

std::vector<std::size_t> build_position_ids(const BlockLayout& layout) {
  std::vector<std::size_t> pos(layout.total_tokens());
  std::size_t main = 0;
  std::size_t region_round = 0;  // round whose A region `region_start` belongs to
  std::size_t region_start = 0;
  std::map<std::size_t, std::size_t> worker_next;

  for (const Block& b : layout.blocks) {
    std::size_t* next = &main;
    if (is_a(b)) {
      if (b.round != region_round) {
        region_round = b.round;
        region_start = main;
        worker_next.clear();
      }
      next = &worker_next.try_emplace(b.worker, region_start).first->second;
    }
    for (std::size_t p = b.start; p < b.end; ++p) pos[p] = (*next)++;
  }
  return pos;
}

AttentionMaskSpec build_visibility(const BlockLayout& layout) {
  const auto& blocks = layout.blocks;
  const std::size_t n = blocks.size();
  AttentionMaskSpec spec;
  spec.visibility.assign(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      bool visible = !is_a(blocks[b]);
      if (is_a(blocks[b]) && is_a(blocks[a])) {
        visible = blocks[a].round == blocks[b].round && blocks[a].worker == blocks[b].worker;
      }
      spec.visibility[a][b] = visible;
    }
  }
  return spec;
}

std::vector<bool> build_loss_mask(const BlockLayout& layout) {
  std::vector<bool> mask(layout.total_tokens(), false);
  for (const Block& b : layout.blocks) {
    const bool loss = b.origin == Origin::PolicyGenerated && b.copy != Copy::B;
    for (std::size_t p = b.start; p < b.end; ++p) mask[p] = loss;
  }
  return mask;
}

DenseMask expand_dense(const AttentionMaskSpec& mask, const BlockLayout& layout,
                       std::size_t max_tokens) {
  const std::size_t n = layout.total_tokens();
  if (n > max_tokens) {
    throw SizeLimit("dense mask of " + std::to_string(n) + " tokens exceeds the limit of " +
                    std::to_string(max_tokens));
  }
  const std::size_t nb = layout.blocks.size();
  if (mask.visibility.size() != nb) {
    throw Error("visibility matrix has " + std::to_string(mask.visibility.size()) +
                " rows for " + std::to_string(nb) + " blocks");
  }
  DenseMask dense;
  dense.n = n;
  dense.cells.assign(n * n, 0);
  for (std::size_t a = 0; a < nb; ++a) {
    const Block& ba = layout.blocks[a];
    for (std::size_t b = 0; b <= a; ++b) {
      if (!mask.visibility[a][b]) continue;
      const Block& bb = layout.blocks[b];
      for (std::size_t row = ba.start; row < ba.end; ++row) {
        const std::size_t stop = a == b ? row + 1 : bb.end;
        for (std::size_t col = bb.start; col < stop; ++col) dense.cells[row * n + col] = 1;
      }
    }
  }
  return dense;
}

}  // namespace dccot::train
