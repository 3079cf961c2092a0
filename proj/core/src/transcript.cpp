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

#include "dccot/transcript.hpp"

#include <algorithm>
#include <numeric>

namespace dccot {

namespace {

using Kind = TranscriptError::Kind;

// The texts of a transcript without lengths; what the grammar recovers.
struct Skeleton {
  std::vector<std::string> directors;
  std::vector<std::vector<std::string>> rounds;
  Termination terminated = Termination::BudgetExhausted;
};

std::string describe(const TagConfig& tags, const TagToken& tok) {
  switch (tok.kind) {
    case TagKind::SpawnOpen: return tags.spawn_open;
    case TagKind::SpawnClose: return tags.spawn_close;
    case TagKind::WorkerOpen: return tags.worker_open(tok.worker);
    case TagKind::WorkerClose: return tags.worker_close(tok.worker);
  }
  return {};
}

[[noreturn]] void fail(Kind kind, std::size_t offset, const std::string& msg) {
  throw TranscriptError(kind, offset, msg + " at offset " + std::to_string(offset));
}

Skeleton parse_skeleton(std::string_view text, const TagConfig& tags) {
  Skeleton out;
  std::string_view body = text;
  if (body.ends_with(tags.eos_marker)) {
    out.terminated = Termination::Eos;
    body.remove_suffix(tags.eos_marker.size());
  }

  enum class State { Director, Round, Worker } state = State::Director;
  std::size_t cursor = 0;
  std::size_t expected = 1;
  std::vector<std::string> round;

  for (const TagToken& tok : lex_tags(tags, body)) {
    const std::string tag = describe(tags, tok);
    switch (state) {
      case State::Director:
        switch (tok.kind) {
          case TagKind::SpawnOpen:
            out.directors.emplace_back(body.substr(cursor, tok.begin - cursor));
            state = State::Round;
            expected = 1;
            round.clear();
            cursor = tok.end;
            break;
          case TagKind::SpawnClose:
          case TagKind::WorkerClose:
            fail(Kind::StrayClose, tok.begin, tag + " closes nothing");
          case TagKind::WorkerOpen:
            fail(Kind::CrossedNesting, tok.begin, tag + " outside a spawn block");
        }
        break;

      case State::Round:
        if (tok.begin > cursor) {
          fail(Kind::MisplacedText, cursor, "text between worker blocks");
        }
        switch (tok.kind) {
          case TagKind::WorkerOpen:
            if (tok.worker != expected) {
              fail(Kind::WorkerIndexGap, tok.begin,
                   "expected " + tags.worker_open(expected) + ", found " + tag);
            }
            state = State::Worker;
            cursor = tok.end;
            break;
          case TagKind::SpawnClose:
            if (round.empty()) {
              fail(Kind::WorkerIndexGap, tok.begin, "spawn block without workers");
            }
            out.rounds.push_back(std::move(round));
            round.clear();
            state = State::Director;
            cursor = tok.end;
            break;
          case TagKind::SpawnOpen:
            fail(Kind::CrossedNesting, tok.begin, tag + " inside a spawn block");
          case TagKind::WorkerClose:
            fail(Kind::StrayClose, tok.begin, tag + " closes nothing");
        }
        break;

      case State::Worker:
        switch (tok.kind) {
          case TagKind::SpawnOpen:
            break;  // literal inside a worker
          case TagKind::WorkerClose:
            if (tok.worker != expected) {
              fail(Kind::CrossedNesting, tok.begin,
                   tag + " while " + tags.worker_open(expected) + " is open");
            }
            round.emplace_back(body.substr(cursor, tok.begin - cursor));
            ++expected;
            state = State::Round;
            cursor = tok.end;
            break;
          case TagKind::WorkerOpen:
          case TagKind::SpawnClose:
            fail(Kind::CrossedNesting, tok.begin,
                 tag + " while " + tags.worker_open(expected) + " is open");
        }
        break;
    }
  }

  if (state == State::Worker) {
    fail(Kind::UnbalancedTags, body.size(), tags.worker_open(expected) + " never closed");
  }
  if (state == State::Round) {
    fail(Kind::UnbalancedTags, body.size(), tags.spawn_open + " never closed");
  }
  out.directors.emplace_back(body.substr(cursor));
  return out;
}

Segment make_segment(Role role, std::size_t round, std::optional<std::size_t> worker,
                     std::string text, const TokenCounter& counter) {
  Segment s;
  s.role = role;
  s.round_index = round;
  s.worker_index = worker;
  s.length = counter.count(text);
  s.text = std::move(text);
  return s;
}

void check_shape(const Transcript& t) {
  const auto bad = [](const std::string& msg) {
    throw TranscriptError(Kind::InvalidStructure, 0, msg);
  };
  if (t.directors.size() != t.rounds.size() + 1) {
    bad("expected " + std::to_string(t.rounds.size() + 1) + " director segments, found " +
        std::to_string(t.directors.size()));
  }
  for (std::size_t j = 0; j < t.directors.size(); ++j) {
    const Segment& d = t.directors[j];
    if (d.role != Role::Director || d.worker_index || d.round_index != j) {
      bad("director segment " + std::to_string(j) + " has inconsistent role/index fields");
    }
  }
  for (std::size_t r = 0; r < t.rounds.size(); ++r) {
    const auto& workers = t.rounds[r].workers;
    if (workers.empty()) bad("round " + std::to_string(r + 1) + " has no workers");
    for (std::size_t i = 0; i < workers.size(); ++i) {
      const Segment& w = workers[i];
      if (w.role != Role::Worker || w.worker_index != i + 1 || w.round_index != r + 1) {
        bad("worker " + std::to_string(i + 1) + " of round " + std::to_string(r + 1) +
            " has inconsistent role/index fields");
      }
    }
  }
}

}  // namespace

TranscriptError::TranscriptError(Kind kind, std::size_t offset, const std::string& what)
    : Error(std::string(to_string(kind)) + ": " + what), kind_(kind), offset_(offset) {}

std::string_view to_string(TranscriptError::Kind kind) {
  switch (kind) {
    case Kind::UnbalancedTags: return "UnbalancedTags";
    case Kind::CrossedNesting: return "CrossedNesting";
    case Kind::WorkerIndexGap: return "WorkerIndexGap";
    case Kind::StrayClose: return "StrayClose";
    case Kind::MisplacedText: return "MisplacedText";
    case Kind::InvalidStructure: return "InvalidStructure";
  }
  return "?";
}

std::string_view to_string(Role role) {
  return role == Role::Director ? "director" : "worker";
}

std::string_view to_string(Termination t) {
  return t == Termination::Eos ? "eos" : "budget_exhausted";
}

std::size_t Transcript::max_workers_per_round() const {
  std::size_t k = 0;
  for (const auto& r : rounds) k = std::max(k, r.workers.size());
  return k;
}

Transcript make_transcript(std::string prompt,
                           const std::vector<std::string>& director_texts,
                           const std::vector<std::vector<std::string>>& round_texts,
                           Termination terminated, const TokenCounter& counter) {
  Transcript t;
  t.prompt = std::move(prompt);
  t.terminated = terminated;
  for (std::size_t j = 0; j < director_texts.size(); ++j) {
    t.directors.push_back(
        make_segment(Role::Director, j, std::nullopt, director_texts[j], counter));
  }
  for (std::size_t r = 0; r < round_texts.size(); ++r) {
    SpawnRound round;
    for (std::size_t i = 0; i < round_texts[r].size(); ++i) {
      round.workers.push_back(
          make_segment(Role::Worker, r + 1, i + 1, round_texts[r][i], counter));
    }
    t.rounds.push_back(std::move(round));
  }
  check_shape(t);
  return t;
}

void check_transcript(const Transcript& t, const TagConfig& tags) {
  check_shape(t);
  // Text is valid exactly when the grammar reads the rendering back unchanged.
  Skeleton back;
  try {
    back = parse_skeleton(render_transcript(t, tags), tags);
  } catch (const TranscriptError& e) {
    throw TranscriptError(Kind::InvalidStructure, 0,
                          std::string("segment text would be read as markup (") +
                              e.what() + ")");
  }
  bool same = back.terminated == t.terminated && back.directors.size() == t.directors.size() &&
              back.rounds.size() == t.rounds.size();
  for (std::size_t j = 0; same && j < t.directors.size(); ++j) {
    same = back.directors[j] == t.directors[j].text;
  }
  for (std::size_t r = 0; same && r < t.rounds.size(); ++r) {
    const auto& workers = t.rounds[r].workers;
    same = back.rounds[r].size() == workers.size();
    for (std::size_t i = 0; same && i < workers.size(); ++i) {
      same = back.rounds[r][i] == workers[i].text;
    }
  }
  if (!same) {
    throw TranscriptError(Kind::InvalidStructure, 0,
                          "segment text would be read as markup or as an EOS marker");
  }
}

std::string render_transcript(const Transcript& t, const TagConfig& tags) {
  std::string out;
  for (std::size_t j = 0; j < t.directors.size(); ++j) {
    out += t.directors[j].text;
    if (j >= t.rounds.size()) break;
    out += tags.spawn_open;
    for (const Segment& w : t.rounds[j].workers) {
      const std::size_t i = w.worker_index.value_or(0);
      out += tags.worker_open(i);
      out += w.text;
      out += tags.worker_close(i);
    }
    out += tags.spawn_close;
  }
  if (t.terminated == Termination::Eos) out += tags.eos_marker;
  return out;
}

Transcript parse_transcript(std::string_view text, const TagConfig& tags,
                            const TokenCounter& counter, std::string prompt) {
  Skeleton sk = parse_skeleton(text, tags);
  return make_transcript(std::move(prompt), sk.directors, sk.rounds, sk.terminated, counter);
}

FormatReport validate_format(std::string_view text, const TagConfig& tags) {
  FormatReport report;
  report.tags_balanced = true;
  report.tags_nested = true;

  auto nested_violation = [&](std::size_t at, const std::string& msg) {
    report.tags_nested = false;
    report.violations.push_back("offset " + std::to_string(at) + ": " + msg);
  };
  auto balance_violation = [&](std::size_t at, const std::string& msg) {
    report.tags_balanced = false;
    report.violations.push_back("offset " + std::to_string(at) + ": " + msg);
  };

  struct Open {
    bool spawn;
    std::size_t worker;
    std::size_t offset;
    std::size_t workers_seen;
  };
  std::vector<Open> stack;
  std::size_t last_end = 0;

  auto find_open = [&](bool spawn, std::size_t worker) {
    for (std::size_t k = stack.size(); k-- > 0;) {
      if (stack[k].spawn == spawn && (spawn || stack[k].worker == worker)) return k;
    }
    return stack.size();
  };

  for (const TagToken& tok : lex_tags(tags, text)) {
    const std::string tag = describe(tags, tok);
    const bool in_worker = !stack.empty() && !stack.back().spawn;
    if (tok.kind == TagKind::SpawnOpen && in_worker) continue;  // literal

    const bool in_spawn = !stack.empty() && stack.back().spawn;
    if (in_spawn && tok.begin > last_end) {
      nested_violation(last_end, "text between worker blocks");
    }
    last_end = tok.end;

    switch (tok.kind) {
      case TagKind::SpawnOpen:
        if (in_spawn) {
          nested_violation(tok.begin, tag + " inside a spawn block");
        } else {
          report.spawned_workers = true;
        }
        stack.push_back({true, 0, tok.begin, 0});
        break;

      case TagKind::WorkerOpen:
        if (in_spawn) {
          Open& top = stack.back();
          if (tok.worker != top.workers_seen + 1) {
            nested_violation(tok.begin, "expected " + tags.worker_open(top.workers_seen + 1) +
                                            ", found " + tag);
          }
          top.workers_seen = tok.worker;
        } else if (in_worker) {
          nested_violation(tok.begin, tag + " inside " + tags.worker_open(stack.back().worker));
        } else {
          nested_violation(tok.begin, tag + " outside a spawn block");
        }
        stack.push_back({false, tok.worker, tok.begin, 0});
        break;

      case TagKind::WorkerClose: {
        if (in_worker && stack.back().worker == tok.worker) {
          stack.pop_back();
          break;
        }
        const std::size_t k = find_open(false, tok.worker);
        if (k < stack.size()) {
          nested_violation(tok.begin, tag + " crosses another open tag");
          stack.erase(stack.begin() + static_cast<std::ptrdiff_t>(k));
        } else {
          balance_violation(tok.begin, tag + " closes nothing");
        }
        break;
      }

      case TagKind::SpawnClose: {
        if (in_spawn) {
          if (stack.back().workers_seen == 0) {
            nested_violation(tok.begin, "spawn block without workers");
          }
          stack.pop_back();
          break;
        }
        const std::size_t k = find_open(true, 0);
        if (k < stack.size()) {
          nested_violation(tok.begin, tag + " crosses another open tag");
          stack.erase(stack.begin() + static_cast<std::ptrdiff_t>(k));
        } else {
          balance_violation(tok.begin, tag + " closes nothing");
        }
        break;
      }
    }
  }

  for (const Open& open : stack) {
    balance_violation(open.offset, (open.spawn ? tags.spawn_open : tags.worker_open(open.worker)) +
                                       " never closed");
  }
  if (!report.spawned_workers) report.violations.push_back("response never spawns workers");
  report.format_ok = report.spawned_workers && report.tags_balanced && report.tags_nested;
  return report;
}

FormatReport validate_format(const Transcript& t, const TagConfig& tags) {
  return validate_format(render_transcript(t, tags), tags);
}

std::size_t longest_path_length(const Transcript& t) {
  std::size_t lpl = 0;
  for (const Segment& d : t.directors) lpl += d.length;
  for (const SpawnRound& r : t.rounds) {
    std::size_t longest = 0;
    for (const Segment& w : r.workers) longest = std::max(longest, w.length);
    lpl += longest;
  }
  return lpl;
}

std::size_t total_tokens(const Transcript& t) {
  std::size_t total = 0;
  for (const Segment& d : t.directors) total += d.length;
  for (const SpawnRound& r : t.rounds) {
    for (const Segment& w : r.workers) total += w.length;
  }
  return total;
}

double degree_of_parallelism(const Transcript& t) {
  const std::size_t lpl = longest_path_length(t);
  if (lpl == 0) throw ZeroLengthError("degree of parallelism is undefined for an empty response");
  return static_cast<double>(total_tokens(t)) / static_cast<double>(lpl);
}

}  // namespace dccot
