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

#include "dccot/tags.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>
#include <set>

#include "dccot/error.hpp"

namespace dccot {

namespace {

constexpr std::string_view kIndexPlaceholder = "{i}";

struct SplitTemplate {
  std::string_view prefix;
  std::string_view suffix;
};

SplitTemplate split_template(std::string_view tmpl) {
  const auto at = tmpl.find(kIndexPlaceholder);
  return {tmpl.substr(0, at), tmpl.substr(at + kIndexPlaceholder.size())};
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

void validate_template(std::string_view name, std::string_view tmpl) {
  const auto first = tmpl.find(kIndexPlaceholder);
  if (first == std::string_view::npos ||
      tmpl.find(kIndexPlaceholder, first + 1) != std::string_view::npos) {
    throw ConfigError(std::string(name) + " must contain \"{i}\" exactly once");
  }
  const auto [prefix, suffix] = split_template(tmpl);
  if (prefix.empty() || suffix.empty()) {
    throw ConfigError(std::string(name) + " needs text on both sides of \"{i}\"");
  }
  if (is_digit(prefix.back()) || is_digit(suffix.front())) {
    throw ConfigError(std::string(name) + " must not have digits adjacent to \"{i}\"");
  }
}

std::string expand(std::string_view tmpl, std::size_t i) {
  const auto [prefix, suffix] = split_template(tmpl);
  std::string out;
  out.reserve(prefix.size() + suffix.size() + 4);
  out.append(prefix).append(std::to_string(i)).append(suffix);
  return out;
}

// Length of a worker tag starting at `at`, or 0. Fills `index`.
std::size_t match_worker(std::string_view text, std::size_t at, SplitTemplate t,
                         std::size_t& index) {
  if (text.compare(at, t.prefix.size(), t.prefix) != 0) return 0;
  std::size_t pos = at + t.prefix.size();
  if (pos >= text.size() || text[pos] < '1' || text[pos] > '9') return 0;
  std::size_t value = 0;
  std::size_t digits = 0;
  while (pos < text.size() && is_digit(text[pos])) {
    if (++digits > 18) return 0;
    value = value * 10 + static_cast<std::size_t>(text[pos] - '0');
    ++pos;
  }
  if (text.compare(pos, t.suffix.size(), t.suffix) != 0) return 0;
  index = value;
  return pos + t.suffix.size() - at;
}

}  // namespace

std::string TagConfig::worker_open(std::size_t i) const {
  return expand(worker_open_template, i);
}

std::string TagConfig::worker_close(std::size_t i) const {
  return expand(worker_close_template, i);
}

void TagConfig::validate() const {
  const std::array<std::pair<std::string_view, const std::string*>, 3> literals{{
      {"spawn_open", &spawn_open},
      {"spawn_close", &spawn_close},
      {"eos_marker", &eos_marker},
  }};
  for (const auto& [name, value] : literals) {
    if (value->empty()) throw ConfigError(std::string(name) + " must not be empty");
  }
  validate_template("worker_open", worker_open_template);
  validate_template("worker_close", worker_close_template);

  if (worker_open_template == worker_close_template) {
    throw ConfigError("worker_open and worker_close templates must differ");
  }
  std::set<std::string_view> seen;
  for (const auto& [name, value] : literals) {
    if (!seen.insert(*value).second) {
      throw ConfigError("tag " + std::string(name) + " duplicates another tag");
    }
  }
  // A literal tag that itself lexes as a worker tag would be ambiguous.
  for (const auto& [name, value] : literals) {
    std::size_t index = 0;
    const std::string_view v = *value;
    if (match_worker(v, 0, split_template(worker_open_template), index) == v.size() ||
        match_worker(v, 0, split_template(worker_close_template), index) == v.size()) {
      throw ConfigError("tag " + std::string(name) + " collides with a worker tag");
    }
  }
}

std::vector<TagToken> lex_tags(const TagConfig& tags, std::string_view text) {
  struct Pattern {
    std::string_view needle;
    TagKind kind;
    bool templated;
    SplitTemplate tmpl;
  };
  const SplitTemplate open_t = split_template(tags.worker_open_template);
  const SplitTemplate close_t = split_template(tags.worker_close_template);
  const std::array<Pattern, 4> patterns{{
      {tags.spawn_open, TagKind::SpawnOpen, false, {}},
      {tags.spawn_close, TagKind::SpawnClose, false, {}},
      {open_t.prefix, TagKind::WorkerOpen, true, open_t},
      {close_t.prefix, TagKind::WorkerClose, true, close_t},
  }};

  constexpr auto npos = std::string_view::npos;
  std::array<std::size_t, 4> next{};
  for (std::size_t k = 0; k < patterns.size(); ++k) next[k] = text.find(patterns[k].needle);

  std::vector<TagToken> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t at = *std::min_element(next.begin(), next.end());
    if (at == npos) break;

    TagToken best{};
    std::size_t best_len = 0;
    for (std::size_t k = 0; k < patterns.size(); ++k) {
      if (next[k] != at) continue;
      const Pattern& p = patterns[k];
      std::size_t len = 0;
      std::size_t index = 0;
      if (p.templated) {
        len = match_worker(text, at, p.tmpl, index);
      } else {
        len = p.needle.size();
      }
      if (len > best_len) {
        best_len = len;
        best = TagToken{p.kind, index, at, at + len};
      }
    }

    if (best_len > 0) {
      out.push_back(best);
      pos = best.end;
    } else {
      pos = at + 1;
    }
    for (std::size_t k = 0; k < patterns.size(); ++k) {
      if (next[k] != npos && next[k] < pos) next[k] = text.find(patterns[k].needle, pos);
    }
  }
  return out;
}

std::string_view to_string(TagKind kind) {
  switch (kind) {
    case TagKind::SpawnOpen: return "spawn_open";
    case TagKind::SpawnClose: return "spawn_close";
    case TagKind::WorkerOpen: return "worker_open";
    case TagKind::WorkerClose: return "worker_close";
  }
  return "?";
}

}  // namespace dccot
