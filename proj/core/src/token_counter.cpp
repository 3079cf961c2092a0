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

#include "dccot/token_counter.hpp"

#include <cctype>
#include <charconv>

#include "dccot/error.hpp"
#include "dccot/subprocess.hpp"

namespace dccot {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' || c == '\r';
}

// Byte length of the UTF-8 sequence starting at text[i]; 1 for anything
// malformed so that every byte is accounted for exactly once.
std::size_t utf8_length(std::string_view text, std::size_t i) {
  const auto lead = static_cast<unsigned char>(text[i]);
  std::size_t need = 1;
  if (lead >= 0xF0 && lead <= 0xF4) {
    need = 4;
  } else if (lead >= 0xE0) {
    need = lead <= 0xEF ? 3 : 1;
  } else if (lead >= 0xC2) {
    need = 2;
  }
  if (need == 1 || i + need > text.size()) return 1;
  for (std::size_t k = 1; k < need; ++k) {
    if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) return 1;
  }
  return need;
}

}  // namespace

std::vector<std::string_view> TokenCounter::split(std::string_view) const {
  throw Error("token counter '" + name() + "' cannot split text into tokens");
}

std::string_view TokenCounter::truncate(std::string_view text,
                                        std::size_t max_tokens) const {
  const auto tokens = split(text);
  if (tokens.size() <= max_tokens) return text;
  if (max_tokens == 0) return text.substr(0, 0);
  const std::string_view last = tokens[max_tokens - 1];
  const auto end = static_cast<std::size_t>(last.data() - text.data()) + last.size();
  return text.substr(0, end);
}

std::size_t WhitespaceCounter::count(std::string_view text) const {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = is_space(c);
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

std::vector<std::string_view> WhitespaceCounter::split(std::string_view text) const {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

std::size_t CharCounter::count(std::string_view text) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < text.size(); i += utf8_length(text, i)) ++n;
  return n;
}

std::vector<std::string_view> CharCounter::split(std::string_view text) const {
  std::vector<std::string_view> out;
  for (std::size_t i = 0; i < text.size();) {
    const std::size_t len = utf8_length(text, i);
    out.push_back(text.substr(i, len));
    i += len;
  }
  return out;
}

CommandCounter::CommandCounter(std::string command) : command_(std::move(command)) {
  if (command_.empty()) throw ConfigError("token counter command must not be empty");
}

std::size_t CommandCounter::count(std::string_view text) const {
  const std::string out = run_command(command_, text);
  std::size_t begin = 0;
  while (begin < out.size() && is_space(out[begin])) ++begin;
  std::size_t end = out.size();
  while (end > begin && is_space(out[end - 1])) --end;
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(out.data() + begin, out.data() + end, value);
  if (ec != std::errc{} || ptr != out.data() + end || begin == end) {
    throw Error("token counter command '" + command_ + "' printed '" + out +
                "', expected a non-negative integer");
  }
  return value;
}

std::shared_ptr<const TokenCounter> make_token_counter(std::string_view name) {
  if (name == "whitespace") return std::make_shared<WhitespaceCounter>();
  if (name == "chars") return std::make_shared<CharCounter>();
  if (name.starts_with("cmd:")) {
    return std::make_shared<CommandCounter>(std::string(name.substr(4)));
  }
  throw ConfigError("unknown token counter '" + std::string(name) +
                    "' (expected whitespace, chars or cmd:<command>)");
}

}  // namespace dccot
