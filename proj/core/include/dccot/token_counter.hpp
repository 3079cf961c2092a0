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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace dccot {

// Measures text in "tokens". Implementations must be deterministic and safe
// to call concurrently. Segment lengths, budgets and position IDs are all
// expressed in these units.
class TokenCounter {
 public:
  virtual ~TokenCounter() = default;

  virtual std::size_t count(std::string_view text) const = 0;

  // Counters that know token boundaries return true and implement split().
  virtual bool can_split() const { return false; }

  // The tokens of `text` as views into it, in order. The default throws.
  virtual std::vector<std::string_view> split(std::string_view text) const;

  // The shortest prefix of `text` that contains its first `max_tokens`
  // tokens; the whole text when it has no more than that. Requires
  // can_split().
  std::string_view truncate(std::string_view text, std::size_t max_tokens) const;

  virtual std::string name() const = 0;
};

// Tokens are maximal runs of non-whitespace bytes (space, \t, \n, \v, \f, \r).
class WhitespaceCounter final : public TokenCounter {
 public:
  std::size_t count(std::string_view text) const override;
  bool can_split() const override { return true; }
  std::vector<std::string_view> split(std::string_view text) const override;
  std::string name() const override { return "whitespace"; }
};

// One token per UTF-8 code point; a stray continuation or truncated lead
// byte counts as one token on its own.
class CharCounter final : public TokenCounter {
 public:
  std::size_t count(std::string_view text) const override;
  bool can_split() const override { return true; }
  std::vector<std::string_view> split(std::string_view text) const override;
  std::string name() const override { return "chars"; }
};

// Delegates to an external tokenizer: the shell command receives the text on
// stdin and must print a single non-negative integer.
class CommandCounter final : public TokenCounter {
 public:
  explicit CommandCounter(std::string command);
  std::size_t count(std::string_view text) const override;
  std::string name() const override { return "cmd:" + command_; }

 private:
  std::string command_;
};

// "whitespace", "chars" or "cmd:<shell command>".
std::shared_ptr<const TokenCounter> make_token_counter(std::string_view name);

}  // namespace dccot
