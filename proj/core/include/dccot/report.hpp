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

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dccot::eval {

// One benchmark result: accuracy in percent and mean longest path length.
struct Cell {
  double acc = 0.0;
  double lpl = 0.0;
};

struct MethodRow {
  std::string name;
  std::map<std::string, Cell> results;  // keyed by benchmark
};

struct Comparison {
  std::string method;
  std::string baseline;
};

struct ResultsTable {
  std::vector<std::string> benchmarks;  // column order
  std::vector<MethodRow> methods;
  std::vector<Comparison> comparisons;

  // Throws Error if no method has this name.
  const MethodRow& method(const std::string& name) const;
};

// Accuracy change in points and LPL change in percent of the baseline.
struct Delta {
  double acc_points = 0.0;
  double lpl_percent = 0.0;
};

struct DeltaRow {
  std::string method;
  std::string baseline;
  std::vector<std::optional<Delta>> cells;  // per benchmark; empty if either side lacks it
};

std::vector<DeltaRow> compute_deltas(const ResultsTable& table);

// Aligned text, one row per method: Acc (%) and LPL per benchmark.
std::string render_results_table(const ResultsTable& table);

// Aligned text, one row per comparison: "+1.67" and "-37.4%" style cells.
std::string render_delta_table(const ResultsTable& table, const std::vector<DeltaRow>& deltas);

}  // namespace dccot::eval
