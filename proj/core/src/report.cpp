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

#include "dccot/report.hpp"

#include <algorithm>
#include <cstdio>

#include "dccot/error.hpp"

namespace dccot::eval {

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

// Left-aligns the first column and right-aligns the rest.
std::string align(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::string pad(width[c] - row[c].size(), ' ');
      if (c > 0) line += "  ";
      line += c == 0 ? row[c] + pad : pad + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  return out;
}

}  // namespace

const MethodRow& ResultsTable::method(const std::string& name) const {
  for (const MethodRow& m : methods) {
    if (m.name == name) return m;
  }
  throw Error("results table has no method '" + name + "'");
}

std::vector<DeltaRow> compute_deltas(const ResultsTable& table) {
  std::vector<DeltaRow> out;
  for (const Comparison& cmp : table.comparisons) {
    const MethodRow& m = table.method(cmp.method);
    const MethodRow& b = table.method(cmp.baseline);
    DeltaRow row{cmp.method, cmp.baseline, {}};
    for (const std::string& bench : table.benchmarks) {
      const auto mi = m.results.find(bench);
      const auto bi = b.results.find(bench);
      if (mi == m.results.end() || bi == b.results.end() || bi->second.lpl == 0.0) {
        row.cells.emplace_back();
        continue;
      }
      row.cells.push_back(Delta{mi->second.acc - bi->second.acc,
                                (mi->second.lpl - bi->second.lpl) / bi->second.lpl * 100.0});
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string render_results_table(const ResultsTable& table) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head{"Method"};
  for (const std::string& b : table.benchmarks) {
    head.push_back(b + " Acc (%)");
    head.push_back(b + " LPL");
  }
  rows.push_back(head);
  for (const MethodRow& m : table.methods) {
    std::vector<std::string> row{m.name};
    for (const std::string& b : table.benchmarks) {
      const auto it = m.results.find(b);
      row.push_back(it == m.results.end() ? "-" : fmt("%.2f", it->second.acc));
      row.push_back(it == m.results.end() ? "-" : fmt("%.0f", it->second.lpl));
    }
    rows.push_back(std::move(row));
  }
  return align(rows);
}

std::string render_delta_table(const ResultsTable& table, const std::vector<DeltaRow>& deltas) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head{"Method", "Baseline"};
  for (const std::string& b : table.benchmarks) {
    head.push_back(b + " Acc");
    head.push_back(b + " LPL");
  }
  rows.push_back(head);
  for (const DeltaRow& d : deltas) {
    std::vector<std::string> row{d.method, d.baseline};
    for (const auto& cell : d.cells) {
      row.push_back(cell ? fmt("%+.2f", cell->acc_points) : "-");
      row.push_back(cell ? fmt("%+.1f%%", cell->lpl_percent) : "-");
    }
    rows.push_back(std::move(row));
  }
  return align(rows);
}

}  // namespace dccot::eval
