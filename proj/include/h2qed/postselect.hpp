// Copyright 2026 The h2qed Authors
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

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "h2qed/builders.hpp"
#include "h2qed/shot_table.hpp"

namespace h2qed {

/// NONE keeps every shot; PSA drops a1 = 1; PSP drops odd data parity;
/// PSAP drops either.
enum class Strategy { None, PSA, PSP, PSAP };

inline std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::None: return "NONE";
    case Strategy::PSA: return "PSA";
    case Strategy::PSP: return "PSP";
    case Strategy::PSAP: return "PSAP";
  }
  return "?";
}

inline Strategy parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::None, Strategy::PSA, Strategy::PSP, Strategy::PSAP}) {
    if (strategy_name(s) == name) return s;
  }
  throw std::invalid_argument("unknown post-selection strategy '" + std::string(name) + "'");
}

struct SurvivalStats {
  double eta = 1.0;
  double sigma_eta = 0.0;
  double n_before = 0.0;
  double n_after = 0.0;

  static SurvivalStats from_counts(double before, double after) {
    SurvivalStats s;
    s.n_before = before;
    s.n_after = after;
    s.eta = before > 0 ? after / before : 0.0;
    s.sigma_eta = before > 0 ? std::sqrt(s.eta * (1.0 - s.eta) / before) : 0.0;
    return s;
  }
};

/// Rows whose a2 outcome equals `branch`.
template <class W>
OutcomeTable<W> select_a2_branch(const OutcomeTable<W>& table, int branch) {
  if (branch != 0 && branch != 1) throw std::invalid_argument("select_a2_branch: branch must be 0 or 1");
  const int c = table.find_column("a2");
  if (c < 0) throw std::invalid_argument("select_a2_branch: table has no a2 column");
  return table.filter([&](const Bitstring& b) { return b[static_cast<std::size_t>(c)] == branch; });
}

/// Filters an a2-selected table; eta is relative to that table's total.
template <class W>
std::pair<OutcomeTable<W>, SurvivalStats> apply_strategy(const OutcomeTable<W>& table, Strategy s) {
  if (table.empty()) throw EmptySelectionError("apply_strategy: input table is empty");
  const double before = static_cast<double>(table.total());
  if (s == Strategy::None) return {table, SurvivalStats::from_counts(before, before)};
  const bool check_a1 = s == Strategy::PSA || s == Strategy::PSAP;
  const bool check_parity = s == Strategy::PSP || s == Strategy::PSAP;
  const int a1 = check_a1 ? table.column("a1") : -1;
  std::vector<int> data;
  if (check_parity) {
    for (int k = 0; k < 4; ++k) data.push_back(table.column("q" + std::to_string(k)));
  }
  auto out = table.filter([&](const Bitstring& b) {
    if (check_a1 && b[static_cast<std::size_t>(a1)] == 1) return false;
    if (check_parity) {
      int p = 0;
      for (int c : data) p ^= b[static_cast<std::size_t>(c)];
      if (p) return false;
    }
    return true;
  });
  const double after = static_cast<double>(out.total());
  return {std::move(out), SurvivalStats::from_counts(before, after)};
}

/// Unanimous vote over each repetition triple. Surviving rows keep one bit per
/// triple, so the output has the column layout of the unwrapped circuit.
/// Survival is relative to the raw total.
template <class W>
std::pair<OutcomeTable<W>, SurvivalStats> red_vote(const OutcomeTable<W>& raw, const RedLayout& layout) {
  if (layout.triples.empty()) throw std::invalid_argument("red_vote: empty layout");
  const auto n_cols = static_cast<int>(raw.columns().size());
  std::vector<std::string> cols;
  for (const auto& t : layout.triples) {
    for (int q : {t.qubit, t.readout_a, t.readout_b}) {
      if (q < 0 || q >= n_cols) throw std::invalid_argument("red_vote: layout does not match table columns");
    }
    cols.push_back(raw.columns()[static_cast<std::size_t>(t.qubit)]);
  }
  if (static_cast<int>(layout.triples.size()) * 3 != n_cols) {
    throw std::invalid_argument("red_vote: layout does not cover every measured column");
  }
  OutcomeTable<W> out(std::move(cols), raw.basis(), raw.seed());
  std::string collapsed(layout.triples.size(), '0');
  for (const auto& [bits, w] : raw.entries()) {
    bool keep = true;
    for (std::size_t k = 0; k < layout.triples.size() && keep; ++k) {
      const auto& t = layout.triples[k];
      const int v = bits[static_cast<std::size_t>(t.qubit)];
      keep = bits[static_cast<std::size_t>(t.readout_a)] == v && bits[static_cast<std::size_t>(t.readout_b)] == v;
      collapsed[k] = static_cast<char>('0' + v);
    }
    if (keep) out.add(Bitstring(collapsed), w);
  }
  const auto stats = SurvivalStats::from_counts(static_cast<double>(raw.total()), static_cast<double>(out.total()));
  return {std::move(out), stats};
}

}  // namespace h2qed
