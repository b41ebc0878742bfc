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

#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "h2qed/bitstring.hpp"
#include "h2qed/circuit.hpp"

namespace h2qed {

/// Thrown when a filter leaves nothing to estimate from.
class EmptySelectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Outcome table keyed by measured bitstrings. Columns are qubit role names in
/// measurement order. `Weight` is an integer count for sampled shots or a
/// probability for exact distributions.
template <class Weight>
class OutcomeTable {
 public:
  using Map = std::map<Bitstring, Weight>;

  OutcomeTable() = default;
  OutcomeTable(std::vector<std::string> columns, MeasurementBasis basis = MeasurementBasis::Z,
               std::uint64_t seed = 0)
      : columns_(std::move(columns)), basis_(basis), seed_(seed) {}

  /// Columns named after the measured qubits of `c`, in ascending qubit order.
  static OutcomeTable for_circuit(const Circuit& c, std::uint64_t seed = 0) {
    std::vector<std::string> cols;
    for (int q : c.measured_qubits()) cols.push_back(c.roles()[static_cast<std::size_t>(q)].name());
    return OutcomeTable(std::move(cols), c.basis(), seed);
  }

  void add(const Bitstring& bits, Weight w = Weight{1}) {
    if (bits.size() != columns_.size()) {
      throw std::invalid_argument("OutcomeTable::add: bitstring length " + std::to_string(bits.size()) +
                                  " does not match " + std::to_string(columns_.size()) + " columns");
    }
    if (w == Weight{0}) return;
    entries_[bits] += w;
    total_ += w;
  }

  void merge(const OutcomeTable& other) {
    if (other.columns_ != columns_) throw std::invalid_argument("OutcomeTable::merge: column layouts differ");
    for (const auto& [bits, w] : other.entries_) add(bits, w);
  }

  const Map& entries() const { return entries_; }
  Weight total() const { return total_; }
  bool empty() const { return entries_.empty(); }
  const std::vector<std::string>& columns() const { return columns_; }
  MeasurementBasis basis() const { return basis_; }
  std::uint64_t seed() const { return seed_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  Weight weight(std::string_view bits) const {
    auto it = entries_.find(Bitstring(bits));
    return it == entries_.end() ? Weight{0} : it->second;
  }

  bool has_column(std::string_view name) const { return find_column(name) >= 0; }

  int find_column(std::string_view name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (columns_[i] == name) return static_cast<int>(i);
    }
    return -1;
  }

  int column(std::string_view name) const {
    const int c = find_column(name);
    if (c < 0) throw std::out_of_range("outcome table has no column '" + std::string(name) + "'");
    return c;
  }

  /// Rows for which `keep` returns true; layout unchanged.
  OutcomeTable filter(const std::function<bool(const Bitstring&)>& keep) const {
    OutcomeTable out(columns_, basis_, seed_);
    for (const auto& [bits, w] : entries_) {
      if (keep(bits)) out.add(bits, w);
    }
    return out;
  }

  bool operator==(const OutcomeTable& o) const {
    return columns_ == o.columns_ && basis_ == o.basis_ && entries_ == o.entries_;
  }

 private:
  std::vector<std::string> columns_;
  MeasurementBasis basis_ = MeasurementBasis::Z;
  std::uint64_t seed_ = 0;
  Map entries_;
  Weight total_{0};
};

using ShotTable = OutcomeTable<std::uint64_t>;
using ProbabilityTable = OutcomeTable<double>;

/// One column per measured qubit plus a trailing count, rows in bitstring order.
inline std::string to_csv(const ShotTable& t) {
  std::ostringstream os;
  for (const auto& c : t.columns()) os << c << ',';
  os << "count\n";
  for (const auto& [bits, n] : t.entries()) {
    for (std::size_t k = 0; k < bits.size(); ++k) os << bits[k] << ',';
    os << n << '\n';
  }
  return os.str();
}

inline ShotTable shot_table_from_csv(std::string_view text, MeasurementBasis basis = MeasurementBasis::Z,
                                     std::uint64_t seed = 0) {
  std::istringstream is{std::string(text)};
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("shot CSV: missing header");
  std::vector<std::string> cols;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) cols.push_back(cell);
  }
  if (cols.empty() || cols.back() != "count") throw std::invalid_argument("shot CSV: last column must be 'count'");
  cols.pop_back();
  ShotTable t(cols, basis, seed);
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell, bits;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != cols.size() + 1) {
      throw std::invalid_argument("shot CSV line " + std::to_string(line_no) + ": wrong number of fields");
    }
    for (std::size_t k = 0; k < cols.size(); ++k) bits += cells[k];
    t.add(Bitstring(bits), std::stoull(cells.back()));
  }
  return t;
}

}  // namespace h2qed
