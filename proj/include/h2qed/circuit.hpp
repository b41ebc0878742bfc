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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace h2qed {

enum class GateKind { H, X, Y, Z, S, RY, RZ, CNOT, SWAP, MEASURE_Z, RESET };

inline std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::S: return "S";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::SWAP: return "SWAP";
    case GateKind::MEASURE_Z: return "MEASURE_Z";
    case GateKind::RESET: return "RESET";
  }
  return "?";
}

inline GateKind parse_gate_kind(std::string_view name) {
  for (GateKind k : {GateKind::H, GateKind::X, GateKind::Y, GateKind::Z, GateKind::S, GateKind::RY,
                     GateKind::RZ, GateKind::CNOT, GateKind::SWAP, GateKind::MEASURE_Z,
                     GateKind::RESET}) {
    if (gate_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown gate kind '" + std::string(name) + "'");
}

inline bool is_parameterized(GateKind k) { return k == GateKind::RY || k == GateKind::RZ; }
inline bool is_two_qubit(GateKind k) { return k == GateKind::CNOT || k == GateKind::SWAP; }
inline bool is_unitary(GateKind k) { return k != GateKind::MEASURE_Z && k != GateKind::RESET; }

/// Gates that map computational basis states to phased basis states. Their
/// action on Z-basis outcome statistics is a classical bit permutation.
inline bool is_classical_compatible(GateKind k) {
  switch (k) {
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Z:
    case GateKind::S:
    case GateKind::RZ:
    case GateKind::CNOT:
    case GateKind::SWAP:
    case GateKind::MEASURE_Z:
      return true;
    default:
      return false;
  }
}

struct Gate {
  GateKind kind = GateKind::H;
  /// CNOT: {target}; SWAP: {a, b}; everything else: {qubit}.
  std::vector<int> targets;
  std::optional<int> control;
  double angle = 0.0;

  static Gate single(GateKind k, int q, double angle = 0.0) { return Gate{k, {q}, std::nullopt, angle}; }
  static Gate h(int q) { return single(GateKind::H, q); }
  static Gate x(int q) { return single(GateKind::X, q); }
  static Gate y(int q) { return single(GateKind::Y, q); }
  static Gate z(int q) { return single(GateKind::Z, q); }
  static Gate s(int q) { return single(GateKind::S, q); }
  static Gate ry(int q, double theta) { return single(GateKind::RY, q, theta); }
  static Gate rz(int q, double theta) { return single(GateKind::RZ, q, theta); }
  static Gate measure(int q) { return single(GateKind::MEASURE_Z, q); }
  static Gate reset(int q) { return single(GateKind::RESET, q); }
  static Gate cnot(int c, int t) { return Gate{GateKind::CNOT, {t}, c, 0.0}; }
  static Gate swap(int a, int b) { return Gate{GateKind::SWAP, {a, b}, std::nullopt, 0.0}; }

  /// Control first (if any), then targets.
  std::vector<int> qubits() const {
    std::vector<int> out;
    if (control) out.push_back(*control);
    out.insert(out.end(), targets.begin(), targets.end());
    return out;
  }

  int arity() const { return static_cast<int>(qubits().size()); }

  /// Throws std::invalid_argument / std::out_of_range on a malformed gate.
  void validate(int n_qubits) const {
    const auto qs = qubits();
    const std::size_t want = is_two_qubit(kind) ? 2 : 1;
    if (qs.size() != want) {
      throw std::invalid_argument(std::string(gate_name(kind)) + ": wrong number of qubits");
    }
    if (kind == GateKind::CNOT && !control) {
      throw std::invalid_argument("CNOT requires a control qubit");
    }
    if (kind != GateKind::CNOT && control) {
      throw std::invalid_argument(std::string(gate_name(kind)) + " takes no control qubit");
    }
    for (int q : qs) {
      if (q < 0 || q >= n_qubits) {
        throw std::out_of_range(std::string(gate_name(kind)) + ": qubit " + std::to_string(q) +
                                " out of range for " + std::to_string(n_qubits) + " qubits");
      }
    }
    if (qs.size() == 2 && qs[0] == qs[1]) {
      throw std::invalid_argument(std::string(gate_name(kind)) + ": qubits must be distinct");
    }
    if (!std::isfinite(angle)) {
      throw std::invalid_argument(std::string(gate_name(kind)) + ": angle is not finite");
    }
    if (!is_parameterized(kind) && angle != 0.0) {
      throw std::invalid_argument(std::string(gate_name(kind)) + " takes no angle");
    }
  }

  bool operator==(const Gate&) const = default;
};

enum class Role { Data, AncillaA1, AncillaA2, RedReadout, SyndromeX, SyndromeZ };

struct QubitRole {
  Role role = Role::Data;
  int index = 0;

  std::string name() const {
    switch (role) {
      case Role::Data: return "q" + std::to_string(index);
      case Role::AncillaA1: return "a1";
      case Role::AncillaA2: return "a2";
      case Role::RedReadout: return "r" + std::to_string(index);
      case Role::SyndromeX: return "sX";
      case Role::SyndromeZ: return "sZ";
    }
    return "?";
  }

  static QubitRole parse(std::string_view s) {
    if (s == "a1") return {Role::AncillaA1, 1};
    if (s == "a2") return {Role::AncillaA2, 2};
    if (s == "sX") return {Role::SyndromeX, 0};
    if (s == "sZ") return {Role::SyndromeZ, 0};
    if (s.size() >= 2 && (s[0] == 'q' || s[0] == 'r')) {
      const int idx = std::stoi(std::string(s.substr(1)));
      return {s[0] == 'q' ? Role::Data : Role::RedReadout, idx};
    }
    throw std::invalid_argument("unknown qubit role '" + std::string(s) + "'");
  }

  bool operator==(const QubitRole&) const = default;
};

enum class MeasurementBasis { Z, X };

inline std::string_view basis_name(MeasurementBasis b) { return b == MeasurementBasis::Z ? "Z" : "X"; }

/// Ordered gate list over role-tagged qubits. Measurements are terminal: once
/// a qubit is measured no further gate may touch it.
class Circuit {
 public:
  Circuit() = default;

  Circuit(int n_qubits, std::vector<QubitRole> roles, std::string label = {},
          MeasurementBasis basis = MeasurementBasis::Z)
      : n_qubits_(n_qubits), roles_(std::move(roles)), label_(std::move(label)), basis_(basis),
        measured_(static_cast<std::size_t>(n_qubits), false) {
    if (n_qubits < 1) throw std::invalid_argument("Circuit: need at least one qubit");
    if (static_cast<int>(roles_.size()) != n_qubits) {
      throw std::invalid_argument("Circuit: one role per qubit required");
    }
  }

  /// Circuit with data roles q0..q{n-1}.
  static Circuit data_only(int n_qubits, std::string label = {}) {
    std::vector<QubitRole> roles;
    for (int i = 0; i < n_qubits; ++i) roles.push_back({Role::Data, i});
    return Circuit(n_qubits, std::move(roles), std::move(label));
  }

  Circuit& append(const Gate& g) {
    g.validate(n_qubits_);
    for (int q : g.qubits()) {
      if (measured_[static_cast<std::size_t>(q)]) {
        throw std::invalid_argument(std::string(gate_name(g.kind)) + " on qubit " + std::to_string(q) +
                                    " after its terminal measurement");
      }
    }
    if (g.kind == GateKind::MEASURE_Z) measured_[static_cast<std::size_t>(g.targets[0])] = true;
    ops_.push_back(g);
    return *this;
  }

  Circuit& measure_all() {
    for (int q = 0; q < n_qubits_; ++q) {
      if (!measured_[static_cast<std::size_t>(q)]) append(Gate::measure(q));
    }
    return *this;
  }

  int n_qubits() const { return n_qubits_; }
  const std::vector<Gate>& ops() const { return ops_; }
  const std::vector<QubitRole>& roles() const { return roles_; }
  const std::string& label() const { return label_; }
  MeasurementBasis basis() const { return basis_; }
  void set_label(std::string label) { label_ = std::move(label); }

  bool is_measured(int q) const { return measured_.at(static_cast<std::size_t>(q)); }

  /// Measured qubits in ascending qubit order; this is the shot column order.
  std::vector<int> measured_qubits() const {
    std::vector<int> out;
    for (int q = 0; q < n_qubits_; ++q) {
      if (measured_[static_cast<std::size_t>(q)]) out.push_back(q);
    }
    return out;
  }

  /// First qubit carrying the given role name, or -1.
  int find_qubit(std::string_view role_name) const {
    for (int q = 0; q < n_qubits_; ++q) {
      if (roles_[static_cast<std::size_t>(q)].name() == role_name) return q;
    }
    return -1;
  }

  /// Copy with `g` inserted before op index `pos` (pos == size appends).
  Circuit with_inserted(std::size_t pos, const Gate& g) const {
    if (pos > ops_.size()) throw std::out_of_range("Circuit::with_inserted: position past end");
    Circuit out(n_qubits_, roles_, label_, basis_);
    for (std::size_t i = 0; i <= ops_.size(); ++i) {
      if (i == pos) out.append(g);
      if (i < ops_.size()) out.append(ops_[i]);
    }
    return out;
  }

  /// Circuit without its measurement ops (unitary part only).
  Circuit without_measurements() const {
    Circuit out(n_qubits_, roles_, label_, basis_);
    for (const auto& g : ops_) {
      if (g.kind != GateKind::MEASURE_Z) out.append(g);
    }
    return out;
  }

  /// Line format: a QUBITS header naming every role, then one gate per line
  /// as `KIND qubits [angle]`. Controls precede targets.
  std::string to_text() const {
    std::ostringstream os;
    if (!label_.empty()) os << "# " << label_ << "\n";
    os << "BASIS " << basis_name(basis_) << "\n";
    os << "QUBITS " << n_qubits_;
    for (const auto& r : roles_) os << ' ' << r.name();
    os << "\n";
    char buf[40];
    for (const auto& g : ops_) {
      os << gate_name(g.kind);
      for (int q : g.qubits()) os << ' ' << q;
      if (is_parameterized(g.kind)) {
        std::snprintf(buf, sizeof buf, "%.17g", g.angle);
        os << ' ' << buf;
      }
      os << "\n";
    }
    return os.str();
  }

  static Circuit from_text(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string line, label;
    std::optional<Circuit> out;
    MeasurementBasis basis = MeasurementBasis::Z;
    int line_no = 0;
    while (std::getline(is, line)) {
      ++line_no;
      if (line.empty()) continue;
      if (line[0] == '#') {
        if (label.empty() && line.size() > 2) label = line.substr(2);
        continue;
      }
      std::istringstream ls(line);
      std::string word;
      ls >> word;
      auto fail = [&](const std::string& why) {
        return std::invalid_argument("circuit text line " + std::to_string(line_no) + ": " + why);
      };
      if (word == "BASIS") {
        std::string b;
        ls >> b;
        if (b != "Z" && b != "X") throw fail("basis must be Z or X");
        basis = b == "Z" ? MeasurementBasis::Z : MeasurementBasis::X;
        continue;
      }
      if (word == "QUBITS") {
        int n = 0;
        if (!(ls >> n) || n < 1) throw fail("bad qubit count");
        std::vector<QubitRole> roles;
        std::string r;
        while (ls >> r) roles.push_back(QubitRole::parse(r));
        if (roles.empty()) {
          for (int i = 0; i < n; ++i) roles.push_back({Role::Data, i});
        }
        out.emplace(n, std::move(roles), label, basis);
        continue;
      }
      if (!out) throw fail("gate before QUBITS header");
      const GateKind kind = parse_gate_kind(word);
      const int nq = is_two_qubit(kind) ? 2 : 1;
      int qs[2] = {0, 0};
      for (int k = 0; k < nq; ++k) {
        if (!(ls >> qs[k])) throw fail("missing qubit index");
      }
      double angle = 0.0;
      if (is_parameterized(kind) && !(ls >> angle)) throw fail("missing angle");
      Gate g;
      if (kind == GateKind::CNOT) {
        g = Gate::cnot(qs[0], qs[1]);
      } else if (kind == GateKind::SWAP) {
        g = Gate::swap(qs[0], qs[1]);
      } else {
        g = Gate::single(kind, qs[0], angle);
      }
      out->append(g);
    }
    if (!out) throw std::invalid_argument("circuit text: missing QUBITS header");
    return *out;
  }

 private:
  int n_qubits_ = 0;
  std::vector<Gate> ops_;
  std::vector<QubitRole> roles_;
  std::string label_;
  MeasurementBasis basis_ = MeasurementBasis::Z;
  std::vector<bool> measured_;
};

}  // namespace h2qed
