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
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "h2qed/circuit.hpp"

namespace h2qed {

/// Register positions of the encoded ansatz.
namespace encoded_layout {
inline constexpr int kA1 = 0;
inline constexpr int kQ0 = 1;
inline constexpr int kA2 = 5;
inline constexpr int kQubits = 6;
}  // namespace encoded_layout

/// One measured qubit together with its two repetition readouts.
struct RedTriple {
  int qubit = 0;
  int readout_a = 0;
  int readout_b = 0;

  bool operator==(const RedTriple&) const = default;
};

struct RedLayout {
  std::vector<RedTriple> triples;
};

namespace detail {

inline void check_theta(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("ansatz angle must be finite");
}

}  // namespace detail

/// Two-qubit UCCD ansatz preparing cos(theta/2)|00> + sin(theta/2)|11>.
/// The CNOT sandwich realizes exp(-i (theta/2) Y0 X1) as an operator.
inline Circuit build_unencoded_ansatz(double theta, MeasurementBasis basis = MeasurementBasis::Z) {
  detail::check_theta(theta);
  Circuit c(2, {{Role::Data, 0}, {Role::Data, 1}},
            std::string("unencoded ansatz, basis ") + std::string(basis_name(basis)), basis);
  c.append(Gate::cnot(0, 1));
  c.append(Gate::ry(0, theta));
  c.append(Gate::cnot(0, 1));
  if (basis == MeasurementBasis::X) {
    c.append(Gate::h(0));
    c.append(Gate::h(1));
  }
  c.measure_all();
  return c;
}

namespace detail {

inline std::vector<QubitRole> prep_roles() {
  return {{Role::AncillaA1, 1}, {Role::Data, 0}, {Role::Data, 1}, {Role::Data, 2}, {Role::Data, 3}};
}

// Appends the logical |00> preparation on (a1, q0..q3) starting at `offset`.
inline void append_state_prep(Circuit& c, int a1, int q0, bool with_verification) {
  c.append(Gate::h(q0));
  if (with_verification) c.append(Gate::cnot(q0, a1));
  for (int k = 1; k < 4; ++k) c.append(Gate::cnot(q0, q0 + k));
  if (with_verification) c.append(Gate::cnot(q0, a1));
}

}  // namespace detail

/// Logical |00> of the [[4,2,2]] code on q0..q3 with an a1 flag qubit.
/// Every data CNOT is controlled by q0; a1 records q0 xor q1.
inline Circuit build_state_prep_422(bool with_verification = true) {
  Circuit c(5, detail::prep_roles(), "[[4,2,2]] state preparation");
  detail::append_state_prep(c, 0, 1, with_verification);
  c.measure_all();
  return c;
}

/// Encoded ansatz on (a1, q0..q3, a2). The logical rotation exp(-i (theta/2) Y0 X1)
/// acts as the physical word Z Y X I on q0..q3; it is applied by mapping that word
/// to Z Z Z, collecting the parity on a2, rotating a2 and reading a2 in the X basis.
/// Outcome a2 = 0 leaves the rotated state; a2 = 1 leaves it shifted by pi.
inline Circuit build_encoded_ansatz(double theta, MeasurementBasis basis = MeasurementBasis::Z) {
  detail::check_theta(theta);
  using namespace encoded_layout;
  auto roles = detail::prep_roles();
  roles.push_back({Role::AncillaA2, 2});
  Circuit c(kQubits, std::move(roles),
            std::string("[[4,2,2]] encoded ansatz, basis ") + std::string(basis_name(basis)), basis);
  detail::append_state_prep(c, kA1, kQ0, true);

  const int q0 = kQ0, q1 = kQ0 + 1, q2 = kQ0 + 2;
  c.append(Gate::s(q1));
  c.append(Gate::h(q1));
  c.append(Gate::h(q2));
  for (int q : {q0, q1, q2}) c.append(Gate::cnot(q, kA2));
  c.append(Gate::rz(kA2, -theta));
  c.append(Gate::h(kA2));
  c.append(Gate::s(kA2));
  c.append(Gate::h(q2));
  c.append(Gate::h(q1));
  c.append(Gate::rz(q1, -std::numbers::pi / 2));

  if (basis == MeasurementBasis::X) {
    for (int k = 0; k < 4; ++k) c.append(Gate::h(kQ0 + k));
  }
  c.measure_all();
  return c;
}

/// Stabilizer checks of the [[4,2,2]] code on (q0..q3, sX, sZ): sX collects the
/// Z-type parity (flags bit flips), sZ the X-type parity (flags phase flips).
inline Circuit build_syndrome_circuit() {
  Circuit c(6,
            {{Role::Data, 0}, {Role::Data, 1}, {Role::Data, 2}, {Role::Data, 3}, {Role::SyndromeX, 0},
             {Role::SyndromeZ, 0}},
            "[[4,2,2]] syndrome extraction");
  constexpr int sx = 4, sz = 5;
  for (int q = 0; q < 4; ++q) c.append(Gate::cnot(q, sx));
  c.append(Gate::h(sz));
  for (int q = 0; q < 4; ++q) c.append(Gate::cnot(sz, q));
  c.append(Gate::h(sz));
  c.append(Gate::measure(sx));
  c.append(Gate::measure(sz));
  return c;
}

/// Copies every measured qubit onto two fresh readout qubits just before the
/// terminal measurements, then measures all three.
inline std::pair<Circuit, RedLayout> wrap_with_red(const Circuit& circuit, int max_qubits = 24) {
  const auto measured = circuit.measured_qubits();
  if (measured.empty()) throw std::invalid_argument("wrap_with_red: circuit measures no qubits");
  const int n = circuit.n_qubits();
  const int total = n + 2 * static_cast<int>(measured.size());
  if (total > max_qubits) {
    throw std::length_error("wrap_with_red: " + std::to_string(total) + " qubits exceed the budget of " +
                            std::to_string(max_qubits));
  }
  auto roles = circuit.roles();
  for (int k = 0; k < total - n; ++k) roles.push_back({Role::RedReadout, k});
  std::string label = circuit.label();
  label += " + [3,1]-RED";
  Circuit out(total, std::move(roles), std::move(label), circuit.basis());
  for (const auto& g : circuit.ops()) {
    if (g.kind != GateKind::MEASURE_Z) out.append(g);
  }
  RedLayout layout;
  int next = n;
  for (int q : measured) {
    RedTriple t{q, next, next + 1};
    next += 2;
    out.append(Gate::cnot(q, t.readout_a));
    out.append(Gate::cnot(q, t.readout_b));
    layout.triples.push_back(t);
  }
  out.measure_all();
  return {std::move(out), std::move(layout)};
}

/// Gate tallies used for resource accounting.
struct GateCounts {
  int n_1q = 0;
  int n_2q = 0;
  int n_meas = 0;
  int n_qubits = 0;
};

inline GateCounts count_gates(const Circuit& c) {
  GateCounts g;
  g.n_qubits = c.n_qubits();
  for (const auto& op : c.ops()) {
    if (op.kind == GateKind::MEASURE_Z) {
      ++g.n_meas;
    } else if (is_two_qubit(op.kind)) {
      ++g.n_2q;
    } else {
      ++g.n_1q;
    }
  }
  return g;
}

}  // namespace h2qed
