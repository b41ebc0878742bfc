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
#include <iostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "h2qed/circuit.hpp"
#include "h2qed/state.hpp"

namespace h2qed {

namespace detail {

inline void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
  }
}

}  // namespace detail

struct DepolarizingParams {
  double p1 = 0.0;
  double p2 = 0.0;

  /// Two-qubit parameter with the single-qubit one an order of magnitude lower.
  static DepolarizingParams from_p2(double p2) { return {p2 / 10.0, p2}; }

  void validate() const {
    detail::check_probability(p1, "p1");
    detail::check_probability(p2, "p2");
  }
};

struct ReadoutParams {
  double p_flip0 = 0.0;  ///< read 1 given 0
  double p_flip1 = 0.0;  ///< read 0 given 1

  bool active() const { return p_flip0 > 0 || p_flip1 > 0; }

  void validate() const {
    detail::check_probability(p_flip0, "p_flip0");
    detail::check_probability(p_flip1, "p_flip1");
  }
};

struct DeviceModel {
  DepolarizingParams depol;
  ReadoutParams readout;
  double p_init = 0.0;
  double emission_ratio_1q = 0.0;
  double emission_ratio_2q = 0.0;
  double crosstalk_meas = 0.0;
  double crosstalk_init = 0.0;

  void validate() const {
    depol.validate();
    readout.validate();
    detail::check_probability(p_init, "p_init");
    detail::check_probability(emission_ratio_1q, "emission_ratio_1q");
    detail::check_probability(emission_ratio_2q, "emission_ratio_2q");
    detail::check_probability(crosstalk_meas, "crosstalk_meas");
    detail::check_probability(crosstalk_init, "crosstalk_init");
  }

  /// Published trapped-ion emulator parameters.
  static DeviceModel h1_1e() {
    DeviceModel m;
    m.depol = {2.1e-5, 8.8e-4};
    m.readout = {1.0e-3, 4.0e-3};
    m.crosstalk_meas = 1.45e-5;
    m.p_init = 3.62e-5;
    m.crosstalk_init = 5.020e-6;
    m.emission_ratio_1q = 0.54;
    m.emission_ratio_2q = 0.43;
    return m;
  }

  static DeviceModel readout_only(double p_flip0, double p_flip1) {
    DeviceModel m;
    m.readout = {p_flip0, p_flip1};
    return m;
  }
};

/// Configuration keys, spelled exactly as the device data sheet rows.
namespace device_keys {
inline constexpr const char* kP1 = "Single-qubit Fault Probability (p1)";
inline constexpr const char* kP2 = "Two-qubit Fault Probability (p2)";
inline constexpr const char* kFlip0 = "Bit Flip Measurement Probability (0 outcome)";
inline constexpr const char* kFlip1 = "Bit Flip Measurement Probability (1 outcome)";
inline constexpr const char* kCrosstalkMeas = "Crosstalk Measurement Fault Probability";
inline constexpr const char* kInit = "Initialization Fault Probability";
inline constexpr const char* kCrosstalkInit = "Crosstalk Initialization Probability";
inline constexpr const char* kEmission1q = "Ratio of Single-Qubit Spontaneous Emission to p1";
inline constexpr const char* kEmission2q = "Ratio of Single-Qubit Spontaneous Emission in Two-Qubit Gate to p2";
}  // namespace device_keys

inline nlohmann::ordered_json device_model_to_json(const DeviceModel& m) {
  using namespace device_keys;
  nlohmann::ordered_json j;
  j[kP1] = m.depol.p1;
  j[kP2] = m.depol.p2;
  j[kFlip0] = m.readout.p_flip0;
  j[kFlip1] = m.readout.p_flip1;
  j[kCrosstalkMeas] = m.crosstalk_meas;
  j[kInit] = m.p_init;
  j[kCrosstalkInit] = m.crosstalk_init;
  j[kEmission1q] = m.emission_ratio_1q;
  j[kEmission2q] = m.emission_ratio_2q;
  return j;
}

/// Missing keys keep their zero default; unknown keys and the crosstalk
/// placeholders produce a warning on `log`.
inline DeviceModel device_model_from_json(const nlohmann::json& j, std::ostream* log = &std::cerr) {
  using namespace device_keys;
  if (!j.is_object()) throw std::invalid_argument("device model: expected a JSON object");
  DeviceModel m;
  const std::pair<const char*, double*> fields[] = {
      {kP1, &m.depol.p1},          {kP2, &m.depol.p2},
      {kFlip0, &m.readout.p_flip0}, {kFlip1, &m.readout.p_flip1},
      {kCrosstalkMeas, &m.crosstalk_meas}, {kInit, &m.p_init},
      {kCrosstalkInit, &m.crosstalk_init}, {kEmission1q, &m.emission_ratio_1q},
      {kEmission2q, &m.emission_ratio_2q}};
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& [name, slot] : fields) {
      if (key == name) {
        if (!value.is_number()) throw std::invalid_argument("device model: key '" + key + "' must be a number");
        *slot = value.get<double>();
        known = true;
      }
    }
    if (!known && log) *log << "warning: unknown device model key '" << key << "' ignored\n";
  }
  m.validate();
  if (log && (m.crosstalk_meas > 0 || m.crosstalk_init > 0)) {
    *log << "warning: crosstalk probabilities are recorded but not simulated\n";
  }
  return m;
}

/// Pauli error weights for one qubit.
struct PauliChannel {
  int qubit = 0;
  double px = 0.0;
  double py = 0.0;
  double pz = 0.0;

  double total() const { return px + py + pz; }
};

/// Decay to |0> with probability gamma from |1>.
struct DampingChannel {
  int qubit = 0;
  double gamma = 0.0;
};

using NoisyOp = std::variant<Gate, PauliChannel, DampingChannel>;

/// A circuit with its noise channels made explicit, plus state-prep bit flips
/// and classical readout flips.
struct NoisyCircuit {
  Circuit circuit;
  std::vector<NoisyOp> ops;
  double p_init = 0.0;
  ReadoutParams readout;

  int n_qubits() const { return circuit.n_qubits(); }
};

/// Mixture of unitaries: rho -> sum_k weights[k] ops[k] rho ops[k]^dagger.
struct WeightedChannel {
  int arity = 1;
  std::vector<double> weights;
  std::vector<Matrix> ops;
};

/// Depolarizing channel: identity with weight (1-p), each Pauli with p/3. Arity 2
/// is the independent product of that channel on both qubits.
inline WeightedChannel depolarize_kraus(double p, int arity = 1) {
  detail::check_probability(p, "depolarizing probability");
  if (arity != 1 && arity != 2) throw std::invalid_argument("depolarize_kraus: arity must be 1 or 2");
  WeightedChannel one;
  one.weights.push_back(1.0 - p);
  one.ops.push_back(Matrix(gates::identity()));
  if (p > 0) {
    for (const auto& m : {gates::pauli_x(), gates::pauli_y(), gates::pauli_z()}) {
      one.weights.push_back(p / 3.0);
      one.ops.push_back(Matrix(m));
    }
  }
  if (arity == 1) return one;
  WeightedChannel two;
  two.arity = 2;
  for (std::size_t a = 0; a < one.ops.size(); ++a) {
    for (std::size_t b = 0; b < one.ops.size(); ++b) {
      two.weights.push_back(one.weights[a] * one.weights[b]);
      two.ops.push_back(kron(one.ops[a], one.ops[b]));
    }
  }
  return two;
}

/// Kraus matrices of a weighted channel, sqrt(w_k) U_k.
inline std::vector<Matrix> kraus_matrices(const WeightedChannel& ch) {
  std::vector<Matrix> out;
  for (std::size_t k = 0; k < ch.weights.size(); ++k) out.push_back(std::sqrt(ch.weights[k]) * ch.ops[k]);
  return out;
}

inline std::vector<Matrix2> amplitude_damping_kraus(double gamma) {
  detail::check_probability(gamma, "damping probability");
  Matrix2 k0, k1;
  k0 << 1, 0, 0, std::sqrt(1 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  return {k0, k1};
}

namespace detail {

inline void append_gate_noise(NoisyCircuit& out, const Gate& g, double p, double emission_ratio) {
  const double gamma = emission_ratio * p;
  const double each = p * (1.0 - emission_ratio) / 3.0;
  for (int q : g.qubits()) {
    if (each > 0) out.ops.emplace_back(PauliChannel{q, each, each, each});
    if (gamma > 0) out.ops.emplace_back(DampingChannel{q, gamma});
  }
}

inline NoisyCircuit attach(const Circuit& c, double p1, double p2, double r1, double r2) {
  NoisyCircuit out{c, {}, 0.0, {}};
  for (const auto& g : c.ops()) {
    out.ops.emplace_back(g);
    if (!is_unitary(g.kind)) continue;
    if (is_two_qubit(g.kind)) {
      append_gate_noise(out, g, p2, r2);
    } else {
      append_gate_noise(out, g, p1, r1);
    }
  }
  return out;
}

}  // namespace detail

/// Every unitary gate is followed by depolarizing noise on each qubit it touches.
inline NoisyCircuit attach_noise(const Circuit& c, const DepolarizingParams& d) {
  d.validate();
  return detail::attach(c, d.p1, d.p2, 0.0, 0.0);
}

/// Device model: the emission fraction of each gate's fault probability becomes
/// amplitude damping, the rest stays symmetric depolarizing; qubits start with
/// an X flip of probability p_init and readouts flip classically.
inline NoisyCircuit attach_noise(const Circuit& c, const DeviceModel& m) {
  m.validate();
  NoisyCircuit out = detail::attach(c, m.depol.p1, m.depol.p2, m.emission_ratio_1q, m.emission_ratio_2q);
  out.p_init = m.p_init;
  out.readout = m.readout;
  return out;
}

inline NoisyCircuit noiseless(const Circuit& c) { return attach_noise(c, DepolarizingParams{}); }

using NoiseSpec = std::variant<DepolarizingParams, DeviceModel>;

inline NoisyCircuit attach_noise(const Circuit& c, const NoiseSpec& spec) {
  return std::visit([&](const auto& m) { return attach_noise(c, m); }, spec);
}

inline double two_qubit_probability(const NoiseSpec& spec) {
  if (const auto* d = std::get_if<DeviceModel>(&spec)) return d->depol.p2;
  return std::get<DepolarizingParams>(spec).p2;
}

}  // namespace h2qed
