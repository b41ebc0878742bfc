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

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "h2qed/shot_table.hpp"
#include "h2qed/state.hpp"

namespace h2qed {

struct PauliTerm {
  double coeff = 0.0;
  std::string word;  ///< one of I/X/Y/Z per logical qubit
};

/// Two-qubit H2 Hamiltonian g0 I + g1 Z0 + g2 Z1 + g3 Z0Z1 + g4 X0X1.
struct H2Hamiltonian {
  std::vector<PauliTerm> terms;
  double bond_length_angstrom = 0.74;

  static H2Hamiltonian from_coefficients(const std::array<double, 5>& g, double bond_length = 0.74) {
    for (double v : g) {
      if (!std::isfinite(v)) throw std::invalid_argument("Hamiltonian coefficients must be finite");
    }
    return {{{g[0], "II"}, {g[1], "ZI"}, {g[2], "IZ"}, {g[3], "ZZ"}, {g[4], "XX"}}, bond_length};
  }

  /// STO-3G coefficients at 0.74 Angstrom.
  static H2Hamiltonian sto3g() {
    return from_coefficients({-0.349833, -0.388748, -0.388748, 0.0111772, 0.181771});
  }

  std::array<double, 5> coefficients() const {
    if (terms.size() != 5) throw std::logic_error("H2Hamiltonian: expected five terms");
    return {terms[0].coeff, terms[1].coeff, terms[2].coeff, terms[3].coeff, terms[4].coeff};
  }

  Matrix matrix() const {
    Matrix h = Matrix::Zero(4, 4);
    for (const auto& t : terms) h += t.coeff * pauli_operator(t.word);
    return h;
  }

  /// Energy of cos(theta/2)|00> + sin(theta/2)|11>.
  double analytic_energy(double theta) const {
    const auto g = coefficients();
    return g[0] + g[3] + (g[1] + g[2]) * std::cos(theta) + g[4] * std::sin(theta);
  }
};

enum class EncodingMode { Unencoded, Encoded };

/// Logical bits (l1, l2) = (q0^q1, q0^q2) of an even-parity data string;
/// odd parity lies outside the code space and yields nullopt.
inline std::optional<std::pair<int, int>> decode_logical(const Bitstring& data) {
  if (data.size() != 4) throw std::invalid_argument("decode_logical: expected four data bits");
  if (data.parity() != 0) return std::nullopt;
  return std::pair<int, int>{data[0] ^ data[1], data[0] ^ data[2]};
}

/// Data columns whose joint parity gives the eigenvalue of a logical Z
/// (Z basis) or logical X (X basis) on logical qubit `k`.
inline std::vector<std::string> logical_support(EncodingMode mode, MeasurementBasis basis, int k) {
  if (k < 0 || k > 1) throw std::out_of_range("logical_support: logical qubit must be 0 or 1");
  if (mode == EncodingMode::Unencoded) return {"q" + std::to_string(k)};
  // Z1 = ZZII, Z2 = ZIZI, X1 = XIXI, X2 = XXII on q0..q3.
  if (basis == MeasurementBasis::Z) return k == 0 ? std::vector<std::string>{"q0", "q1"} : std::vector<std::string>{"q0", "q2"};
  return k == 0 ? std::vector<std::string>{"q0", "q2"} : std::vector<std::string>{"q0", "q1"};
}

struct EnergyEstimate {
  double mean = 0.0;       ///< Ha
  double variance = 0.0;   ///< Ha^2, sum of independent per-term variances
  double sem = 0.0;        ///< Ha
  double n_z = 0.0;        ///< samples behind the Z-type terms
  double n_x = 0.0;        ///< samples behind the X-type terms
  double eta_z = 1.0;
  double eta_x = 1.0;
  double sigma_eta_z = 0.0;
  double sigma_eta_x = 0.0;
  std::vector<double> term_values;  ///< <P_i> per Hamiltonian term
};

namespace detail {

inline MeasurementBasis term_basis(const std::string& word) {
  bool has_z = false, has_x = false;
  for (char c : word) {
    if (c == 'Z') has_z = true;
    else if (c == 'X') has_x = true;
    else if (c != 'I') throw std::invalid_argument("term '" + word + "' is not measurable in the Z or X basis");
  }
  if (has_z && has_x) throw std::invalid_argument("term '" + word + "' mixes Z and X");
  return has_x ? MeasurementBasis::X : MeasurementBasis::Z;
}

// Columns whose parity equals the term eigenvalue bit (symmetric difference of supports).
template <class W>
std::vector<int> term_columns(const OutcomeTable<W>& t, const std::string& word, EncodingMode mode,
                              MeasurementBasis basis) {
  std::vector<int> mask(t.columns().size(), 0);
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (word[k] == 'I') continue;
    for (const auto& name : logical_support(mode, basis, static_cast<int>(k))) mask[static_cast<std::size_t>(t.column(name))] ^= 1;
  }
  std::vector<int> cols;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) cols.push_back(static_cast<int>(i));
  }
  return cols;
}

template <class W>
double parity_expectation(const OutcomeTable<W>& t, const std::vector<int>& cols) {
  double acc = 0, total = 0;
  for (const auto& [bits, w] : t.entries()) {
    int p = 0;
    for (int c : cols) p ^= bits[static_cast<std::size_t>(c)];
    const double wd = static_cast<double>(w);
    acc += p ? -wd : wd;
    total += wd;
  }
  return acc / total;
}

template <class W>
EnergyEstimate estimate_from_tables(const OutcomeTable<W>& z, const OutcomeTable<W>& x, const H2Hamiltonian& ham,
                                    EncodingMode mode, double n_z, double n_x) {
  if (z.empty() || z.total() == W{0}) throw EmptySelectionError("energy estimate: Z-basis table is empty");
  if (x.empty() || x.total() == W{0}) throw EmptySelectionError("energy estimate: X-basis table is empty");
  EnergyEstimate e;
  e.n_z = n_z;
  e.n_x = n_x;
  double sem2 = 0;
  for (const auto& term : ham.terms) {
    if (term.word.size() != 2) throw std::invalid_argument("Hamiltonian terms must act on two logical qubits");
    const auto basis = term_basis(term.word);
    const bool identity = term.word.find_first_not_of('I') == std::string::npos;
    double value = 1.0;
    if (!identity) {
      const auto& table = basis == MeasurementBasis::Z ? z : x;
      value = parity_expectation(table, term_columns(table, term.word, mode, basis));
    }
    e.term_values.push_back(value);
    e.mean += term.coeff * value;
    const double var = identity ? 0.0 : term.coeff * term.coeff * (1.0 - value * value);
    e.variance += var;
    const double n = basis == MeasurementBasis::Z ? n_z : n_x;
    if (!identity && n > 0) sem2 += var / n;
  }
  e.sem = std::sqrt(sem2);
  return e;
}

}  // namespace detail

/// Energy from post-selected Z- and X-basis shot tables. Each Pauli term is an
/// independent estimate; the SEM adds per-term variances over each basis count.
inline EnergyEstimate energy_from_shots(const ShotTable& z_table, const ShotTable& x_table, const H2Hamiltonian& ham,
                                        EncodingMode mode) {
  return detail::estimate_from_tables(z_table, x_table, ham, mode, static_cast<double>(z_table.total()),
                                      static_cast<double>(x_table.total()));
}

/// Infinite-shot counterpart on exact outcome distributions. The SEM is
/// evaluated for `nominal_shots` samples per basis (0 leaves it at zero).
inline EnergyEstimate energy_from_distribution(const ProbabilityTable& z_dist, const ProbabilityTable& x_dist,
                                               const H2Hamiltonian& ham, EncodingMode mode,
                                               double nominal_shots = 0.0) {
  return detail::estimate_from_tables(z_dist, x_dist, ham, mode, nominal_shots, nominal_shots);
}

/// Physical form of the Hamiltonian on the register of `mode`: the two data
/// qubits, or (a1, q0..q3, a2) with logical Paulis replaced by their code words.
inline Matrix physical_hamiltonian(const H2Hamiltonian& ham, EncodingMode mode) {
  if (mode == EncodingMode::Unencoded) return ham.matrix();
  Matrix h = Matrix::Zero(64, 64);
  for (const auto& t : ham.terms) {
    const auto basis = detail::term_basis(t.word);
    std::string word = "IIIIII";
    for (std::size_t k = 0; k < t.word.size(); ++k) {
      if (t.word[k] == 'I') continue;
      for (const auto& name : logical_support(mode, basis, static_cast<int>(k))) {
        auto& c = word[static_cast<std::size_t>(1 + (name[1] - '0'))];
        const char p = basis == MeasurementBasis::Z ? 'Z' : 'X';
        c = c == p ? 'I' : p;
      }
    }
    h += t.coeff * pauli_operator(word);
  }
  return h;
}

/// Tr(H rho) for a normalized state on the register of `mode`.
inline double energy_expectation(const DensityMatrix& rho, const H2Hamiltonian& ham, EncodingMode mode) {
  return expectation(rho, physical_hamiltonian(ham, mode));
}

/// Evenly spaced points over [lo, hi], both ends included.
inline std::vector<double> theta_grid(int n_points = 150, double lo = -std::numbers::pi, double hi = std::numbers::pi) {
  if (n_points < 2) throw std::invalid_argument("theta_grid: need at least two points");
  std::vector<double> g(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n_points - 1);
  return g;
}

struct ScanResult {
  std::vector<double> thetas;
  std::vector<EnergyEstimate> estimates;
  std::size_t argmin = 0;
  double theta_min = 0.0;
};

/// Evaluates `runner` on the grid and returns the minimum; equal energies
/// resolve toward the smaller |theta|.
inline ScanResult scan_theta(const std::function<EnergyEstimate(double)>& runner, int n_points = 150,
                             double lo = -std::numbers::pi, double hi = std::numbers::pi) {
  ScanResult r;
  r.thetas = theta_grid(n_points, lo, hi);
  for (double th : r.thetas) r.estimates.push_back(runner(th));
  for (std::size_t i = 1; i < r.thetas.size(); ++i) {
    const double e = r.estimates[i].mean, best = r.estimates[r.argmin].mean;
    if (e < best || (e == best && std::abs(r.thetas[i]) < std::abs(r.thetas[r.argmin]))) r.argmin = i;
  }
  r.theta_min = r.thetas[r.argmin];
  return r;
}

/// Shots needed for a target SEM: ceil(variance / sem^2), at least one.
/// Quotients within 1e-12 (relative) of an integer are taken as that integer.
inline std::uint64_t shot_budget(double variance, double target_sem) {
  if (!(variance >= 0) || !std::isfinite(variance)) throw std::invalid_argument("shot_budget: variance must be >= 0");
  if (!(target_sem > 0) || !std::isfinite(target_sem)) throw std::invalid_argument("shot_budget: target SEM must be > 0");
  const double ratio = variance / (target_sem * target_sem);
  const double nearest = std::round(ratio);
  const double n = std::abs(ratio - nearest) <= 1e-12 * std::max(1.0, ratio) ? nearest : std::ceil(ratio);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n));
}

/// One- and two-electron integrals over the spin orbitals
/// Psi0 = g(up), Psi1 = u(up), Psi2 = g(down), Psi3 = u(down).
struct Integrals {
  double h00 = 0, h11 = 0, h22 = 0, h33 = 0;
  double h2002 = 0, h3113 = 0, h2112 = 0, h0330 = 0, h2103 = 0, h2013 = 0, h2332 = 0, h2323 = 0, h0110 = 0,
         h0101 = 0;

  void validate(double tol = 1e-10) const {
    for (double v : {h00, h11, h22, h33, h2002, h3113, h2112, h0330, h2103, h2013, h2332, h2323, h0110, h0101}) {
      if (!std::isfinite(v)) throw std::invalid_argument("integrals must be finite");
    }
    if (std::abs(h2013 - h2103) > tol) throw std::invalid_argument("integrals: h2013 must equal h2103");
    if (std::abs(h2112 - h0330) > tol) throw std::invalid_argument("integrals: h2112 must equal h0330");
  }
};

/// Coefficients g0..g4 of the singlet-reduced qubit Hamiltonian. Logical qubit 0
/// carries the spin-up pair (Psi0, Psi1), logical qubit 1 the spin-down pair, and
/// bit 1 marks the antibonding orbital.
inline std::array<double, 5> integrals_to_coeffs(const Integrals& h) {
  h.validate();
  const double g0 = 0.5 * (h.h00 + h.h11 + h.h22 + h.h33) + 0.25 * (h.h2002 + h.h3113 + h.h2112 + h.h0330);
  const double g1 = 0.5 * (h.h00 - h.h11) + 0.25 * (h.h2002 - h.h3113 - h.h2112 + h.h0330);
  const double g2 = 0.5 * (h.h22 - h.h33) + 0.25 * (h.h2002 - h.h3113 + h.h2112 - h.h0330);
  const double g3 = 0.25 * (h.h2002 + h.h3113 - h.h2112 - h.h0330);
  const double g4 = 0.5 * (h.h2103 + h.h2013);
  return {g0, g1, g2, g3, g4};
}

struct ResourceCount {
  std::uint64_t n_1q = 0;
  std::uint64_t n_2q = 0;
  std::uint64_t n_meas = 0;
  std::uint64_t shots = 0;
};

/// Device credits: 5 + (N1q + 10 N2q + 5 Nm) C / 5000.
inline double hqc_cost(const ResourceCount& rc) {
  const double weighted = static_cast<double>(rc.n_1q) + 10.0 * static_cast<double>(rc.n_2q) +
                          5.0 * static_cast<double>(rc.n_meas);
  return 5.0 + weighted * static_cast<double>(rc.shots) / 5000.0;
}

}  // namespace h2qed
