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
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "h2qed/bitstring.hpp"
#include "h2qed/circuit.hpp"

namespace h2qed {

using Complex = std::complex<double>;
using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using Matrix2 = Eigen::Matrix<Complex, 2, 2, Eigen::RowMajor>;
using Matrix4 = Eigen::Matrix<Complex, 4, 4, Eigen::RowMajor>;

/// Hard cap on register size for any dense object.
inline constexpr int kMaxQubits = 24;

namespace gates {

inline Matrix2 identity() { return Matrix2::Identity(); }

inline Matrix2 pauli_x() {
  Matrix2 m;
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix2 pauli_y() {
  Matrix2 m;
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline Matrix2 pauli_z() {
  Matrix2 m;
  m << 1, 0, 0, -1;
  return m;
}

inline Matrix2 hadamard() {
  const double r = 1.0 / std::sqrt(2.0);
  Matrix2 m;
  m << r, r, r, -r;
  return m;
}

inline Matrix2 phase_s() {
  Matrix2 m;
  m << 1, 0, 0, Complex(0, 1);
  return m;
}

/// exp(-i theta Y / 2)
inline Matrix2 ry(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Matrix2 m;
  m << c, -s, s, c;
  return m;
}

/// exp(-i theta Z / 2)
inline Matrix2 rz(double theta) {
  Matrix2 m;
  m << std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2);
  return m;
}

/// Basis |control target>, control is the high bit.
inline Matrix4 cnot() {
  Matrix4 m = Matrix4::Zero();
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
  return m;
}

inline Matrix4 swap() {
  Matrix4 m = Matrix4::Zero();
  m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
  return m;
}

inline Matrix2 single_qubit(const Gate& g) {
  switch (g.kind) {
    case GateKind::H: return hadamard();
    case GateKind::X: return pauli_x();
    case GateKind::Y: return pauli_y();
    case GateKind::Z: return pauli_z();
    case GateKind::S: return phase_s();
    case GateKind::RY: return ry(g.angle);
    case GateKind::RZ: return rz(g.angle);
    default: throw std::invalid_argument(std::string(gate_name(g.kind)) + " is not a single-qubit unitary");
  }
}

inline Matrix4 two_qubit(const Gate& g) {
  switch (g.kind) {
    case GateKind::CNOT: return cnot();
    case GateKind::SWAP: return swap();
    default: throw std::invalid_argument(std::string(gate_name(g.kind)) + " is not a two-qubit unitary");
  }
}

}  // namespace gates

namespace detail {

// Qubit 0 is the most significant bit of the amplitude index.
inline std::size_t bit_of(int total_qubits, int q) {
  return std::size_t{1} << (total_qubits - 1 - q);
}

template <class M>
void apply_1q(std::span<Complex> data, int total_qubits, int q, const M& u) {
  const std::size_t stride = bit_of(total_qubits, q);
  const Complex m00 = u(0, 0), m01 = u(0, 1), m10 = u(1, 0), m11 = u(1, 1);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (i & stride) continue;
    const Complex a = data[i], b = data[i | stride];
    data[i] = m00 * a + m01 * b;
    data[i | stride] = m10 * a + m11 * b;
  }
}

template <class M>
void apply_2q(std::span<Complex> data, int total_qubits, int qa, int qb, const M& u) {
  const std::size_t sa = bit_of(total_qubits, qa), sb = bit_of(total_qubits, qb);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (i & (sa | sb)) continue;
    const std::size_t idx[4] = {i, i | sb, i | sa, i | sa | sb};
    Complex in[4];
    for (int k = 0; k < 4; ++k) in[k] = data[idx[k]];
    for (int r = 0; r < 4; ++r) {
      Complex acc = 0;
      for (int c = 0; c < 4; ++c) acc += u(r, c) * in[c];
      data[idx[r]] = acc;
    }
  }
}

inline void check_finite(std::span<const Complex> data, const char* what) {
  for (const auto& z : data) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw std::invalid_argument(std::string(what) + ": non-finite entry");
    }
  }
}

inline void check_register_size(int n_qubits, int cap) {
  if (n_qubits < 1 || n_qubits > cap) {
    throw std::length_error("register of " + std::to_string(n_qubits) + " qubits exceeds cap of " +
                            std::to_string(cap));
  }
}

}  // namespace detail

class StateVector {
 public:
  StateVector() = default;

  /// |0...0> on n qubits.
  explicit StateVector(int n_qubits) : n_(n_qubits) {
    detail::check_register_size(n_qubits, kMaxQubits);
    amps_.assign(std::size_t{1} << n_qubits, Complex(0));
    amps_[0] = 1;
  }

  StateVector(int n_qubits, std::vector<Complex> amps) : n_(n_qubits), amps_(std::move(amps)) {
    detail::check_register_size(n_qubits, kMaxQubits);
    if (amps_.size() != (std::size_t{1} << n_qubits)) {
      throw std::invalid_argument("StateVector: amplitude count must be 2^n");
    }
    detail::check_finite(amps_, "StateVector");
  }

  static StateVector basis(int n_qubits, std::uint64_t index) {
    StateVector sv(n_qubits);
    if (index >= sv.dim()) throw std::out_of_range("StateVector::basis: index out of range");
    sv.amps_[0] = 0;
    sv.amps_[index] = 1;
    return sv;
  }

  static StateVector basis(const Bitstring& bits) {
    return basis(static_cast<int>(bits.size()), bits.packed());
  }

  int n_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<Complex>& amplitudes() const { return amps_; }
  std::span<Complex> data() { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[i]; }
  Complex& operator[](std::size_t i) { return amps_[i]; }

  double norm_squared() const {
    double s = 0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  void normalize() {
    const double n = std::sqrt(norm_squared());
    if (n == 0) throw std::domain_error("StateVector::normalize: zero vector");
    for (auto& a : amps_) a /= n;
  }

  Vector to_vector() const { return Eigen::Map<const Vector>(amps_.data(), static_cast<Eigen::Index>(dim())); }

  Complex inner(const StateVector& other) const {
    if (other.dim() != dim()) throw std::invalid_argument("StateVector::inner: dimension mismatch");
    Complex s = 0;
    for (std::size_t i = 0; i < dim(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
    return s;
  }

  /// Probability that qubit q reads 1.
  double prob_one(int q) const {
    const std::size_t bit = detail::bit_of(n_, q);
    double p = 0;
    for (std::size_t i = 0; i < dim(); ++i) {
      if (i & bit) p += std::norm(amps_[i]);
    }
    return p;
  }

  void apply_matrix(int q, const Matrix2& u) { detail::apply_1q(data(), n_, q, u); }
  void apply_matrix(int qa, int qb, const Matrix4& u) { detail::apply_2q(data(), n_, qa, qb, u); }

 private:
  int n_ = 0;
  std::vector<Complex> amps_;
};

/// Row-major 2^n x 2^n density operator. Internally the flat buffer is
/// treated as a 2n-qubit vector: row qubit q is vector qubit q, column
/// qubit q is vector qubit n+q, so U rho U^dagger is U on the rows and
/// conj(U) on the columns.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  explicit DensityMatrix(int n_qubits) : n_(n_qubits) {
    detail::check_register_size(n_qubits, 12);
    rho_ = Matrix::Zero(dim(), dim());
    rho_(0, 0) = 1;
  }

  DensityMatrix(int n_qubits, Matrix rho) : n_(n_qubits), rho_(std::move(rho)) {
    detail::check_register_size(n_qubits, 12);
    if (rho_.rows() != static_cast<Eigen::Index>(dim()) || rho_.cols() != rho_.rows()) {
      throw std::invalid_argument("DensityMatrix: matrix must be 2^n x 2^n");
    }
    detail::check_finite(std::span<const Complex>(rho_.data(), static_cast<std::size_t>(rho_.size())),
                         "DensityMatrix");
  }

  static DensityMatrix pure(const StateVector& psi) {
    const Vector v = psi.to_vector();
    return DensityMatrix(psi.n_qubits(), v * v.adjoint());
  }

  static DensityMatrix maximally_mixed(int n_qubits) {
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
    return DensityMatrix(n_qubits, Matrix::Identity(d, d) / static_cast<double>(d));
  }

  int n_qubits() const { return n_; }
  std::size_t dim() const { return std::size_t{1} << n_; }
  const Matrix& matrix() const { return rho_; }
  Complex operator()(std::size_t r, std::size_t c) const {
    return rho_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  double trace() const { return rho_.trace().real(); }

  double hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(rho_), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  /// Hermitian, unit trace, PSD, all within `tol`.
  bool is_valid(double tol = 1e-10) const {
    return hermiticity_error() <= tol && std::abs(trace() - 1.0) <= tol && min_eigenvalue() >= -tol;
  }

  void apply_matrix(int q, const Matrix2& u) {
    detail::apply_1q(flat(), 2 * n_, q, u);
    detail::apply_1q(flat(), 2 * n_, n_ + q, u.conjugate().eval());
  }

  void apply_matrix(int qa, int qb, const Matrix4& u) {
    detail::apply_2q(flat(), 2 * n_, qa, qb, u);
    detail::apply_2q(flat(), 2 * n_, n_ + qa, n_ + qb, u.conjugate().eval());
  }

  /// rho -> sum_k K_k rho K_k^dagger for single-qubit Kraus operators.
  void apply_kraus(int q, std::span<const Matrix2> kraus) {
    Matrix acc = Matrix::Zero(rho_.rows(), rho_.cols());
    for (const auto& k : kraus) {
      DensityMatrix term = *this;
      term.apply_matrix(q, k);
      acc += term.rho_;
    }
    rho_ = std::move(acc);
  }

  /// Weighted mixture of single-qubit unitaries: sum_k w_k U_k rho U_k^dagger.
  void apply_mixture(int q, std::span<const double> weights, std::span<const Matrix2> unitaries) {
    Matrix acc = Matrix::Zero(rho_.rows(), rho_.cols());
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (weights[k] == 0) continue;
      DensityMatrix term = *this;
      term.apply_matrix(q, unitaries[k]);
      acc += weights[k] * term.rho_;
    }
    rho_ = std::move(acc);
  }

  /// Unnormalized Pi rho Pi^dagger.
  DensityMatrix sandwiched(const Matrix& op) const {
    DensityMatrix out = *this;
    out.rho_ = op * rho_ * op.adjoint();
    return out;
  }

  void scale(double s) { rho_ *= s; }

 private:
  std::span<Complex> flat() { return {rho_.data(), static_cast<std::size_t>(rho_.size())}; }

  int n_ = 0;
  Matrix rho_;
};

/// Tensor product; the left factor occupies the lower qubit indices.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  const auto rows = a.rows() * b.rows(), cols = a.cols() * b.cols();
  if (rows > (Eigen::Index{1} << kMaxQubits) || cols > (Eigen::Index{1} << kMaxQubits)) {
    throw std::length_error("kron: result exceeds the qubit cap");
  }
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline StateVector kron(const StateVector& a, const StateVector& b) {
  std::vector<Complex> amps(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < b.dim(); ++j) amps[i * b.dim() + j] = a[i] * b[j];
  }
  return StateVector(a.n_qubits() + b.n_qubits(), std::move(amps));
}

inline DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(a.n_qubits() + b.n_qubits(), kron(a.matrix(), b.matrix()));
}

/// Kronecker product of a list of 2x2 factors, qubit 0 first.
inline Matrix kron_all(const std::vector<Matrix2>& factors) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, Matrix(f));
  return out;
}

/// Operator from a Pauli word such as "ZZII"; character k acts on qubit k.
inline Matrix pauli_operator(std::string_view word) {
  std::vector<Matrix2> f;
  for (char c : word) {
    switch (c) {
      case 'I': f.push_back(gates::identity()); break;
      case 'X': f.push_back(gates::pauli_x()); break;
      case 'Y': f.push_back(gates::pauli_y()); break;
      case 'Z': f.push_back(gates::pauli_z()); break;
      default: throw std::invalid_argument("pauli_operator: bad character in '" + std::string(word) + "'");
    }
  }
  return kron_all(f);
}

/// Tr(O rho) for a Hermitian observable.
inline double expectation(const DensityMatrix& rho, const Matrix& observable) {
  if (observable.rows() != static_cast<Eigen::Index>(rho.dim()) || observable.cols() != observable.rows()) {
    throw std::invalid_argument("expectation: dimension mismatch");
  }
  if ((observable - observable.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("expectation: observable is not Hermitian");
  }
  const Complex v = (observable * rho.matrix()).trace();
  if (std::abs(v.imag()) > 1e-9) throw std::domain_error("expectation: imaginary residue above 1e-9");
  return v.real();
}

inline double expectation(const StateVector& psi, const Matrix& observable) {
  return expectation(DensityMatrix::pure(psi), observable);
}

/// Applies a unitary gate. MEASURE_Z is rejected (terminal measurements are
/// handled by the backends); RESET is only defined for density matrices.
inline void apply_gate(StateVector& psi, const Gate& g) {
  g.validate(psi.n_qubits());
  if (!is_unitary(g.kind)) {
    throw std::invalid_argument(std::string(gate_name(g.kind)) + " is not a unitary gate");
  }
  const auto qs = g.qubits();
  if (qs.size() == 1) {
    psi.apply_matrix(qs[0], gates::single_qubit(g));
  } else {
    psi.apply_matrix(qs[0], qs[1], gates::two_qubit(g));
  }
}

inline void apply_gate(DensityMatrix& rho, const Gate& g) {
  g.validate(rho.n_qubits());
  const auto qs = g.qubits();
  if (g.kind == GateKind::MEASURE_Z) {
    throw std::invalid_argument("MEASURE_Z is not a unitary gate");
  }
  if (g.kind == GateKind::RESET) {
    Matrix2 k0, k1;
    k0 << 1, 0, 0, 0;
    k1 << 0, 1, 0, 0;
    const Matrix2 ks[2] = {k0, k1};
    rho.apply_kraus(qs[0], ks);
    return;
  }
  if (qs.size() == 1) {
    rho.apply_matrix(qs[0], gates::single_qubit(g));
  } else {
    rho.apply_matrix(qs[0], qs[1], gates::two_qubit(g));
  }
}

/// Noiseless unitary part of a circuit applied to `psi` (measurements skipped).
inline void apply_circuit(StateVector& psi, const Circuit& c) {
  if (c.n_qubits() != psi.n_qubits()) throw std::invalid_argument("apply_circuit: register size mismatch");
  for (const auto& g : c.ops()) {
    if (g.kind != GateKind::MEASURE_Z) apply_gate(psi, g);
  }
}

/// Noiseless pre-measurement state of a circuit started from |0...0>.
inline StateVector run_noiseless(const Circuit& c) {
  StateVector psi(c.n_qubits());
  apply_circuit(psi, c);
  return psi;
}

}  // namespace h2qed
