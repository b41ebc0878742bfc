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
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Eigenvalues>

#include "h2qed/builders.hpp"
#include "h2qed/shot_table.hpp"
#include "h2qed/state.hpp"

namespace h2qed {

/// Logical basis state |l1 l2> of the [[4,2,2]] code on q0..q3.
inline StateVector codeword(int l1, int l2) {
  if ((l1 != 0 && l1 != 1) || (l2 != 0 && l2 != 1)) throw std::invalid_argument("codeword: bits must be 0 or 1");
  // Support {x, ~x} with q0^q1 = l1, q0^q2 = l2 and even parity.
  const unsigned x = (static_cast<unsigned>(l1) << 2) | (static_cast<unsigned>(l2) << 1) |
                     static_cast<unsigned>(l1 ^ l2);
  std::vector<Complex> amps(16, Complex(0));
  const double r = 1.0 / std::sqrt(2.0);
  amps[x] = r;
  amps[x ^ 0xFu] = r;
  return StateVector(4, std::move(amps));
}

/// cos(theta/2)|00> + sin(theta/2)|11> in the code, with a1 = a2 = 0.
inline StateVector encoded_target_state(double theta) {
  const auto c00 = codeword(0, 0), c11 = codeword(1, 1);
  std::vector<Complex> data(16);
  for (std::size_t i = 0; i < 16; ++i) data[i] = std::cos(theta / 2) * c00[i] + std::sin(theta / 2) * c11[i];
  return kron(kron(StateVector(1), StateVector(4, std::move(data))), StateVector(1));
}

/// |0>_{a1} (x) logical |00>.
inline StateVector prep_target_state() { return kron(StateVector(1), codeword(0, 0)); }

/// Sum of the four logical basis projectors on q0..q3 (rank 4).
inline Matrix codespace_projector() {
  Matrix p = Matrix::Zero(16, 16);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const Vector v = codeword(a, b).to_vector();
      p += v * v.adjoint();
    }
  }
  return p;
}

enum class ProjectorKind { PI_A, PI_P, PI_AP, S_A, S_P, S_AP };

inline std::string_view projector_name(ProjectorKind k) {
  switch (k) {
    case ProjectorKind::PI_A: return "PI_A";
    case ProjectorKind::PI_P: return "PI_P";
    case ProjectorKind::PI_AP: return "PI_AP";
    case ProjectorKind::S_A: return "S_A";
    case ProjectorKind::S_P: return "S_P";
    case ProjectorKind::S_AP: return "S_AP";
  }
  return "?";
}

/// PI_* act on (a1, q0..q3, a2) and include |0><0| on a2; S_* act on (a1, q0..q3).
inline Matrix build_projector(ProjectorKind kind) {
  Matrix zero = Matrix::Zero(2, 2);
  zero(0, 0) = 1;
  const Matrix id2 = Matrix::Identity(2, 2), id16 = Matrix::Identity(16, 16);
  const Matrix code = codespace_projector();
  const Matrix s_a = kron(zero, id16);
  const Matrix s_p = kron(id2, code);
  switch (kind) {
    case ProjectorKind::S_A: return s_a;
    case ProjectorKind::S_P: return s_p;
    case ProjectorKind::S_AP: return s_a * s_p;
    case ProjectorKind::PI_A: return kron(s_a, zero);
    case ProjectorKind::PI_P: return kron(s_p, zero);
    case ProjectorKind::PI_AP: return kron(s_a * s_p, zero);
  }
  throw std::invalid_argument("build_projector: unknown kind");
}

/// Pi rho Pi / Tr(Pi rho Pi).
inline DensityMatrix project_state(const DensityMatrix& rho, const Matrix& projector) {
  if (projector.rows() != static_cast<Eigen::Index>(rho.dim())) {
    throw std::invalid_argument("project_state: dimension mismatch");
  }
  DensityMatrix out = rho.sandwiched(projector);
  const double tr = out.trace();
  if (!(tr > 1e-14)) throw EmptySelectionError("project_state: projection has no support");
  out.scale(1.0 / tr);
  return out;
}

inline DensityMatrix project_state(const DensityMatrix& rho, ProjectorKind kind) {
  return project_state(rho, build_projector(kind));
}

/// Normalized state conditioned on reading `branch` on the last qubit (a2).
inline DensityMatrix condition_on_last_qubit(const DensityMatrix& rho, int branch) {
  if (branch != 0 && branch != 1) throw std::invalid_argument("branch must be 0 or 1");
  Matrix p = Matrix::Zero(2, 2);
  p(branch, branch) = 1;
  const auto d = static_cast<Eigen::Index>(rho.dim() / 2);
  return project_state(rho, kron(Matrix(Matrix::Identity(d, d)), p));
}

/// Uhlmann fidelity (Tr sqrt(sqrt(rho2) rho1 sqrt(rho2)))^2. A rank-one rho1
/// reduces to <psi|rho2|psi>.
inline double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  using Dense = Eigen::MatrixXcd;
  Eigen::SelfAdjointEigenSolver<Dense> es1(Dense(rho1.matrix()));
  const auto& ev1 = es1.eigenvalues();
  const Eigen::Index n = ev1.size();
  double subleading = 0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) subleading = std::max(subleading, std::abs(ev1(i)));
  double f;
  if (subleading < 1e-10) {
    const Eigen::VectorXcd psi = es1.eigenvectors().col(n - 1);
    f = (psi.adjoint() * Dense(rho2.matrix()) * psi)(0, 0).real() * ev1(n - 1);
  } else {
    // Eigenvalues at round-off level are zeroed before square roots.
    auto clipped_sqrt = [](const Eigen::VectorXd& ev) {
      return ev.unaryExpr([](double x) { return x > 1e-14 ? std::sqrt(x) : 0.0; }).eval();
    };
    Eigen::SelfAdjointEigenSolver<Dense> es2(Dense(rho2.matrix()));
    const Eigen::VectorXd root = clipped_sqrt(es2.eigenvalues());
    const Dense s = es2.eigenvectors() * root.asDiagonal() * es2.eigenvectors().adjoint();
    const Dense m = s * Dense(rho1.matrix()) * s;
    Eigen::SelfAdjointEigenSolver<Dense> esm((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    const double tr = clipped_sqrt(esm.eigenvalues()).sum();
    f = tr * tr;
  }
  return std::clamp(f, 0.0, 1.0);
}

struct LogicalErrorReport {
  double p_ideal = 0;
  double p_logical = 0;
  double p_eps_all = 0;
  double p_eps_NL = 0;
  double p_eps_L = 0;
  double p_eps_A = 0;
};

/// Error budget of an a2 = 0 encoded state against the pure ideal state:
/// p_ideal = Tr(rho rho_ideal), p_logical = Tr(PI_P rho), p_eps_all = 1 - p_ideal,
/// p_eps_NL = 1 - p_logical, p_eps_L = p_eps_all - p_eps_NL and
/// p_eps_A = Tr(PI_AP rho) - p_ideal.
inline LogicalErrorReport logical_error_report(const DensityMatrix& rho_noisy, const DensityMatrix& rho_ideal) {
  if (rho_noisy.n_qubits() != 6 || rho_ideal.n_qubits() != 6) {
    throw std::invalid_argument("logical_error_report: expected states on (a1, q0..q3, a2)");
  }
  if (!rho_noisy.is_valid(1e-8) || !rho_ideal.is_valid(1e-8)) {
    throw std::invalid_argument("logical_error_report: invalid density matrix");
  }
  LogicalErrorReport r;
  r.p_ideal = (rho_noisy.matrix() * rho_ideal.matrix()).trace().real();
  r.p_logical = expectation(rho_noisy, build_projector(ProjectorKind::PI_P));
  r.p_eps_all = 1.0 - r.p_ideal;
  r.p_eps_NL = 1.0 - r.p_logical;
  r.p_eps_L = r.p_eps_all - r.p_eps_NL;
  r.p_eps_A = expectation(rho_noisy, build_projector(ProjectorKind::PI_AP)) - r.p_ideal;
  return r;
}

}  // namespace h2qed
