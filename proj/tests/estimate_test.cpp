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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "h2qed/builders.hpp"
#include "h2qed/estimate.hpp"
#include "h2qed/sim.hpp"

using namespace h2qed;

namespace {

constexpr double kTheta = -0.22967;

ShotTable table(const std::vector<std::string>& cols, std::initializer_list<std::pair<const char*, std::uint64_t>> rows,
                MeasurementBasis basis = MeasurementBasis::Z) {
  ShotTable t(cols, basis);
  for (const auto& [bits, n] : rows) t.add(Bitstring(bits), n);
  return t;
}

ProbabilityTable exact(EncodingMode mode, double theta, MeasurementBasis basis, double p2 = 0.0) {
  const auto c = mode == EncodingMode::Unencoded ? build_unencoded_ansatz(theta, basis) : build_encoded_ansatz(theta, basis);
  return exact_distribution(attach_noise(c, DepolarizingParams::from_p2(p2)));
}

// Jordan-Wigner annihilation operator for spin orbital p of four; the Fock
// index carries occupation n_p in bit p and the Z string runs over modes below p.
Matrix annihilate(int p) {
  Matrix a = Matrix::Zero(16, 16);
  for (unsigned s = 0; s < 16; ++s) {
    if (!((s >> p) & 1u)) continue;
    const int below = std::popcount(s & ((1u << p) - 1u));
    a(s ^ (1u << p), s) = below % 2 ? -1.0 : 1.0;
  }
  return a;
}

// Second-quantized two-electron H2 Hamiltonian, term by term, restricted to the
// four singlet determinants. Qubit 0 is the spin-up orbital pair (0, 1), qubit 1
// the spin-down pair (2, 3); bit value 1 marks the antibonding orbital.
Matrix singlet_block(const Integrals& h) {
  Matrix a[4], c[4];
  for (int p = 0; p < 4; ++p) {
    a[p] = annihilate(p);
    c[p] = a[p].adjoint();
  }
  Matrix H = h.h00 * c[0] * a[0] + h.h11 * c[1] * a[1] + h.h22 * c[2] * a[2] + h.h33 * c[3] * a[3];
  H += h.h2002 * c[2] * c[0] * a[0] * a[2] + h.h3113 * c[3] * c[1] * a[1] * a[3] +
       h.h2112 * c[2] * c[1] * a[1] * a[2] + h.h0330 * c[0] * c[3] * a[3] * a[0] +
       (h.h2332 - h.h2323) * c[2] * c[3] * a[3] * a[2] + (h.h0110 - h.h0101) * c[0] * c[1] * a[1] * a[0];
  H += h.h2103 * (c[2] * c[1] * a[0] * a[3] + c[3] * c[0] * a[1] * a[2]);
  H += h.h2013 * (c[2] * c[0] * a[1] * a[3] + c[3] * c[1] * a[0] * a[2]);
  // Fock index of (l0, l1): spin-up electron in orbital l0, spin-down in 2 + l1.
  auto fock = [](int l0, int l1) { return (1u << l0) | (1u << (2 + l1)); };
  Matrix block(4, 4);
  for (int r = 0; r < 4; ++r) {
    for (int s = 0; s < 4; ++s) block(r, s) = H(fock(r >> 1, r & 1), fock(s >> 1, s & 1));
  }
  return block;
}

Integrals random_integrals(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  Integrals h;
  for (double* v : {&h.h00, &h.h11, &h.h22, &h.h33, &h.h2002, &h.h3113, &h.h2112, &h.h2103, &h.h2332, &h.h2323,
                    &h.h0110, &h.h0101}) {
    *v = u(rng);
  }
  h.h0330 = h.h2112;
  h.h2013 = h.h2103;
  return h;
}

}  // namespace

TEST(Hamiltonian, DefaultCoefficients) {
  const auto g = H2Hamiltonian::sto3g().coefficients();
  EXPECT_DOUBLE_EQ(g[0], -0.349833);
  EXPECT_DOUBLE_EQ(g[1], -0.388748);
  EXPECT_DOUBLE_EQ(g[2], -0.388748);
  EXPECT_DOUBLE_EQ(g[3], 0.0111772);
  EXPECT_DOUBLE_EQ(g[4], 0.181771);
  EXPECT_DOUBLE_EQ(H2Hamiltonian::sto3g().bond_length_angstrom, 0.74);
  EXPECT_THROW(H2Hamiltonian::from_coefficients({0, 0, NAN, 0, 0}), std::invalid_argument);
}

TEST(Decode, SpecExamples) {
  EXPECT_EQ(decode_logical(Bitstring("0000")), (std::pair<int, int>{0, 0}));
  EXPECT_EQ(decode_logical(Bitstring("1111")), (std::pair<int, int>{0, 0}));
  EXPECT_EQ(decode_logical(Bitstring("1001")), (std::pair<int, int>{1, 1}));
  EXPECT_FALSE(decode_logical(Bitstring("0001")).has_value());
  EXPECT_THROW(decode_logical(Bitstring("000")), std::invalid_argument);
}

TEST(Energy, ThetaZeroShotTables) {
  const auto ham = H2Hamiltonian::sto3g();
  const auto z = table({"q0", "q1"}, {{"00", 1000}});
  // |00> read in the X basis is uniform, so <X0X1> = 0.
  const auto x = table({"q0", "q1"}, {{"00", 250}, {"01", 250}, {"10", 250}, {"11", 250}}, MeasurementBasis::X);
  const auto e = energy_from_shots(z, x, ham, EncodingMode::Unencoded);
  EXPECT_NEAR(e.mean, -0.349833 - 0.388748 - 0.388748 + 0.0111772, 1e-15);
  EXPECT_NEAR(e.mean, -1.116152, 1e-6);
}

TEST(Energy, NoiselessLimitAtOptimum) {
  const auto ham = H2Hamiltonian::sto3g();
  for (auto mode : {EncodingMode::Unencoded, EncodingMode::Encoded}) {
    auto z = exact(mode, kTheta, MeasurementBasis::Z);
    auto x = exact(mode, kTheta, MeasurementBasis::X);
    if (mode == EncodingMode::Encoded) {
      const int a2 = z.column("a2");
      auto keep = [a2](const Bitstring& b) { return b[static_cast<std::size_t>(a2)] == 0; };
      z = z.filter(keep);
      x = x.filter(keep);
    }
    const auto e = energy_from_distribution(z, x, ham, mode);
    EXPECT_NEAR(e.mean, -1.13712, 1e-5);
    EXPECT_NEAR(e.variance, 0.04700, 1e-4);
  }
}

TEST(Energy, VarianceIdentityAtOptimum) {
  const auto g = H2Hamiltonian::sto3g().coefficients();
  // <Z0> = <Z1> = cos(theta), <Z0Z1> = 1, <X0X1> = sin(theta).
  const double c = std::cos(kTheta), s = std::sin(kTheta);
  const double var = g[1] * g[1] * (1 - c * c) + g[2] * g[2] * (1 - c * c) + g[4] * g[4] * (1 - s * s);
  EXPECT_NEAR(var, 0.04700, 1e-4);
}

TEST(Energy, MeanIsLinearInTermValues) {
  const auto ham = H2Hamiltonian::sto3g();
  const auto z = table({"q0", "q1"}, {{"00", 900}, {"01", 40}, {"10", 35}, {"11", 25}});
  const auto x = table({"q0", "q1"}, {{"00", 300}, {"01", 210}, {"10", 190}, {"11", 300}}, MeasurementBasis::X);
  const auto e = energy_from_shots(z, x, ham, EncodingMode::Unencoded);
  const double z0 = (900 + 40 - 35 - 25) / 1000.0, z1 = (900 - 40 + 35 - 25) / 1000.0;
  const double zz = (900 - 40 - 35 + 25) / 1000.0, xx = (300 - 210 - 190 + 300) / 1000.0;
  const auto g = ham.coefficients();
  EXPECT_DOUBLE_EQ(e.mean, g[0] + g[1] * z0 + g[2] * z1 + g[3] * zz + g[4] * xx);
  const double sem2 = (g[1] * g[1] * (1 - z0 * z0) + g[2] * g[2] * (1 - z1 * z1) + g[3] * g[3] * (1 - zz * zz)) / 1000 +
                      g[4] * g[4] * (1 - xx * xx) / 1000;
  EXPECT_NEAR(e.sem, std::sqrt(sem2), 1e-15);
}

TEST(Energy, EncodedDecodingUsesCodeParities) {
  // 0110 is the |11> codeword: Z0 = Z1 = -1, Z0Z1 = +1.
  const std::vector<std::string> cols = {"a1", "q0", "q1", "q2", "q3", "a2"};
  const auto z = table(cols, {{"001100", 10}});
  const auto x = table(cols, {{"000000", 10}}, MeasurementBasis::X);
  const auto e = energy_from_shots(z, x, H2Hamiltonian::sto3g(), EncodingMode::Encoded);
  EXPECT_EQ(e.term_values, (std::vector<double>{1, -1, -1, 1, 1}));
}

TEST(Energy, EmptyTableIsAnError) {
  const ShotTable empty({"q0", "q1"});
  const auto x = table({"q0", "q1"}, {{"00", 1}}, MeasurementBasis::X);
  EXPECT_THROW(energy_from_shots(empty, x, H2Hamiltonian::sto3g(), EncodingMode::Unencoded), EmptySelectionError);
  EXPECT_THROW(energy_from_shots(x, empty, H2Hamiltonian::sto3g(), EncodingMode::Unencoded), EmptySelectionError);
}

TEST(Energy, DistributionMatchesDensityExpectation) {
  const auto ham = H2Hamiltonian::sto3g();
  for (double p2 : {0.0, 0.003, 0.02}) {
    for (double theta : {kTheta, 1.1, -2.5}) {
      const auto e = energy_from_distribution(exact(EncodingMode::Unencoded, theta, MeasurementBasis::Z, p2),
                                              exact(EncodingMode::Unencoded, theta, MeasurementBasis::X, p2), ham,
                                              EncodingMode::Unencoded);
      // The X-basis term is read after the basis change, so compare term by term.
      const auto rho_z = evolve_density(attach_noise(build_unencoded_ansatz(theta), DepolarizingParams::from_p2(p2)));
      const auto rho_x = evolve_density(
          attach_noise(build_unencoded_ansatz(theta, MeasurementBasis::X), DepolarizingParams::from_p2(p2)));
      const auto g = ham.coefficients();
      const double expected = g[0] + g[1] * expectation(rho_z, pauli_operator("ZI")) +
                              g[2] * expectation(rho_z, pauli_operator("IZ")) +
                              g[3] * expectation(rho_z, pauli_operator("ZZ")) +
                              g[4] * expectation(rho_x, pauli_operator("ZZ"));
      EXPECT_NEAR(e.mean, expected, 1e-9);
      if (p2 == 0.0) EXPECT_NEAR(e.mean, ham.analytic_energy(theta), 1e-9);
    }
  }
}

TEST(Energy, EncodedPhysicalHamiltonianMatchesDistribution) {
  const auto ham = H2Hamiltonian::sto3g();
  const auto rho = evolve_density(noiseless(build_encoded_ansatz(kTheta).without_measurements()));
  // Conditioning on a2 = 0 and evaluating the 64x64 code-space Hamiltonian.
  Matrix p0 = Matrix::Zero(64, 64);
  for (int i = 0; i < 64; i += 2) p0(i, i) = 1;
  const Matrix r = p0 * rho.matrix() * p0;
  const DensityMatrix cond(6, r / r.trace().real());
  EXPECT_NEAR(energy_expectation(cond, ham, EncodingMode::Encoded), -1.13712, 1e-5);
}

TEST(Scan, NoiselessArgminAndClosedForm) {
  const auto ham = H2Hamiltonian::sto3g();
  auto runner = [&](double th) {
    return energy_from_distribution(exact(EncodingMode::Unencoded, th, MeasurementBasis::Z),
                                    exact(EncodingMode::Unencoded, th, MeasurementBasis::X), ham,
                                    EncodingMode::Unencoded);
  };
  const auto r = scan_theta(runner);
  ASSERT_EQ(r.thetas.size(), 150u);
  std::size_t nearest = 0;
  for (std::size_t i = 0; i < r.thetas.size(); ++i) {
    if (std::abs(r.thetas[i] - kTheta) < std::abs(r.thetas[nearest] - kTheta)) nearest = i;
    EXPECT_NEAR(r.estimates[i].mean, ham.analytic_energy(r.thetas[i]), 1e-9);
  }
  EXPECT_EQ(r.argmin, nearest);
}

TEST(Scan, ZOnlyHamiltonianMinimizesAtZero) {
  auto g = H2Hamiltonian::sto3g().coefficients();
  g[4] = 0;
  const auto ham = H2Hamiltonian::from_coefficients(g);
  auto runner = [&](double th) {
    EnergyEstimate e;
    e.mean = ham.analytic_energy(th);
    return e;
  };
  // An odd grid contains zero exactly.
  const auto r = scan_theta(runner, 151);
  EXPECT_NEAR(r.theta_min, 0.0, 1e-12);
  // On an even grid two points straddle zero with equal energy.
  const auto even = scan_theta(runner, 150);
  EXPECT_LE(std::abs(even.theta_min), std::numbers::pi / 149 + 1e-12);
  EXPECT_THROW(scan_theta(runner, 1), std::invalid_argument);
}

TEST(Scan, TiesResolveTowardSmallerMagnitude) {
  auto flat = [](double) { return EnergyEstimate{}; };
  const auto r = scan_theta(flat, 5, -2, 2);
  EXPECT_EQ(r.theta_min, 0.0);
}

TEST(Budget, SpecExamples) {
  EXPECT_EQ(shot_budget(0.04700, 0.5e-3), 188000u);
  EXPECT_EQ(shot_budget(0.0, 0.5e-3), 1u);
  EXPECT_EQ(shot_budget(0.04, 1e-3), 40000u);
  EXPECT_EQ(shot_budget(0.0400001, 1e-3), 40001u);
  EXPECT_THROW(shot_budget(-1, 1e-3), std::invalid_argument);
  EXPECT_THROW(shot_budget(0.04, 0), std::invalid_argument);
}

TEST(Integrals, ZeroGivesZero) {
  for (double g : integrals_to_coeffs(Integrals{})) EXPECT_EQ(g, 0.0);
}

TEST(Integrals, OneBodyDiagonalExample) {
  Integrals h;
  h.h00 = -1;
  h.h33 = -1;
  const auto g = integrals_to_coeffs(h);
  // Each orbital energy enters through a number operator (I +- Z) / 2.
  EXPECT_DOUBLE_EQ(g[0], -1.0);
  EXPECT_DOUBLE_EQ(g[1], -0.5);
  EXPECT_DOUBLE_EQ(g[2], 0.5);
  EXPECT_DOUBLE_EQ(g[3], 0.0);
  EXPECT_DOUBLE_EQ(g[4], 0.0);
}

TEST(Integrals, MatchesSecondQuantizedOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const auto h = random_integrals(rng);
    const Matrix oracle = singlet_block(h);
    const Matrix ours = H2Hamiltonian::from_coefficients(integrals_to_coeffs(h)).matrix();
    ASSERT_LT((oracle - ours).cwiseAbs().maxCoeff(), 1e-9) << "trial " << trial;
  }
}

TEST(Integrals, RejectsBrokenSymmetry) {
  Integrals h;
  h.h2103 = 0.1;
  EXPECT_THROW(integrals_to_coeffs(h), std::invalid_argument);
  h.h2013 = 0.1;
  h.h2112 = 0.2;
  EXPECT_THROW(integrals_to_coeffs(h), std::invalid_argument);
}

TEST(Hqc, SpecExamples) {
  EXPECT_DOUBLE_EQ(hqc_cost({}), 5.0);
  EXPECT_NEAR(hqc_cost({9, 18, 18, 125400}), 7002.32, 1e-9);
  EXPECT_NEAR(hqc_cost({7, 25, 18, 376000}), 26099.4, 1e-9);
}

TEST(Hqc, LinearInShots) {
  const ResourceCount a{10, 8, 6, 1000}, b{10, 8, 6, 3000};
  EXPECT_NEAR(hqc_cost(b) - 5, 3 * (hqc_cost(a) - 5), 1e-9);
}
