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
#include <string>
#include <tuple>
#include <vector>

#include "h2qed/analysis.hpp"
#include "h2qed/builders.hpp"
#include "h2qed/estimate.hpp"
#include "h2qed/noise.hpp"
#include "h2qed/postselect.hpp"
#include "h2qed/sim.hpp"

namespace h2qed {

/// Optimal ansatz angle for the STO-3G Hamiltonian at 0.74 Angstrom.
inline constexpr double kThetaStar = -0.22967;
/// Exact ground-state energy in Ha.
inline constexpr double kExactEnergy = -1.13712;

inline Circuit build_ansatz(EncodingMode mode, double theta, MeasurementBasis basis) {
  return mode == EncodingMode::Unencoded ? build_unencoded_ansatz(theta, basis) : build_encoded_ansatz(theta, basis);
}

/// Independent sub-seed for a named part of a run.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return SplitMix64::mix(seed ^ SplitMix64::mix(tag * 0x9E3779B97F4A7C15ull + 0x632BE59BD9B4E019ull));
}

// ---------------------------------------------------------------------------
// Density-matrix pipelines (infinite-shot limit).

/// Noisy pre-measurement state; encoded states are conditioned on a2 = 0.
inline DensityMatrix noisy_ansatz_state(EncodingMode mode, double theta, const NoiseSpec& noise) {
  const auto rho = evolve_density(attach_noise(build_ansatz(mode, theta, MeasurementBasis::Z), noise));
  return mode == EncodingMode::Encoded ? condition_on_last_qubit(rho, 0) : rho;
}

inline ProjectorKind strategy_projector(Strategy s) {
  switch (s) {
    case Strategy::PSA: return ProjectorKind::PI_A;
    case Strategy::PSP: return ProjectorKind::PI_P;
    default: return ProjectorKind::PI_AP;
  }
}

/// Tr(H rho_i) with rho_i the strategy-projected state (unencoded ignores `s`).
inline double density_energy(EncodingMode mode, double theta, const NoiseSpec& noise, Strategy s,
                             const H2Hamiltonian& ham = H2Hamiltonian::sto3g()) {
  auto rho = noisy_ansatz_state(mode, theta, noise);
  if (mode == EncodingMode::Encoded && s != Strategy::None) rho = project_state(rho, strategy_projector(s));
  return energy_expectation(rho, ham, mode);
}

// ---------------------------------------------------------------------------
// Shot pipelines: raw -> [RED vote] -> a2 = 0 -> strategy -> estimate.

struct ShotOptions {
  std::uint64_t shots = 10000;
  std::uint64_t seed = 0;
  bool red = false;
  int workers = 0;
  std::uint64_t batch_size = 10000;
  /// Use exact outcome distributions instead of sampling (small registers only).
  bool exact = false;
};

struct BasisOutcome {
  ShotTable table;           ///< after RED vote and a2 selection
  ProbabilityTable dist;     ///< same, exact mode
  SurvivalStats red_stats;   ///< RED vote survival over the raw total
  double raw_total = 0;      ///< shots (or probability mass) before any filter
  double selected_total = 0; ///< mass after RED vote and a2 selection
};

namespace detail {

template <class W>
void select_common(OutcomeTable<W> raw, const RedLayout* layout, EncodingMode mode, OutcomeTable<W>& out,
                   BasisOutcome& bo) {
  bo.raw_total = static_cast<double>(raw.total());
  if (layout) {
    auto [voted, stats] = red_vote(raw, *layout);
    bo.red_stats = stats;
    raw = std::move(voted);
  } else {
    bo.red_stats = SurvivalStats::from_counts(bo.raw_total, bo.raw_total);
  }
  out = mode == EncodingMode::Encoded ? select_a2_branch(raw, 0) : std::move(raw);
  bo.selected_total = static_cast<double>(out.total());
}

}  // namespace detail

inline BasisOutcome run_basis(EncodingMode mode, double theta, MeasurementBasis basis, const NoiseSpec& noise,
                              const ShotOptions& opt) {
  Circuit c = build_ansatz(mode, theta, basis);
  RedLayout layout;
  if (opt.red) std::tie(c, layout) = wrap_with_red(c);
  const auto nc = attach_noise(c, noise);
  BasisOutcome bo;
  const RedLayout* lp = opt.red ? &layout : nullptr;
  if (opt.exact) {
    detail::select_common(exact_distribution(nc), lp, mode, bo.dist, bo);
  } else {
    TrajectoryConfig cfg;
    cfg.n_shots = opt.shots;
    cfg.seed = derive_seed(opt.seed, basis == MeasurementBasis::Z ? 1 : 2);
    cfg.workers = opt.workers;
    cfg.batch_size = opt.batch_size;
    detail::select_common(sample_shots(nc, cfg), lp, mode, bo.table, bo);
  }
  return bo;
}

struct PipelineRow {
  std::string label;
  Strategy strategy = Strategy::None;
  EnergyEstimate estimate;
  bool empty = false;          ///< post-selection rejected every shot
  double eta_raw_z = 1.0;      ///< Z-basis survivors over all raw shots
  double sigma_eta_raw_z = 0;  ///< binomial SEM of eta_raw_z
};

/// Runs one circuit family through the whole pipeline for each strategy
/// (the unencoded family takes a single NONE row).
inline std::vector<PipelineRow> run_pipeline(EncodingMode mode, double theta, const NoiseSpec& noise,
                                             const std::vector<Strategy>& strategies, const ShotOptions& opt,
                                             const H2Hamiltonian& ham = H2Hamiltonian::sto3g()) {
  const auto z = run_basis(mode, theta, MeasurementBasis::Z, noise, opt);
  const auto x = run_basis(mode, theta, MeasurementBasis::X, noise, opt);
  std::vector<Strategy> list = mode == EncodingMode::Unencoded ? std::vector<Strategy>{Strategy::None} : strategies;
  std::vector<PipelineRow> rows;
  const std::string family = mode == EncodingMode::Unencoded ? "UNENCODED" : "ENCODED";
  for (Strategy s : list) {
    PipelineRow row;
    row.strategy = s;
    row.label = mode == EncodingMode::Unencoded ? family : family + "_" + std::string(strategy_name(s));
    if (opt.red) row.label += "+RED";
    try {
      SurvivalStats sz, sx;
      if (opt.exact) {
        auto [zt, zs] = apply_strategy(z.dist, s);
        auto [xt, xs] = apply_strategy(x.dist, s);
        sz = zs;
        sx = xs;
        row.estimate = energy_from_distribution(zt, xt, ham, mode, static_cast<double>(opt.shots));
        row.eta_raw_z = zt.total() / z.raw_total;
      } else {
        auto [zt, zs] = apply_strategy(z.table, s);
        auto [xt, xs] = apply_strategy(x.table, s);
        sz = zs;
        sx = xs;
        row.estimate = energy_from_shots(zt, xt, ham, mode);
        row.eta_raw_z = static_cast<double>(zt.total()) / z.raw_total;
      }
      row.estimate.eta_z = sz.eta;
      row.estimate.sigma_eta_z = sz.sigma_eta;
      row.estimate.eta_x = sx.eta;
      row.estimate.sigma_eta_x = sx.sigma_eta;
    } catch (const EmptySelectionError&) {
      row.empty = true;
      row.estimate.eta_z = row.estimate.eta_x = 0.0;
      row.eta_raw_z = 0.0;
    }
    if (!opt.exact) row.sigma_eta_raw_z = std::sqrt(row.eta_raw_z * (1 - row.eta_raw_z) / z.raw_total);
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Fidelity and logical-error studies.

struct FidelityPoint {
  double p2 = 0;
  double f_unenc = 0, f_enc = 0, f_a = 0, f_p = 0, f_ap = 0;
  LogicalErrorReport errors;
};

inline FidelityPoint fidelity_point(const NoiseSpec& noise, double p2_label, double theta = kThetaStar) {
  FidelityPoint pt;
  pt.p2 = p2_label;
  const auto ideal_u = DensityMatrix::pure(run_noiseless(build_unencoded_ansatz(theta)));
  pt.f_unenc = fidelity(ideal_u, noisy_ansatz_state(EncodingMode::Unencoded, theta, noise));
  const auto ideal = DensityMatrix::pure(encoded_target_state(theta));
  const auto rho = noisy_ansatz_state(EncodingMode::Encoded, theta, noise);
  pt.f_enc = fidelity(ideal, rho);
  pt.f_a = fidelity(ideal, project_state(rho, ProjectorKind::PI_A));
  pt.f_p = fidelity(ideal, project_state(rho, ProjectorKind::PI_P));
  pt.f_ap = fidelity(ideal, project_state(rho, ProjectorKind::PI_AP));
  pt.errors = logical_error_report(rho, ideal);
  return pt;
}

inline FidelityPoint fidelity_point(double p2, double theta = kThetaStar) {
  return fidelity_point(NoiseSpec{DepolarizingParams::from_p2(p2)}, p2, theta);
}

struct StatePrepPoint {
  double p2 = 0;
  double f_noisy = 0, f_s_a = 0, f_s_p = 0, f_s_ap = 0;
  double tr_s_a = 0, tr_s_p = 0, tr_s_ap = 0;
};

inline StatePrepPoint state_prep_point(const NoiseSpec& noise, double p2_label) {
  StatePrepPoint pt;
  pt.p2 = p2_label;
  const auto rho = evolve_density(attach_noise(build_state_prep_422(true), noise));
  const auto ideal = DensityMatrix::pure(prep_target_state());
  pt.f_noisy = fidelity(ideal, rho);
  pt.f_s_a = fidelity(ideal, project_state(rho, ProjectorKind::S_A));
  pt.f_s_p = fidelity(ideal, project_state(rho, ProjectorKind::S_P));
  pt.f_s_ap = fidelity(ideal, project_state(rho, ProjectorKind::S_AP));
  pt.tr_s_a = expectation(rho, build_projector(ProjectorKind::S_A));
  pt.tr_s_p = expectation(rho, build_projector(ProjectorKind::S_P));
  pt.tr_s_ap = expectation(rho, build_projector(ProjectorKind::S_AP));
  return pt;
}

inline StatePrepPoint state_prep_point(double p2) {
  return state_prep_point(NoiseSpec{DepolarizingParams::from_p2(p2)}, p2);
}

}  // namespace h2qed
