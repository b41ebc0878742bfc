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
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "h2qed/noise.hpp"
#include "h2qed/shot_table.hpp"
#include "h2qed/state.hpp"

namespace h2qed {

/// SplitMix64 generator. Each shot owns a stream keyed by (seed, shot index),
/// so results do not depend on how shots are divided among workers.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static SplitMix64 for_shot(std::uint64_t seed, std::uint64_t shot) {
    return SplitMix64(mix(seed ^ mix(shot + 0x9E3779B97F4A7C15ull)));
  }

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

struct TrajectoryConfig {
  std::uint64_t n_shots = 1;
  std::uint64_t seed = 0;
  int max_qubits = 20;
  /// Shots per batch; batches are merged in index order.
  std::uint64_t batch_size = 10000;
  /// Worker threads; 0 reads H2QED_WORKERS, falling back to the hardware count.
  int workers = 0;
  /// Propagate the trailing classical part of the circuit on bits instead of
  /// amplitudes. Exact for terminal Z measurements; off only for cross-checks.
  bool classical_tail = true;

  void validate() const {
    if (n_shots < 1) throw std::invalid_argument("TrajectoryConfig: n_shots must be at least 1");
    if (batch_size < 1) throw std::invalid_argument("TrajectoryConfig: batch_size must be at least 1");
    if (max_qubits < 1 || max_qubits > kMaxQubits) {
      throw std::invalid_argument("TrajectoryConfig: max_qubits must lie in [1, " + std::to_string(kMaxQubits) + "]");
    }
  }
};

inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("H2QED_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Exact state after every gate and channel, before readout error.
inline DensityMatrix evolve_density(const NoisyCircuit& nc, int max_qubits = 12) {
  const int n = nc.n_qubits();
  if (n > max_qubits) {
    throw std::length_error("evolve_density: " + std::to_string(n) + " qubits exceed the cap of " +
                            std::to_string(max_qubits));
  }
  DensityMatrix rho(n);
  const Matrix2 paulis[4] = {gates::identity(), gates::pauli_x(), gates::pauli_y(), gates::pauli_z()};
  if (nc.p_init > 0) {
    const double w[2] = {1 - nc.p_init, nc.p_init};
    for (int q = 0; q < n; ++q) rho.apply_mixture(q, std::span<const double>(w, 2), std::span<const Matrix2>(paulis, 2));
  }
  for (const auto& op : nc.ops) {
    if (const auto* g = std::get_if<Gate>(&op)) {
      if (g->kind != GateKind::MEASURE_Z) apply_gate(rho, *g);
    } else if (const auto* pc = std::get_if<PauliChannel>(&op)) {
      const double w[4] = {1 - pc->total(), pc->px, pc->py, pc->pz};
      rho.apply_mixture(pc->qubit, w, paulis);
    } else {
      const auto& d = std::get<DampingChannel>(op);
      const auto ks = amplitude_damping_kraus(d.gamma);
      rho.apply_kraus(d.qubit, ks);
    }
  }
  return rho;
}

/// Outcome probabilities of Z measurements on `measured` (in column order),
/// with independent classical readout flips.
inline ProbabilityTable born_distribution(const DensityMatrix& rho, const ReadoutParams& readout,
                                          const std::vector<int>& measured, std::vector<std::string> columns,
                                          MeasurementBasis basis = MeasurementBasis::Z) {
  readout.validate();
  const int n = rho.n_qubits();
  const int m = static_cast<int>(measured.size());
  if (static_cast<int>(columns.size()) != m) throw std::invalid_argument("born_distribution: column count mismatch");
  std::vector<double> p(std::size_t{1} << m, 0.0);
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    std::size_t key = 0;
    for (int k = 0; k < m; ++k) key = (key << 1) | ((i >> (n - 1 - measured[static_cast<std::size_t>(k)])) & 1u);
    p[key] += rho(i, i).real();
  }
  if (readout.active()) {
    for (int k = 0; k < m; ++k) {
      const std::size_t bit = std::size_t{1} << (m - 1 - k);
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (i & bit) continue;
        const double p0 = p[i], p1 = p[i | bit];
        p[i] = p0 * (1 - readout.p_flip0) + p1 * readout.p_flip1;
        p[i | bit] = p0 * readout.p_flip0 + p1 * (1 - readout.p_flip1);
      }
    }
  }
  ProbabilityTable out(std::move(columns), basis);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0) out.add(Bitstring::from_packed(i, m), p[i]);
  }
  return out;
}

/// All qubits measured, columns named q0, q1, ...
inline ProbabilityTable born_distribution(const DensityMatrix& rho, const ReadoutParams& readout = {}) {
  std::vector<int> measured;
  std::vector<std::string> cols;
  for (int q = 0; q < rho.n_qubits(); ++q) {
    measured.push_back(q);
    cols.push_back("q" + std::to_string(q));
  }
  return born_distribution(rho, readout, measured, std::move(cols));
}

/// Exact outcome distribution of a noisy circuit (density backend).
inline ProbabilityTable exact_distribution(const NoisyCircuit& nc, int max_qubits = 12) {
  const auto rho = evolve_density(nc, max_qubits);
  const auto& c = nc.circuit;
  return born_distribution(rho, nc.readout, c.measured_qubits(), ProbabilityTable::for_circuit(c).columns(),
                           c.basis());
}

namespace detail {

// Precomputed per-circuit data for the trajectory sampler.
class TrajectoryPlan {
 public:
  TrajectoryPlan(const NoisyCircuit& nc, bool classical_tail) : nc_(nc), n_(nc.n_qubits()) {
    const auto& ops = nc.ops;
    tail_ = ops.size();
    if (classical_tail) {
      while (tail_ > 0 && tail_compatible(ops[tail_ - 1])) --tail_;
    }
    std::vector<bool> touched(static_cast<std::size_t>(n_), !classical_tail);
    for (std::size_t i = 0; i < tail_; ++i) {
      for (int q : op_qubits(ops[i])) touched[static_cast<std::size_t>(q)] = true;
    }
    local_.assign(static_cast<std::size_t>(n_), -1);
    for (int q = 0; q < n_; ++q) {
      if (touched[static_cast<std::size_t>(q)]) {
        local_[static_cast<std::size_t>(q)] = static_cast<int>(prefix_qubits_.size());
        prefix_qubits_.push_back(q);
      }
    }
    for (std::size_t i = 0; i < tail_; ++i) {
      if (const auto* g = std::get_if<Gate>(&ops[i])) {
        if (g->kind == GateKind::MEASURE_Z) continue;
        if (g->kind == GateKind::RESET) {
          steps_.push_back({Step::Reset, local(g->targets[0]), -1, {}, {}, 0, 0, 0});
        } else if (is_two_qubit(g->kind)) {
          const auto qs = g->qubits();
          steps_.push_back({Step::Unitary2, local(qs[0]), local(qs[1]), {}, gates::two_qubit(*g), 0, 0, 0});
        } else {
          steps_.push_back({Step::Unitary1, local(g->targets[0]), -1, gates::single_qubit(*g), {}, 0, 0, 0});
        }
      } else if (const auto* pc = std::get_if<PauliChannel>(&ops[i])) {
        steps_.push_back({Step::Pauli, local(pc->qubit), -1, {}, {}, pc->px, pc->py, pc->pz});
      } else {
        const auto& d = std::get<DampingChannel>(ops[i]);
        steps_.push_back({Step::Damping, local(d.qubit), -1, {}, {}, d.gamma, 0, 0});
      }
    }
    measured_ = nc.circuit.measured_qubits();
  }

  int prefix_size() const { return static_cast<int>(prefix_qubits_.size()); }

  /// One shot; returns the packed measured bits (column 0 most significant).
  std::uint64_t run_shot(SplitMix64& rng, std::vector<Complex>& amps, std::vector<std::uint8_t>& bits) const {
    const int k = prefix_size();
    std::fill(bits.begin(), bits.end(), std::uint8_t{0});
    std::size_t start = 0;
    if (nc_.p_init > 0) {
      for (int q = 0; q < n_; ++q) {
        if (rng.uniform() < nc_.p_init) {
          const int l = local_[static_cast<std::size_t>(q)];
          if (l >= 0) {
            start |= std::size_t{1} << (k - 1 - l);
          } else {
            bits[static_cast<std::size_t>(q)] ^= 1;
          }
        }
      }
    }
    if (k > 0) {
      run_prefix(rng, amps, start);
      const std::size_t outcome = sample_index(rng, amps);
      for (int l = 0; l < k; ++l) {
        bits[static_cast<std::size_t>(prefix_qubits_[static_cast<std::size_t>(l)])] =
            static_cast<std::uint8_t>((outcome >> (k - 1 - l)) & 1u);
      }
    }
    run_tail(rng, bits);
    std::uint64_t key = 0;
    const auto& ro = nc_.readout;
    for (int q : measured_) {
      std::uint8_t b = bits[static_cast<std::size_t>(q)];
      if (ro.active()) {
        const double u = rng.uniform();
        if (b == 0 && u < ro.p_flip0) {
          b = 1;
        } else if (b == 1 && u < ro.p_flip1) {
          b = 0;
        }
      }
      key = (key << 1) | b;
    }
    return key;
  }

  std::size_t n_measured() const { return measured_.size(); }

 private:
  struct Step {
    enum Kind { Unitary1, Unitary2, Pauli, Damping, Reset } kind;
    int a;
    int b;
    Matrix2 u1;
    Matrix4 u2;
    double p0, p1, p2;
  };

  static bool tail_compatible(const NoisyOp& op) {
    if (const auto* g = std::get_if<Gate>(&op)) return is_classical_compatible(g->kind);
    return true;
  }

  static std::vector<int> op_qubits(const NoisyOp& op) {
    if (const auto* g = std::get_if<Gate>(&op)) return g->qubits();
    if (const auto* pc = std::get_if<PauliChannel>(&op)) return {pc->qubit};
    return {std::get<DampingChannel>(op).qubit};
  }

  int local(int q) const { return local_[static_cast<std::size_t>(q)]; }

  void run_prefix(SplitMix64& rng, std::vector<Complex>& amps, std::size_t start) const {
    const int k = prefix_size();
    std::fill(amps.begin(), amps.end(), Complex(0));
    amps[start] = 1;
    std::span<Complex> data(amps);
    static const Matrix2 px = gates::pauli_x(), py = gates::pauli_y(), pz = gates::pauli_z();
    for (const auto& s : steps_) {
      switch (s.kind) {
        case Step::Unitary1: detail::apply_1q(data, k, s.a, s.u1); break;
        case Step::Unitary2: detail::apply_2q(data, k, s.a, s.b, s.u2); break;
        case Step::Pauli: {
          const double u = rng.uniform();
          if (u < s.p0) {
            detail::apply_1q(data, k, s.a, px);
          } else if (u < s.p0 + s.p1) {
            detail::apply_1q(data, k, s.a, py);
          } else if (u < s.p0 + s.p1 + s.p2) {
            detail::apply_1q(data, k, s.a, pz);
          }
          break;
        }
        case Step::Damping: {
          const std::size_t bit = detail::bit_of(k, s.a);
          double one = 0;
          for (std::size_t i = 0; i < amps.size(); ++i) {
            if (i & bit) one += std::norm(amps[i]);
          }
          const double u = rng.uniform();
          if (u < s.p0 * one) {
            for (std::size_t i = 0; i < amps.size(); ++i) {
              if (i & bit) {
                amps[i ^ bit] = amps[i];
                amps[i] = 0;
              }
            }
            renormalize(amps, one);
          } else {
            const double keep = std::sqrt(1 - s.p0);
            for (std::size_t i = 0; i < amps.size(); ++i) {
              if (i & bit) amps[i] *= keep;
            }
            renormalize(amps, 1 - s.p0 * one);
          }
          break;
        }
        case Step::Reset: {
          const std::size_t bit = detail::bit_of(k, s.a);
          double one = 0;
          for (std::size_t i = 0; i < amps.size(); ++i) {
            if (i & bit) one += std::norm(amps[i]);
          }
          const bool was_one = rng.uniform() < one;
          for (std::size_t i = 0; i < amps.size(); ++i) {
            if (!(i & bit)) {
              amps[i] = was_one ? amps[i | bit] : amps[i];
              amps[i | bit] = 0;
            }
          }
          renormalize(amps, was_one ? one : 1 - one);
          break;
        }
      }
    }
  }

  static void renormalize(std::vector<Complex>& amps, double norm2) {
    if (norm2 <= 0) return;
    const double s = 1.0 / std::sqrt(norm2);
    for (auto& a : amps) a *= s;
  }

  static std::size_t sample_index(SplitMix64& rng, const std::vector<Complex>& amps) {
    double total = 0;
    for (const auto& a : amps) total += std::norm(a);
    const double u = rng.uniform() * total;
    double acc = 0;
    std::size_t last_nonzero = 0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
      const double p = std::norm(amps[i]);
      if (p == 0) continue;
      acc += p;
      last_nonzero = i;
      if (u < acc) return i;
    }
    return last_nonzero;
  }

  void run_tail(SplitMix64& rng, std::vector<std::uint8_t>& bits) const {
    for (std::size_t i = tail_; i < nc_.ops.size(); ++i) {
      const auto& op = nc_.ops[i];
      if (const auto* g = std::get_if<Gate>(&op)) {
        switch (g->kind) {
          case GateKind::X:
          case GateKind::Y: bits[static_cast<std::size_t>(g->targets[0])] ^= 1; break;
          case GateKind::CNOT:
            bits[static_cast<std::size_t>(g->targets[0])] ^= bits[static_cast<std::size_t>(*g->control)];
            break;
          case GateKind::SWAP:
            std::swap(bits[static_cast<std::size_t>(g->targets[0])], bits[static_cast<std::size_t>(g->targets[1])]);
            break;
          default: break;
        }
      } else if (const auto* pc = std::get_if<PauliChannel>(&op)) {
        const double u = rng.uniform();
        if (u < pc->px + pc->py) bits[static_cast<std::size_t>(pc->qubit)] ^= 1;
      } else {
        const auto& d = std::get<DampingChannel>(op);
        auto& b = bits[static_cast<std::size_t>(d.qubit)];
        if (rng.uniform() < d.gamma && b == 1) b = 0;
      }
    }
  }

  const NoisyCircuit& nc_;
  int n_;
  std::size_t tail_ = 0;
  std::vector<int> prefix_qubits_;
  std::vector<int> local_;
  std::vector<Step> steps_;
  std::vector<int> measured_;
};

}  // namespace detail

/// Samples shots [first, last) of the stream defined by `cfg.seed`.
inline ShotTable sample_shot_range(const NoisyCircuit& nc, const TrajectoryConfig& cfg, std::uint64_t first,
                                   std::uint64_t last) {
  detail::TrajectoryPlan plan(nc, cfg.classical_tail);
  const auto m = static_cast<int>(plan.n_measured());
  std::vector<Complex> amps(std::size_t{1} << plan.prefix_size());
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(nc.n_qubits()));
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t s = first; s < last; ++s) {
    auto rng = SplitMix64::for_shot(cfg.seed, s);
    ++counts[plan.run_shot(rng, amps, bits)];
  }
  ShotTable out = ShotTable::for_circuit(nc.circuit, cfg.seed);
  for (const auto& [key, n] : counts) out.add(Bitstring::from_packed(key, m), n);
  return out;
}

/// Stochastic trajectory sampling: Pauli faults and damping jumps are drawn per
/// shot, the pure state is evolved and a terminal outcome drawn, then readout
/// flips are applied classically. Shots run in batches spread over workers; the
/// merged table is independent of the partition.
inline ShotTable sample_shots(const NoisyCircuit& nc, const TrajectoryConfig& cfg) {
  cfg.validate();
  if (nc.n_qubits() > cfg.max_qubits) {
    throw std::length_error("sample_shots: " + std::to_string(nc.n_qubits()) + " qubits exceed the cap of " +
                            std::to_string(cfg.max_qubits));
  }
  if (nc.circuit.measured_qubits().empty()) throw std::invalid_argument("sample_shots: circuit measures no qubits");
  const std::uint64_t n_batches = (cfg.n_shots + cfg.batch_size - 1) / cfg.batch_size;
  std::vector<ShotTable> batches(n_batches);
  const int workers = static_cast<int>(std::min<std::uint64_t>(resolve_workers(cfg.workers), n_batches));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    try {
      for (std::uint64_t b = next++; b < n_batches; b = next++) {
        const std::uint64_t first = b * cfg.batch_size;
        batches[b] = sample_shot_range(nc, cfg, first, std::min(cfg.n_shots, first + cfg.batch_size));
      }
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next = n_batches;
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  ShotTable out = ShotTable::for_circuit(nc.circuit, cfg.seed);
  for (const auto& b : batches) out.merge(b);
  return out;
}

}  // namespace h2qed
