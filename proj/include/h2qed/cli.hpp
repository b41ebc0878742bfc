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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "h2qed/csv.hpp"
#include "h2qed/experiments.hpp"

#ifndef H2QED_VERSION
#define H2QED_VERSION "dev"
#endif

namespace h2qed {

/// Invalid configuration; the message names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kCsvSchemaVersion = 1;

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"scan",          "sweep-depol", "table2", "fidelity-sweep",
                                                 "logical-error", "stateprep",   "red-pipeline", "budget",
                                                 "hqc",           "coeffs"};
  return names;
}

struct RunConfig {
  std::string experiment;
  nlohmann::json raw = nlohmann::json::object();
  NoiseSpec noise = DepolarizingParams{};
  std::string noise_label = "none";
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  double theta = kThetaStar;
  int n_points = 150;
  double theta_lo = -std::numbers::pi;
  double theta_hi = std::numbers::pi;
  std::vector<Strategy> strategies = {Strategy::None, Strategy::PSA, Strategy::PSP, Strategy::PSAP};
  bool red = false;
  bool encoded = false;
  std::string backend = "density";
  std::vector<double> p2_grid;
  double variance = 0.04700;
  double target_sem = 0.0005;
  std::uint64_t batch_size = 10000;
  int workers = 0;
  std::string output_dir = "out";
};

namespace detail {

template <class T>
T get_key(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

inline NoiseSpec parse_noise(const nlohmann::json& j, std::string& label) {
  if (!j.is_object()) throw ConfigError("config key 'noise' must be an object");
  const auto model = get_key<std::string>(j, "model", "depolarizing");
  try {
    if (model == "none") {
      label = "none";
      return DepolarizingParams{};
    }
    if (model == "depolarizing") {
      label = "depolarizing";
      if (!j.contains("p2")) throw ConfigError("config key 'noise.p2' is required for the depolarizing model");
      const double p2 = get_key<double>(j, "p2", 0.0);
      DepolarizingParams d = DepolarizingParams::from_p2(p2);
      d.p1 = get_key<double>(j, "p1", d.p1);
      d.validate();
      return d;
    }
    if (model == "device") {
      label = "device";
      nlohmann::json keys = j;
      keys.erase("model");
      if (keys.empty()) return DeviceModel::h1_1e();
      return device_model_from_json(keys);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config key 'noise': ") + e.what());
  }
  throw ConfigError("config key 'noise.model' must be none, depolarizing or device");
}

inline std::vector<double> default_grid(const std::string& experiment) {
  if (experiment == "sweep-depol") return {0.0005, 0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1};
  return {0.001, 0.005, 0.01, 0.02, 0.05, 0.1};
}

}  // namespace detail

/// Validates and fills experiment defaults; nothing is simulated here.
inline RunConfig parse_run_config(const nlohmann::json& j, const std::string& experiment_override = {}) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  c.raw = j;
  c.experiment = experiment_override.empty() ? detail::get_key<std::string>(j, "experiment", "") : experiment_override;
  if (!experiment_override.empty() && j.contains("experiment") && j.at("experiment") != experiment_override) {
    throw ConfigError("config key 'experiment' disagrees with the subcommand");
  }
  bool known = false;
  for (const auto& n : experiment_names()) known = known || n == c.experiment;
  if (!known) throw ConfigError("config key 'experiment' must name a known experiment, got '" + c.experiment + "'");

  const std::string& e = c.experiment;
  // Experiment defaults mirror the reference study.
  if (e == "table2") {
    c.noise = DepolarizingParams::from_p2(0.0009);
    c.noise_label = "depolarizing";
    c.shots = 200000;
  } else if (e == "red-pipeline") {
    c.noise = DeviceModel::h1_1e();
    c.noise_label = "device";
    c.shots = 200000;
  } else if (e == "sweep-depol") {
    c.shots = 20000;
  } else if (e == "hqc") {
    c.shots = 0;
  }
  if (j.contains("noise")) c.noise = detail::parse_noise(j.at("noise"), c.noise_label);
  c.shots = detail::get_key<std::uint64_t>(j, "shots", c.shots);
  c.seed = detail::get_key<std::uint64_t>(j, "seed", c.seed);
  c.theta = detail::get_key<double>(j, "theta", c.theta);
  if (!std::isfinite(c.theta)) throw ConfigError("config key 'theta' must be finite");
  if (j.contains("theta_grid")) {
    const auto& g = j.at("theta_grid");
    c.n_points = detail::get_key<int>(g, "n", c.n_points);
    c.theta_lo = detail::get_key<double>(g, "lo", c.theta_lo);
    c.theta_hi = detail::get_key<double>(g, "hi", c.theta_hi);
    if (c.n_points < 2) throw ConfigError("config key 'theta_grid.n' must be at least 2");
  }
  if (j.contains("strategies")) {
    c.strategies.clear();
    try {
      for (const auto& s : j.at("strategies")) c.strategies.push_back(parse_strategy(s.get<std::string>()));
    } catch (const std::exception& ex) {
      throw ConfigError(std::string("config key 'strategies': ") + ex.what());
    }
    if (c.strategies.empty()) throw ConfigError("config key 'strategies' must not be empty");
  }
  c.red = detail::get_key<bool>(j, "red", c.red);
  c.encoded = detail::get_key<bool>(j, "encoded", c.encoded);
  c.backend = detail::get_key<std::string>(j, "backend", e == "scan" ? "density" : "shots");
  if (c.backend != "density" && c.backend != "shots") throw ConfigError("config key 'backend' must be density or shots");
  c.p2_grid = detail::get_key<std::vector<double>>(j, "p2_grid", detail::default_grid(e));
  for (double p : c.p2_grid) {
    if (!(p >= 0 && p <= 1)) throw ConfigError("config key 'p2_grid' entries must lie in [0, 1]");
  }
  c.variance = detail::get_key<double>(j, "variance", c.variance);
  c.target_sem = detail::get_key<double>(j, "target_sem", c.target_sem);
  c.batch_size = detail::get_key<std::uint64_t>(j, "batch_size", c.batch_size);
  if (c.batch_size < 1 || c.batch_size > 10000) throw ConfigError("config key 'batch_size' must lie in [1, 10000]");
  c.workers = detail::get_key<int>(j, "workers", c.workers);
  c.output_dir = detail::get_key<std::string>(j, "output_dir", c.output_dir);

  const bool needs_shots = e == "table2" || e == "red-pipeline" || e == "sweep-depol" ||
                           (e == "scan" && c.backend == "shots");
  if (needs_shots && c.shots < 1) throw ConfigError("config key 'shots' must be at least 1");
  if (e == "budget" && !(c.variance >= 0 && c.target_sem > 0)) {
    throw ConfigError("config keys 'variance' >= 0 and 'target_sem' > 0 are required");
  }
  if (e == "coeffs" && !j.contains("integrals")) throw ConfigError("config key 'integrals' is required for coeffs");
  return c;
}

/// Files produced by a run, keyed by file name.
struct RunOutput {
  std::map<std::string, std::string> csv;
  nlohmann::ordered_json manifest;
  std::string stdout_text;
  bool empty_selection = false;
};

namespace detail {

inline ShotOptions shot_options(const RunConfig& c) {
  ShotOptions o;
  o.shots = c.shots;
  o.seed = c.seed;
  o.red = c.red;
  o.workers = c.workers;
  o.batch_size = c.batch_size;
  return o;
}

inline nlohmann::ordered_json counts_json(const Circuit& circ) {
  const auto g = count_gates(circ);
  return {{"qubits", g.n_qubits}, {"n_1q", g.n_1q}, {"n_2q", g.n_2q}, {"n_meas", g.n_meas}};
}

inline Integrals parse_integrals(const nlohmann::json& j) {
  Integrals h;
  const std::pair<const char*, double*> fields[] = {
      {"h00", &h.h00},     {"h11", &h.h11},     {"h22", &h.h22},     {"h33", &h.h33},     {"h2002", &h.h2002},
      {"h3113", &h.h3113}, {"h2112", &h.h2112}, {"h0330", &h.h0330}, {"h2103", &h.h2103}, {"h2013", &h.h2013},
      {"h2332", &h.h2332}, {"h2323", &h.h2323}, {"h0110", &h.h0110}, {"h0101", &h.h0101}};
  for (const auto& [key, slot] : fields) *slot = get_key<double>(j, key, 0.0);
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const auto& f : fields) ok = ok || key == f.first;
    if (!ok) throw ConfigError("config key 'integrals." + key + "' is not a known integral");
  }
  try {
    h.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config key 'integrals': ") + e.what());
  }
  return h;
}

inline void write_energy_rows(CsvWriter& w, const std::vector<PipelineRow>& rows, double p2, std::uint64_t seed,
                              bool& empty) {
  for (const auto& r : rows) {
    const auto& e = r.estimate;
    empty = empty || r.empty;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    w.row() << p2 << r.label << (r.empty ? nan : e.mean) << (r.empty ? nan : e.sem) << (r.empty ? nan : e.variance)
            << e.eta_z << e.sigma_eta_z << e.eta_x << e.sigma_eta_x << seed;
  }
}

}  // namespace detail

inline RunOutput run_experiment(const RunConfig& c) {
  RunOutput out;
  const auto start = std::chrono::steady_clock::now();
  const std::string& e = c.experiment;
  nlohmann::ordered_json circuits = nlohmann::ordered_json::object();
  auto record = [&](const std::string& name, const Circuit& circ) { circuits[name] = detail::counts_json(circ); };
  const auto ham = H2Hamiltonian::sto3g();

  if (e == "scan") {
    const auto mode = c.encoded ? EncodingMode::Encoded : EncodingMode::Unencoded;
    const Strategy s = c.strategies.front();
    CsvWriter w({"theta_rad", "mean_Ha", "sem_Ha", "variance_Ha2", "eta_Z", "eta_X", "seed"});
    auto runner = [&](double theta) {
      if (c.backend == "density") {
        EnergyEstimate est;
        auto opt = detail::shot_options(c);
        if (mode == EncodingMode::Unencoded && !c.red) {
          est.mean = density_energy(mode, theta, c.noise, s, ham);
          return est;
        }
        opt.exact = true;
        return run_pipeline(mode, theta, c.noise, {s}, opt, ham).front().estimate;
      }
      auto opt = detail::shot_options(c);
      return run_pipeline(mode, theta, c.noise, {s}, opt, ham).front().estimate;
    };
    const auto scan = scan_theta(runner, c.n_points, c.theta_lo, c.theta_hi);
    for (std::size_t i = 0; i < scan.thetas.size(); ++i) {
      const auto& est = scan.estimates[i];
      w.row() << scan.thetas[i] << est.mean << est.sem << est.variance << est.eta_z << est.eta_x << c.seed;
    }
    out.csv["scan.csv"] = w.str();
    out.stdout_text = "theta_min " + CsvWriter::format_double(scan.theta_min) + " energy_Ha " +
                      CsvWriter::format_double(scan.estimates[scan.argmin].mean) + "\n";
    record("ansatz_Z", build_ansatz(mode, scan.theta_min, MeasurementBasis::Z));
  } else if (e == "sweep-depol" || e == "table2") {
    const std::vector<double> grid = e == "table2" ? std::vector<double>{two_qubit_probability(c.noise)} : c.p2_grid;
    CsvWriter w({"p2", "method", "mean_Ha", "sem_Ha", "variance_Ha2", "eta_Z", "sigma_eta_Z", "eta_X",
                 "sigma_eta_X", "seed"});
    CsvWriter d({"p2", "method", "density_energy_Ha"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const NoiseSpec noise = e == "table2" ? c.noise : NoiseSpec{DepolarizingParams::from_p2(grid[i])};
      auto opt = detail::shot_options(c);
      opt.seed = derive_seed(c.seed, 100 + i);
      auto rows = run_pipeline(EncodingMode::Unencoded, c.theta, noise, {}, opt, ham);
      auto enc = run_pipeline(EncodingMode::Encoded, c.theta, noise, c.strategies, opt, ham);
      rows.insert(rows.end(), enc.begin(), enc.end());
      detail::write_energy_rows(w, rows, grid[i], c.seed, out.empty_selection);
      d.row() << grid[i] << "UNENCODED" << density_energy(EncodingMode::Unencoded, c.theta, noise, Strategy::None, ham);
      for (Strategy s : c.strategies) {
        d.row() << grid[i] << "ENCODED_" + std::string(strategy_name(s))
                << density_energy(EncodingMode::Encoded, c.theta, noise, s, ham);
      }
    }
    out.csv[e + ".csv"] = w.str();
    out.csv[e + "_density.csv"] = d.str();
    record("unencoded_Z", build_unencoded_ansatz(c.theta));
    record("encoded_Z", build_encoded_ansatz(c.theta));
  } else if (e == "fidelity-sweep" || e == "logical-error") {
    CsvWriter f({"p2", "F_unenc", "F_enc", "F_A", "F_P", "F_AP", "p_eps_all", "p_eps_NL", "p_eps_L", "p_eps_A"});
    CsvWriter l({"p2", "p_ideal", "p_logical", "p_eps_all", "p_eps_NL", "p_eps_L", "p_eps_A"});
    for (double p2 : c.p2_grid) {
      const auto pt = fidelity_point(p2, c.theta);
      const auto& r = pt.errors;
      f.row() << p2 << pt.f_unenc << pt.f_enc << pt.f_a << pt.f_p << pt.f_ap << r.p_eps_all << r.p_eps_NL << r.p_eps_L
              << r.p_eps_A;
      l.row() << p2 << r.p_ideal << r.p_logical << r.p_eps_all << r.p_eps_NL << r.p_eps_L << r.p_eps_A;
    }
    out.csv[e + ".csv"] = e == "fidelity-sweep" ? f.str() : l.str();
    record("unencoded_Z", build_unencoded_ansatz(c.theta));
    record("encoded_Z", build_encoded_ansatz(c.theta));
  } else if (e == "stateprep") {
    CsvWriter w({"p2", "F_noisy", "F_S_A", "F_S_P", "F_S_AP", "tr_S_A", "tr_S_P", "tr_S_AP"});
    for (double p2 : c.p2_grid) {
      const auto pt = state_prep_point(p2);
      w.row() << p2 << pt.f_noisy << pt.f_s_a << pt.f_s_p << pt.f_s_ap << pt.tr_s_a << pt.tr_s_p << pt.tr_s_ap;
    }
    out.csv["stateprep.csv"] = w.str();
    record("state_prep", build_state_prep_422(true));
  } else if (e == "red-pipeline") {
    CsvWriter w({"method", "energy_mHa", "sem_mHa", "delta_E_mHa", "eta_pct", "sigma_eta_pct", "seed"});
    std::vector<PipelineRow> rows;
    for (bool red : {false, true}) {
      auto opt = detail::shot_options(c);
      opt.red = red;
      opt.seed = derive_seed(c.seed, red ? 201 : 200);
      for (auto& r : run_pipeline(EncodingMode::Unencoded, c.theta, c.noise, {}, opt, ham)) rows.push_back(r);
      for (auto& r : run_pipeline(EncodingMode::Encoded, c.theta, c.noise, {Strategy::PSAP}, opt, ham)) rows.push_back(r);
    }
    for (const auto& r : rows) {
      out.empty_selection = out.empty_selection || r.empty;
      const double nan = std::numeric_limits<double>::quiet_NaN();
      const double mean = r.empty ? nan : 1000 * r.estimate.mean;
      w.row() << r.label << mean << (r.empty ? nan : 1000 * r.estimate.sem)
              << (r.empty ? nan : mean - 1000 * kExactEnergy) << 100 * r.eta_raw_z << 100 * r.sigma_eta_raw_z << c.seed;
    }
    out.csv["red_pipeline.csv"] = w.str();
    record("unencoded_red_Z", wrap_with_red(build_unencoded_ansatz(c.theta)).first);
    record("encoded_red_Z", wrap_with_red(build_encoded_ansatz(c.theta)).first);
  } else if (e == "budget") {
    const auto n = shot_budget(c.variance, c.target_sem);
    CsvWriter w({"variance_Ha2", "target_sem_Ha", "shots"});
    w.row() << c.variance << c.target_sem << n;
    out.csv["budget.csv"] = w.str();
    out.stdout_text = std::to_string(n) + "\n";
  } else if (e == "hqc") {
    CsvWriter w({"label", "n_1q", "n_2q", "n_meas", "shots", "hqc"});
    auto emit = [&](const std::string& label, const ResourceCount& rc) {
      w.row() << label << rc.n_1q << rc.n_2q << rc.n_meas << rc.shots << hqc_cost(rc);
    };
    if (c.raw.contains("resources")) {
      for (const auto& r : c.raw.at("resources")) {
        ResourceCount rc;
        rc.n_1q = detail::get_key<std::uint64_t>(r, "n_1q", 0);
        rc.n_2q = detail::get_key<std::uint64_t>(r, "n_2q", 0);
        rc.n_meas = detail::get_key<std::uint64_t>(r, "n_meas", 0);
        rc.shots = detail::get_key<std::uint64_t>(r, "shots", 0);
        emit(detail::get_key<std::string>(r, "label", "custom"), rc);
      }
    }
    // Counts of this library's own RED-wrapped circuits, per basis.
    for (auto mode : {EncodingMode::Unencoded, EncodingMode::Encoded}) {
      for (auto basis : {MeasurementBasis::Z, MeasurementBasis::X}) {
        const auto circ = wrap_with_red(build_ansatz(mode, c.theta, basis)).first;
        const auto g = count_gates(circ);
        const std::string label = std::string(mode == EncodingMode::Unencoded ? "unencoded" : "encoded") + "_red_" +
                                  std::string(basis_name(basis));
        emit(label, {static_cast<std::uint64_t>(g.n_1q), static_cast<std::uint64_t>(g.n_2q),
                     static_cast<std::uint64_t>(g.n_meas), c.shots});
        record(label, circ);
      }
    }
    out.csv["hqc.csv"] = w.str();
  } else if (e == "coeffs") {
    const auto g = integrals_to_coeffs(detail::parse_integrals(c.raw.at("integrals")));
    CsvWriter w({"g0", "g1", "g2", "g3", "g4"});
    w.row() << g[0] << g[1] << g[2] << g[3] << g[4];
    out.csv["coeffs.csv"] = w.str();
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  nlohmann::ordered_json m;
  m["tool"] = "h2qed";
  m["version"] = H2QED_VERSION;
  m["experiment"] = e;
  m["seed"] = c.seed;
  m["csv_schema_version"] = kCsvSchemaVersion;
  m["config"] = c.raw;
  m["noise_model"] = c.noise_label;
  if (const auto* dm = std::get_if<DeviceModel>(&c.noise)) m["device_model"] = device_model_to_json(*dm);
  if (const auto* dp = std::get_if<DepolarizingParams>(&c.noise)) m["depolarizing"] = {{"p1", dp->p1}, {"p2", dp->p2}};
  m["gate_counts"] = circuits;
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& [name, body] : out.csv) files.push_back(name);
  m["csv_files"] = files;
  m["wall_time_s"] = wall;
  out.manifest = std::move(m);
  return out;
}

/// Writes the CSVs and manifest.json into `dir`, creating it if needed.
inline void write_run_output(const RunOutput& out, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, body] : out.csv) {
    std::ofstream f(dir / name, std::ios::binary);
    f << body;
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
  }
  std::ofstream mf(dir / "manifest.json", std::ios::binary);
  mf << out.manifest.dump(2) << '\n';
  if (!mf) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
}

}  // namespace h2qed
