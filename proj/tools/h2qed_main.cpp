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

// Command-line driver: one subcommand per experiment, JSON config in,
// CSV files and manifest.json out.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "h2qed/h2qed.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitEmptySelection = 3;

nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  std::ifstream in(path);
  if (!in) throw h2qed::ConfigError("cannot open config file '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw h2qed::ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noisy simulation of encoded and unencoded H2 VQE circuits"};
  app.set_version_flag("--version", H2QED_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::uint64_t shots = 0;
  for (const auto& name : h2qed::experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--seed", seed, "master RNG seed (overrides the config)");
    sub->add_option("--shots", shots, "shots per basis (overrides the config)");
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string experiment = app.get_subcommands().front()->get_name();
  const auto* sub = app.get_subcommands().front();

  try {
    auto j = load_config(config_path);
    if (sub->count("--seed")) j["seed"] = seed;
    if (sub->count("--shots")) j["shots"] = shots;
    if (sub->count("--out")) j["output_dir"] = out_dir;
    const auto cfg = h2qed::parse_run_config(j, experiment);
    const auto out = h2qed::run_experiment(cfg);
    h2qed::write_run_output(out, cfg.output_dir);
    std::cout << out.stdout_text;
    for (const auto& [name, body] : out.csv) std::cerr << "wrote " << (std::filesystem::path(cfg.output_dir) / name).string() << '\n';
    if (out.empty_selection) {
      std::cerr << "error: post-selection rejected every shot for at least one row (reported with eta = 0)\n";
      return kExitEmptySelection;
    }
    return kExitOk;
  } catch (const h2qed::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const h2qed::EmptySelectionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEmptySelection;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
