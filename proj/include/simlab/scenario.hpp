// SPDX-License-Identifier: Apache-2.0
//
// simlab: link-level simulation library for multi-user hybrid mmWave MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef SIMLAB_SCENARIO_HPP
#define SIMLAB_SCENARIO_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "simlab/csv.hpp"
#include "simlab/impairments.hpp"

namespace simlab {

enum class Scenario {
  kMseSweep,
  kRateVsSnr,
  kRateVsKappa,
  kImpairments,
  kAntennaSweep,
};

std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

enum class AnglePlacement { kContinuous, kOnGrid };

// Full run description. Every field has a per-scenario default; the
// line-oriented `key = value` config format and the CLI overrides both land
// here. Angles are degrees and powers dB at this boundary only.
struct ScenarioConfig {
  Scenario scenario = Scenario::kRateVsSnr;
  SystemDims dims;
  std::vector<double> kappa = {2.0};
  std::vector<double> snr_db = {0.0};
  double pilot_snr_db = 10.0;
  double tone_snr_db = std::numeric_limits<double>::infinity();
  int trials = 1000;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency
  std::string out_path;
  std::string gnuplot_path;

  ScatteringMode scattering_mode = ScatteringMode::kIidGaussian;
  int scattering_clusters = 1;
  std::vector<int> scattering_paths = {1};

  int bs_grid_size = 0;  // 0 = ceil(2M / 1.782)
  int ue_grid_size = 0;  // 0 = match the BS grid size
  AnglePlacement angles = AnglePlacement::kContinuous;
  PilotKind pilot_kind = PilotKind::kDft;
  bool fresh_tone_noise = false;

  std::vector<int> bs_antenna_sweep;  // per-point M for mse / antenna-sweep

  double phase_err_bs_deg = 0.0;
  double phase_err_ue_deg = 0.0;
  double aoa_var_bs = 0.0;  // radians^2; <0 means auto = hpbw(M)/2
  double aoa_var_ue = 0.0;
  AoaErrorModel aoa_model = AoaErrorModel::kHalfPowerOffset;
  double csi_error_var = 0.0;  // <0 means auto = closed-form pilot MSE

  double cond_cap = 1e8;
  int max_redraws = 100;

  void validate() const;
};

// Key/value schema used by both the config file and CLI overrides. Unknown
// keys are hard errors. Later assignments win.
ScenarioConfig build_config(Scenario scenario,
                            const std::vector<std::pair<std::string, std::string>>& entries);

// Parses the line-oriented `key = value` file format ('#' starts a comment).
std::vector<std::pair<std::string, std::string>> parse_config_text(
    const std::string& text);

ScenarioConfig parse_config(Scenario scenario, const std::string& text);

// Help text enumerating every config key with its default.
std::string config_schema_help();

// Runs all trials of a scenario and aggregates one record per
// (sweep point, metric). Deterministic for fixed (config, seed) regardless
// of thread count.
std::vector<ResultRecord> run_scenario(const ScenarioConfig& cfg);

// Sweep text: single value, comma list, or start:step:stop (inclusive).
std::vector<double> parse_sweep(const std::string& text, const std::string& key);

}  // namespace simlab

#endif  // SIMLAB_SCENARIO_HPP
