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

#include <cmath>
#include <sstream>

#include "simlab/scenario.hpp"

namespace simlab {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
  throw ConfigError("config key '" + key + "': " + why);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) bad_key(key, "trailing characters in '" + v + "'");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    bad_key(key, "expected a number, got '" + v + "'");
  }
}

long parse_long(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) bad_key(key, "trailing characters in '" + v + "'");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    bad_key(key, "expected an integer, got '" + v + "'");
  }
}

int parse_positive_int(const std::string& key, const std::string& v) {
  const long x = parse_long(key, v);
  if (x < 1) bad_key(key, "must be a positive integer, got '" + v + "'");
  return static_cast<int>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  bad_key(key, "expected a boolean, got '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& piece : split(v, ','))
    out.push_back(parse_positive_int(key, piece));
  return out;
}

}  // namespace

std::vector<double> parse_sweep(const std::string& text,
                                const std::string& key) {
  const std::string v = trim(text);
  if (v.empty()) bad_key(key, "empty sweep");
  if (v.find(':') != std::string::npos) {
    const auto parts = split(v, ':');
    if (parts.size() != 3) bad_key(key, "sweep must be start:step:stop");
    const double start = parse_double(key, parts[0]);
    const double step = parse_double(key, parts[1]);
    const double stop = parse_double(key, parts[2]);
    if (step == 0.0 || (stop - start) * step < 0.0)
      bad_key(key, "sweep step must move from start toward stop");
    std::vector<double> out;
    const double tol = std::abs(step) * 1e-9;
    for (double x = start;
         (step > 0.0) ? (x <= stop + tol) : (x >= stop - tol); x += step)
      out.push_back(x);
    return out;
  }
  std::vector<double> out;
  for (const auto& piece : split(v, ','))
    out.push_back(parse_double(key, piece));
  for (size_t i = 1; i < out.size(); ++i) {
    if (out[i] <= out[i - 1]) bad_key(key, "sweep values must be increasing");
  }
  return out;
}

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::kMseSweep: return "mse";
    case Scenario::kRateVsSnr: return "rate-vs-snr";
    case Scenario::kRateVsKappa: return "rate-vs-kappa";
    case Scenario::kImpairments: return "impairments";
    case Scenario::kAntennaSweep: return "antenna-sweep";
  }
  return "unknown";
}

Scenario scenario_from_name(const std::string& name) {
  if (name == "mse") return Scenario::kMseSweep;
  if (name == "rate-vs-snr") return Scenario::kRateVsSnr;
  if (name == "rate-vs-kappa") return Scenario::kRateVsKappa;
  if (name == "impairments") return Scenario::kImpairments;
  if (name == "antenna-sweep") return Scenario::kAntennaSweep;
  throw ConfigError("unknown scenario '" + name + "'");
}

std::vector<std::pair<std::string, std::string>> parse_config_text(
    const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    out.emplace_back(key, value);
  }
  return out;
}

namespace {

// Scenario-specific defaults drawn from the reference operating points.
void apply_scenario_defaults(ScenarioConfig& c) {
  switch (c.scenario) {
    case Scenario::kMseSweep:
      c.dims = {100, 16, 4, 4, 0.5};
      c.bs_antenna_sweep = {40, 100, 200};
      c.kappa = {2.0};
      c.pilot_snr_db = 10.0;
      c.trials = 2000;
      break;
    case Scenario::kRateVsSnr:
      c.dims = {100, 16, 10, 10, 0.5};
      c.kappa = {2.0};
      c.snr_db = parse_sweep("-10:5:20", "snr_db");
      c.trials = 1000;
      break;
    case Scenario::kRateVsKappa:
      c.dims = {100, 16, 4, 4, 0.5};
      c.kappa = {1, 2, 5, 10, 20, 50, 100};
      c.snr_db = {20.0};
      c.trials = 500;
      break;
    case Scenario::kImpairments:
      c.dims = {100, 8, 8, 8, 0.5};
      c.kappa = {2.0};
      c.snr_db = parse_sweep("0:5:40", "snr_db");
      c.trials = 2000;
      c.angles = AnglePlacement::kOnGrid;
      c.phase_err_bs_deg = 3.0;
      c.phase_err_ue_deg = 3.0;
      c.aoa_var_bs = -1.0;  // auto: half-power beamwidth / 2
      c.csi_error_var = 0.005;
      break;
    case Scenario::kAntennaSweep:
      c.dims = {100, 8, 8, 8, 0.5};
      c.bs_antenna_sweep = {20, 60, 100, 140, 180};
      c.kappa = {2.0};
      c.snr_db = {30.0};
      c.trials = 500;
      c.angles = AnglePlacement::kOnGrid;
      c.csi_error_var = 0.005;
      break;
  }
}

void apply_entry(ScenarioConfig& c, const std::string& key,
                 const std::string& value) {
  if (key == "scenario") {
    c.scenario = scenario_from_name(value);
    apply_scenario_defaults(c);
  } else if (key == "dims.M") {
    c.dims.bs_antennas = parse_positive_int(key, value);
  } else if (key == "dims.P") {
    c.dims.ue_antennas = parse_positive_int(key, value);
  } else if (key == "dims.N") {
    c.dims.num_users = parse_positive_int(key, value);
    if (c.dims.rf_chains < c.dims.num_users)
      c.dims.rf_chains = c.dims.num_users;
  } else if (key == "dims.N_RF") {
    c.dims.rf_chains = parse_positive_int(key, value);
  } else if (key == "dims.spacing_ratio") {
    c.dims.spacing_ratio = parse_double(key, value);
    if (!(c.dims.spacing_ratio > 0.0)) bad_key(key, "must be > 0");
  } else if (key == "kappa") {
    c.kappa = parse_sweep(value, key);
    for (double k : c.kappa)
      if (!(k >= 0.0)) bad_key(key, "Rician factors must be >= 0");
  } else if (key == "snr_db") {
    c.snr_db = parse_sweep(value, key);
  } else if (key == "pilot_snr_db") {
    c.pilot_snr_db = parse_double(key, value);
  } else if (key == "tone_snr_db") {
    c.tone_snr_db = (value == "inf")
                        ? std::numeric_limits<double>::infinity()
                        : parse_double(key, value);
  } else if (key == "trials") {
    c.trials = parse_positive_int(key, value);
  } else if (key == "seed") {
    try {
      c.seed = std::stoull(value);
    } catch (...) {
      bad_key(key, "expected an unsigned integer, got '" + value + "'");
    }
  } else if (key == "threads") {
    const long t = parse_long(key, value);
    if (t < 0) bad_key(key, "must be >= 0");
    c.threads = static_cast<int>(t);
  } else if (key == "out") {
    c.out_path = value;
  } else if (key == "gnuplot") {
    c.gnuplot_path = value;
  } else if (key == "scattering.mode") {
    if (value == "iid") c.scattering_mode = ScatteringMode::kIidGaussian;
    else if (value == "clustered") c.scattering_mode = ScatteringMode::kClustered;
    else bad_key(key, "expected iid|clustered, got '" + value + "'");
  } else if (key == "scattering.clusters") {
    c.scattering_clusters = parse_positive_int(key, value);
  } else if (key == "scattering.paths_per_cluster") {
    c.scattering_paths = parse_int_list(key, value);
  } else if (key == "grid.bs_size") {
    const long v = parse_long(key, value);
    if (v < 0) bad_key(key, "must be >= 0 (0 = auto)");
    c.bs_grid_size = static_cast<int>(v);
  } else if (key == "grid.ue_size") {
    const long v = parse_long(key, value);
    if (v < 0) bad_key(key, "must be >= 0 (0 = match BS grid)");
    c.ue_grid_size = static_cast<int>(v);
  } else if (key == "angles") {
    if (value == "continuous") c.angles = AnglePlacement::kContinuous;
    else if (value == "on_grid") c.angles = AnglePlacement::kOnGrid;
    else bad_key(key, "expected continuous|on_grid, got '" + value + "'");
  } else if (key == "pilot.kind") {
    if (value == "dft") c.pilot_kind = PilotKind::kDft;
    else if (value == "hadamard") c.pilot_kind = PilotKind::kHadamard;
    else bad_key(key, "expected dft|hadamard, got '" + value + "'");
  } else if (key == "tone.fresh_noise") {
    c.fresh_tone_noise = parse_bool(key, value);
  } else if (key == "m_list") {
    c.bs_antenna_sweep = parse_int_list(key, value);
    for (size_t i = 1; i < c.bs_antenna_sweep.size(); ++i)
      if (c.bs_antenna_sweep[i] <= c.bs_antenna_sweep[i - 1])
        bad_key(key, "antenna sweep must be increasing");
  } else if (key == "profile.a_deg") {
    c.phase_err_ue_deg = parse_double(key, value);
    if (c.phase_err_ue_deg < 0.0) bad_key(key, "must be >= 0");
  } else if (key == "profile.b_deg") {
    c.phase_err_bs_deg = parse_double(key, value);
    if (c.phase_err_bs_deg < 0.0) bad_key(key, "must be >= 0");
  } else if (key == "profile.aoa_var_bs") {
    if (value == "auto") c.aoa_var_bs = -1.0;
    else {
      c.aoa_var_bs = parse_double(key, value);
      if (c.aoa_var_bs < 0.0) bad_key(key, "must be >= 0 or 'auto'");
    }
  } else if (key == "profile.aoa_var_ue") {
    c.aoa_var_ue = parse_double(key, value);
    if (c.aoa_var_ue < 0.0) bad_key(key, "must be >= 0");
  } else if (key == "profile.aoa_model") {
    if (value == "literal") c.aoa_model = AoaErrorModel::kLiteralCos;
    else if (value == "angle_shift") c.aoa_model = AoaErrorModel::kAngleShiftGaussian;
    else if (value == "half_power") c.aoa_model = AoaErrorModel::kHalfPowerOffset;
    else bad_key(key, "expected literal|angle_shift|half_power, got '" + value + "'");
  } else if (key == "profile.delta2") {
    if (value == "auto") c.csi_error_var = -1.0;
    else {
      c.csi_error_var = parse_double(key, value);
      if (c.csi_error_var < 0.0) bad_key(key, "must be >= 0 or 'auto'");
    }
  } else if (key == "cond_cap") {
    c.cond_cap = parse_double(key, value);
    if (!(c.cond_cap > 1.0)) bad_key(key, "must be > 1");
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  if (trials < 1) throw ConfigError("config key 'trials': must be >= 1");
  if (snr_db.empty()) throw ConfigError("config key 'snr_db': empty sweep");
  if (kappa.empty()) throw ConfigError("config key 'kappa': empty sweep");
  try {
    if (scenario == Scenario::kMseSweep || scenario == Scenario::kAntennaSweep) {
      if (bs_antenna_sweep.empty())
        throw ConfigError("config key 'm_list': empty sweep");
      for (int m : bs_antenna_sweep) {
        SystemDims d = dims;
        d.bs_antennas = m;
        d.validate();
      }
    } else {
      dims.validate();
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config key 'dims.*': ") + e.what());
  }
  if (scenario == Scenario::kRateVsKappa && snr_db.size() != 1)
    throw ConfigError("config key 'snr_db': rate-vs-kappa needs a single value");
  if (scenario == Scenario::kAntennaSweep && snr_db.size() != 1)
    throw ConfigError("config key 'snr_db': antenna-sweep needs a single value");
}

ScenarioConfig build_config(
    Scenario scenario,
    const std::vector<std::pair<std::string, std::string>>& entries) {
  ScenarioConfig c;
  c.scenario = scenario;
  apply_scenario_defaults(c);
  for (const auto& [key, value] : entries) apply_entry(c, key, value);
  if (c.out_path.empty()) c.out_path = scenario_name(c.scenario) + ".csv";
  c.validate();
  return c;
}

ScenarioConfig parse_config(Scenario scenario, const std::string& text) {
  return build_config(scenario, parse_config_text(text));
}

std::string config_schema_help() {
  return
      "Config keys (file lines or trailing key=value overrides):\n"
      "  scenario                     mse|rate-vs-snr|rate-vs-kappa|impairments|antenna-sweep\n"
      "  dims.M                       BS antennas (default per scenario)\n"
      "  dims.P                       user antennas\n"
      "  dims.N                       users\n"
      "  dims.N_RF                    BS RF chains (default: N)\n"
      "  dims.spacing_ratio           element spacing / wavelength (0.5)\n"
      "  kappa                        Rician factor value, list, or start:step:stop\n"
      "  snr_db                       downlink SNR sweep in dB\n"
      "  pilot_snr_db                 pilot energy over BS noise, dB (10)\n"
      "  tone_snr_db                  training tone SNR in dB, or inf (inf)\n"
      "  trials                       Monte-Carlo trials per sweep point\n"
      "  seed                         64-bit run seed (1)\n"
      "  threads                      worker threads, 0 = all cores (0)\n"
      "  out                          CSV output path (<scenario>.csv)\n"
      "  gnuplot                      optional gnuplot data output path\n"
      "  scattering.mode              iid|clustered (iid)\n"
      "  scattering.clusters          cluster count (1)\n"
      "  scattering.paths_per_cluster comma list, one per cluster (1)\n"
      "  grid.bs_size                 BS search grid size, 0 = ceil(2M/1.782)\n"
      "  grid.ue_size                 user grid size, 0 = match BS grid\n"
      "  angles                       continuous|on_grid (scenario default)\n"
      "  pilot.kind                   dft|hadamard (dft)\n"
      "  tone.fresh_noise             independent noise per grid correlation (false)\n"
      "  m_list                       BS antenna sweep for mse / antenna-sweep\n"
      "  profile.a_deg                user phase-error half-width, degrees (0)\n"
      "  profile.b_deg                BS phase-error half-width, degrees (0)\n"
      "  profile.aoa_var_bs           BS AoA error parameter, rad^2, or auto\n"
      "  profile.aoa_var_ue           user AoA error parameter, rad^2 (0)\n"
      "  profile.aoa_model            literal|angle_shift|half_power (half_power)\n"
      "  profile.delta2               normalized CSI error variance, or auto\n"
      "  cond_cap                     ZF Gram condition cap (1e8)\n";
}

}  // namespace simlab
