// SPDX-License-Identifier: Apache-2.0
//
// simlab: link-level simulator for multi-user hybrid mmWave MIMO downlink
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

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "simlab/scenario.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_path;
  std::string gnuplot_path;
  std::string seed_text;
  int trials = -1;
  int threads = -1;
  std::vector<std::string> overrides;
};

std::vector<std::pair<std::string, std::string>> collect_entries(
    const CliOptions& opt) {
  std::vector<std::pair<std::string, std::string>> entries;
  if (!opt.config_path.empty()) {
    std::ifstream f(opt.config_path);
    if (!f)
      throw simlab::ConfigError("cannot open config file '" + opt.config_path +
                                "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    auto file_entries = simlab::parse_config_text(ss.str());
    entries.insert(entries.end(), file_entries.begin(), file_entries.end());
  }
  for (const auto& ov : opt.overrides) {
    const size_t eq = ov.find('=');
    if (eq == std::string::npos)
      throw simlab::ConfigError("override '" + ov +
                                "' is not of the form key=value");
    auto trim = [](std::string s) {
      const size_t b = s.find_first_not_of(" \t");
      if (b == std::string::npos) return std::string{};
      const size_t e = s.find_last_not_of(" \t");
      return s.substr(b, e - b + 1);
    };
    entries.emplace_back(trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
  }
  if (!opt.seed_text.empty()) entries.emplace_back("seed", opt.seed_text);
  if (opt.trials >= 0) entries.emplace_back("trials", std::to_string(opt.trials));
  if (opt.threads >= 0)
    entries.emplace_back("threads", std::to_string(opt.threads));
  if (!opt.out_path.empty()) entries.emplace_back("out", opt.out_path);
  if (!opt.gnuplot_path.empty())
    entries.emplace_back("gnuplot", opt.gnuplot_path);
  return entries;
}

int run(simlab::Scenario scenario, const CliOptions& opt) {
  const simlab::ScenarioConfig cfg =
      simlab::build_config(scenario, collect_entries(opt));
  const auto records = simlab::run_scenario(cfg);
  simlab::emit_csv(records, cfg.out_path);
  if (!cfg.gnuplot_path.empty()) simlab::emit_gnuplot(records, cfg.gnuplot_path);
  std::cout << "wrote " << records.size() << " records to " << cfg.out_path
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "simlab: multi-user hybrid mmWave MIMO link-level scenario runner"};
  app.require_subcommand(1);
  app.footer(simlab::config_schema_help());

  const std::vector<std::pair<std::string, std::string>> scenarios = {
      {"mse", "pilot channel-estimation MSE vs total antenna count"},
      {"rate-vs-snr", "hybrid and fully digital per-user rate vs SNR"},
      {"rate-vs-kappa", "rates and bound gap vs Rician factor"},
      {"impairments", "rates under phase/beamforming/CSI errors vs SNR"},
      {"antenna-sweep", "rates vs BS antenna count under CSI errors"},
  };

  std::map<std::string, CliOptions> opts;
  for (const auto& [name, blurb] : scenarios) {
    auto* sub = app.add_subcommand(name, blurb);
    auto& o = opts[name];
    sub->add_option("--config", o.config_path, "key = value config file");
    sub->add_option("--seed", o.seed_text, "64-bit unsigned run seed");
    sub->add_option("--trials", o.trials, "Monte-Carlo trials per point");
    sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    sub->add_option("--out", o.out_path, "CSV output path");
    sub->add_option("--gnuplot", o.gnuplot_path, "also emit gnuplot data");
    sub->add_option("overrides", o.overrides, "trailing key=value overrides");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage problems count as config errors (exit 1); --help stays 0.
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    for (const auto& [name, blurb] : scenarios) {
      if (app.get_subcommand(name)->parsed())
        return run(simlab::scenario_from_name(name), opts[name]);
    }
    std::cerr << "error: no scenario selected\n";
    return 1;
  } catch (const simlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
