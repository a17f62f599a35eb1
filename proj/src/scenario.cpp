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

#include "simlab/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <numeric>
#include <thread>

namespace simlab {

namespace {

constexpr std::uint64_t kTrialTagBase = 0x7472690000ULL;
constexpr std::uint64_t kPointTagBase = 0x706f690000ULL;
constexpr std::uint64_t kTagRedraw = 0x52;
constexpr std::uint64_t kTagImpair = 0x51;

// Runs fn(trial) for every trial, any thread count, results stored by trial
// index and reduced in index order afterwards so the output is byte-identical
// regardless of parallelism.
std::vector<std::vector<double>> run_trials(
    int trials, int threads, const std::function<std::vector<double>(int)>& fn) {
  std::vector<std::vector<double>> slots(trials);
  int nthreads = threads > 0 ? threads
                             : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min(nthreads, trials));
  if (nthreads == 1) {
    for (int t = 0; t < trials; ++t) slots[t] = fn(t);
    return slots;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        slots[t] = fn(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return slots;
}

struct MetricLayout {
  std::vector<double> xs;
  std::string x_unit;
  std::vector<std::string> metrics;
  size_t index(size_t point, size_t metric) const {
    return point * metrics.size() + metric;
  }
  size_t total() const { return xs.size() * metrics.size(); }
};

std::vector<ResultRecord> aggregate(const std::string& scenario,
                                    const MetricLayout& layout,
                                    const std::vector<std::vector<double>>& slots) {
  const size_t n = slots.size();
  std::vector<ResultRecord> out;
  out.reserve(layout.total());
  for (size_t p = 0; p < layout.xs.size(); ++p) {
    for (size_t m = 0; m < layout.metrics.size(); ++m) {
      const size_t idx = layout.index(p, m);
      double mean = 0.0;
      for (size_t t = 0; t < n; ++t) mean += slots[t][idx];
      mean /= static_cast<double>(n);
      double var = 0.0;
      for (size_t t = 0; t < n; ++t) {
        const double d = slots[t][idx] - mean;
        var += d * d;
      }
      // Constant metrics accumulate rounding dust through the mean; snap it.
      if (var < mean * mean * 1e-24) var = 0.0;
      ResultRecord r;
      r.scenario = scenario;
      r.x = layout.xs[p];
      r.x_unit = layout.x_unit;
      r.metric = layout.metrics[m];
      r.value = mean;
      r.trials = static_cast<long>(n);
      r.stderr_value =
          n > 1 ? std::sqrt(var / (static_cast<double>(n) - 1.0) / n) : 0.0;
      out.push_back(std::move(r));
    }
  }
  return out;
}

struct ResolvedNoise {
  NoiseConfig tone;    // training tones
  NoiseConfig pilot;   // uplink pilots
  double pilot_energy = 1.0;
};

ResolvedNoise resolve_noise(const ScenarioConfig& cfg) {
  ResolvedNoise out;
  out.tone.fresh_noise_per_correlation = cfg.fresh_tone_noise;
  if (std::isinf(cfg.tone_snr_db)) {
    out.tone.bs_noise_var = 0.0;
    out.tone.ue_noise_var = 0.0;
    out.tone.tone_energy = 1.0;
  } else {
    out.tone.bs_noise_var = 1.0;
    out.tone.ue_noise_var = 1.0;
    out.tone.tone_energy = db_to_linear(cfg.tone_snr_db);
  }
  out.pilot_energy = db_to_linear(cfg.pilot_snr_db);
  out.pilot.bs_noise_var = 1.0;
  out.pilot.tone_energy = 1.0;
  return out;
}

RicianConfig rician_for(const ScenarioConfig& cfg, double kappa) {
  RicianConfig rc;
  rc.kappa = kappa;
  rc.mode = cfg.scattering_mode;
  rc.clusters = cfg.scattering_clusters;
  rc.paths_per_cluster = cfg.scattering_paths;
  if (rc.mode == ScatteringMode::kClustered &&
      rc.paths_per_cluster.size() != static_cast<size_t>(rc.clusters))
    rc.paths_per_cluster.assign(rc.clusters,
                                rc.paths_per_cluster.empty()
                                    ? 1
                                    : rc.paths_per_cluster.front());
  return rc;
}

TrainingGrids grids_for(const ScenarioConfig& cfg, const SystemDims& dims) {
  TrainingGrids g;
  g.bs_grid_size = cfg.bs_grid_size > 0 ? cfg.bs_grid_size
                                        : default_grid_size(dims.bs_antennas);
  // The user-side search reuses the BS grid resolution unless overridden:
  // both detection matrices carry the same number of probe directions.
  g.ue_grid_size = cfg.ue_grid_size > 0 ? cfg.ue_grid_size : g.bs_grid_size;
  return g;
}

double resolved_csi_error_var(const ScenarioConfig& cfg,
                              const SystemDims& dims, double pilot_energy) {
  if (cfg.csi_error_var >= 0.0) return cfg.csi_error_var;
  return closed_form_mse(1.0, pilot_energy, dims.bs_antennas,
                         dims.ue_antennas);
}

double resolved_bs_aoa_var(const ScenarioConfig& cfg, const SystemDims& dims) {
  if (cfg.aoa_var_bs >= 0.0) return cfg.aoa_var_bs;
  return hpbw(dims.bs_antennas) / 2.0;
}

ImpairmentProfile profile_for(const ScenarioConfig& cfg,
                              const SystemDims& dims) {
  ImpairmentProfile p;
  p.ue_phase_half_width = deg_to_rad(cfg.phase_err_ue_deg);
  p.bs_phase_half_width = deg_to_rad(cfg.phase_err_bs_deg);
  p.bs_aoa_var = resolved_bs_aoa_var(cfg, dims);
  p.ue_aoa_var = cfg.aoa_var_ue;
  p.aoa_model = cfg.aoa_model;
  p.csi_error_var = 0.0;  // CSI error is injected separately
  return p;
}

// Prebuilt per-sweep-point state shared read-only across worker threads.
struct PointSetup {
  SystemDims dims;
  DetectionGrid bs_grid;
  DetectionGrid ue_grid;
};

PointSetup make_point_setup(const ScenarioConfig& cfg, const SystemDims& dims) {
  PointSetup s;
  s.dims = dims;
  const TrainingGrids tg = grids_for(cfg, dims);
  s.bs_grid = build_detection_grid(tg.bs_grid_size, dims.bs_antennas,
                                   dims.spacing_ratio);
  s.ue_grid = build_detection_grid(tg.ue_grid_size, dims.ue_antennas,
                                   dims.spacing_ratio);
  return s;
}

// One trained multi-user realization. Rate scenarios redraw the user angle
// set whenever two users lock onto the same BS beam (the equivalent channel
// is exactly singular there) or the Gram condition cap trips.
struct Realization {
  std::vector<ChannelRealization> channels;
  AnalogBeamformers beams;
};

Realization draw_realization(const ScenarioConfig& cfg, const PointSetup& setup,
                             double kappa, const ResolvedNoise& noise,
                             RandomStream& point_rng, bool reject_collisions) {
  const SystemDims& dims = setup.dims;
  const RicianConfig rc = rician_for(cfg, kappa);
  const DetectionGrid& bs_grid = setup.bs_grid;
  const DetectionGrid& ue_grid = setup.ue_grid;

  RandomStream angle_rng = point_rng.child(kTagAngles);
  RandomStream scatter_rng = point_rng.child(kTagScattering);
  RandomStream train_rng = point_rng.child(kTagRedraw);

  auto nearest_grid_angle = [](const DetectionGrid& grid, double cos_target) {
    int best = 0;
    double best_gap = std::abs(std::cos(grid.angles[0]) - cos_target);
    for (int i = 1; i < grid.size(); ++i) {
      const double gap = std::abs(std::cos(grid.angles[i]) - cos_target);
      if (gap < best_gap) {
        best = i;
        best_gap = gap;
      }
    }
    return grid.angles[best];
  };

  for (int attempt = 0; attempt < cfg.max_redraws; ++attempt) {
    Realization r;
    r.channels.reserve(dims.num_users);
    if (cfg.angles == AnglePlacement::kOnGrid) {
      // Users sit on grid points whose cosines are stratified across
      // [-0.9, 0.9], one per stratum with jitter: trained beams stay well
      // separated, the regime the closed-form rate expressions assume.
      const int n = dims.num_users;
      for (int k = 0; k < n; ++k) {
        const double u =
            -0.9 + 1.8 * (k + 0.2 + 0.6 * angle_rng.uniform()) / n;
        const double bs_angle = nearest_grid_angle(bs_grid, u);
        const double ue_angle =
            nearest_grid_angle(ue_grid, angle_rng.uniform(-0.9, 0.9));
        r.channels.push_back(
            draw_channel(scatter_rng, dims, rc, bs_angle, ue_angle));
      }
    } else {
      // Uniform in the cosine domain (users spread evenly in beam space).
      for (int k = 0; k < dims.num_users; ++k) {
        const double bs_angle = std::acos(angle_rng.uniform(-1.0, 1.0));
        const double ue_angle = std::acos(angle_rng.uniform(-1.0, 1.0));
        r.channels.push_back(
            draw_channel(scatter_rng, dims, rc, bs_angle, ue_angle));
      }
    }
    RandomStream attempt_rng = train_rng.child(attempt);
    r.beams =
        train_beamformers(r.channels, bs_grid, ue_grid, noise.tone, attempt_rng);
    if (reject_collisions) {
      bool collision = false;
      for (int a = 0; a < dims.num_users && !collision; ++a)
        for (int b = a + 1; b < dims.num_users; ++b)
          if (r.beams.bs_index[a] == r.beams.bs_index[b]) {
            collision = true;
            break;
          }
      if (collision) continue;
    }
    return r;
  }
  throw std::runtime_error(
      "draw_realization: exceeded redraw budget without a usable realization");
}

std::vector<ResultRecord> run_mse(const ScenarioConfig& cfg) {
  MetricLayout layout;
  layout.x_unit = "MP";
  for (int m : cfg.bs_antenna_sweep)
    layout.xs.push_back(static_cast<double>(m) * cfg.dims.ue_antennas);
  layout.metrics = {"mse_empirical", "mse_closed_form"};

  const ResolvedNoise noise = resolve_noise(cfg);
  const double kappa = cfg.kappa.front();
  std::vector<PointSetup> setups;
  for (int m : cfg.bs_antenna_sweep) {
    SystemDims dims = cfg.dims;
    dims.bs_antennas = m;
    setups.push_back(make_point_setup(cfg, dims));
  }
  RandomStream root(cfg.seed);

  auto trial_fn = [&](int trial) {
    std::vector<double> out(layout.total());
    RandomStream trial_rng = root.child(kTrialTagBase + trial);
    for (size_t p = 0; p < setups.size(); ++p) {
      const SystemDims& dims = setups[p].dims;
      RandomStream point_rng = trial_rng.child(kPointTagBase + p);
      Realization r = draw_realization(cfg, setups[p], kappa, noise, point_rng,
                                       /*reject_collisions=*/false);
      const PilotMatrix pilots = generate_orthogonal_pilots(
          dims.num_users, noise.pilot_energy, cfg.pilot_kind);
      RandomStream pilot_rng = point_rng.child(kTagPilotNoise);
      const CMatrix rx =
          uplink_pilot_reception(r.channels, r.beams, pilots, noise.pilot, pilot_rng);
      EquivalentChannel est = ls_estimate(rx, pilots);
      const EquivalentChannel truth = true_equivalent_channel(r.channels, r.beams);
      out[layout.index(p, 0)] = normalized_mse(est, truth, dims);
      out[layout.index(p, 1)] = closed_form_mse(
          noise.pilot.bs_noise_var, noise.pilot_energy, dims.bs_antennas,
          dims.ue_antennas);
    }
    return out;
  };
  return aggregate(scenario_name(cfg.scenario), layout,
                   run_trials(cfg.trials, cfg.threads, trial_fn));
}

std::vector<ResultRecord> run_rate_vs_snr(const ScenarioConfig& cfg) {
  MetricLayout layout;
  layout.x_unit = "dB";
  layout.xs = cfg.snr_db;
  layout.metrics = {"rate_hybrid_sim",  "rate_hybrid_upper",
                    "rate_hybrid_upper_asym", "rate_fd_sim",
                    "rate_fd_upper",    "rate_fd_upper_asym"};

  const ResolvedNoise noise = resolve_noise(cfg);
  const double kappa = cfg.kappa.front();
  const PointSetup setup = make_point_setup(cfg, cfg.dims);
  RandomStream root(cfg.seed);

  auto trial_fn = [&](int trial) {
    std::vector<double> out(layout.total());
    RandomStream trial_rng = root.child(kTrialTagBase + trial);
    for (int attempt = 0;; ++attempt) {
      if (attempt >= cfg.max_redraws)
        throw std::runtime_error("rate-vs-snr: redraw budget exhausted");
      RandomStream point_rng = trial_rng.child(kPointTagBase + attempt);
      Realization r =
          draw_realization(cfg, setup, kappa, noise, point_rng, true);
      try {
        const EquivalentChannel truth =
            true_equivalent_channel(r.channels, r.beams);
        const ZfPrecoder zf = zf_precoder(truth.h, cfg.cond_cap);
        const double beta2 = zf.beta * zf.beta;
        for (size_t p = 0; p < cfg.snr_db.size(); ++p) {
          const double snr = db_to_linear(cfg.snr_db[p]);
          out[layout.index(p, 0)] = log2_1p(beta2 * snr);
          out[layout.index(p, 1)] =
              hybrid_rate_upper_bound(r.beams.bs_beams, kappa, cfg.dims, snr);
          out[layout.index(p, 2)] =
              hybrid_rate_upper_bound_asymptotic(cfg.dims, kappa, snr);
          const FullyDigitalBounds fd =
              fully_digital_bounds(r.channels, cfg.dims, snr, cfg.cond_cap);
          out[layout.index(p, 3)] = fd.rate;
          out[layout.index(p, 4)] = fd.upper;
          out[layout.index(p, 5)] = fd.asymptotic;
        }
        return out;
      } catch (const PrecodingSingularError&) {
        continue;  // redraw the realization
      }
    }
  };
  return aggregate(scenario_name(cfg.scenario), layout,
                   run_trials(cfg.trials, cfg.threads, trial_fn));
}

std::vector<ResultRecord> run_rate_vs_kappa(const ScenarioConfig& cfg) {
  MetricLayout layout;
  layout.x_unit = "kappa";
  layout.xs = cfg.kappa;
  layout.metrics = {"rate_hybrid_sim",  "rate_hybrid_upper",
                    "rate_hybrid_upper_asym", "rate_fd_sim",
                    "rate_fd_upper",    "rate_fd_upper_asym",
                    "gap_upper",        "gap_asym"};

  const ResolvedNoise noise = resolve_noise(cfg);
  const double snr = db_to_linear(cfg.snr_db.front());
  const PointSetup setup = make_point_setup(cfg, cfg.dims);
  RandomStream root(cfg.seed);

  auto trial_fn = [&](int trial) {
    std::vector<double> out(layout.total());
    RandomStream trial_rng = root.child(kTrialTagBase + trial);
    for (size_t p = 0; p < cfg.kappa.size(); ++p) {
      const double kappa = cfg.kappa[p];
      for (int attempt = 0;; ++attempt) {
        if (attempt >= cfg.max_redraws)
          throw std::runtime_error("rate-vs-kappa: redraw budget exhausted");
        RandomStream point_rng =
            trial_rng.child(kPointTagBase + p * 1024 + attempt);
        Realization r =
            draw_realization(cfg, setup, kappa, noise, point_rng, true);
        try {
          const EquivalentChannel truth =
              true_equivalent_channel(r.channels, r.beams);
          const ZfPrecoder zf = zf_precoder(truth.h, cfg.cond_cap);
          const double hb_sim = log2_1p(zf.beta * zf.beta * snr);
          const double hb_upper =
              hybrid_rate_upper_bound(r.beams.bs_beams, kappa, cfg.dims, snr);
          const double hb_asym =
              hybrid_rate_upper_bound_asymptotic(cfg.dims, kappa, snr);
          const FullyDigitalBounds fd =
              fully_digital_bounds(r.channels, cfg.dims, snr, cfg.cond_cap);
          out[layout.index(p, 0)] = hb_sim;
          out[layout.index(p, 1)] = hb_upper;
          out[layout.index(p, 2)] = hb_asym;
          out[layout.index(p, 3)] = fd.rate;
          out[layout.index(p, 4)] = fd.upper;
          out[layout.index(p, 5)] = fd.asymptotic;
          out[layout.index(p, 6)] = hb_upper - fd.upper;
          out[layout.index(p, 7)] = corollary3_gap(kappa);
          break;
        } catch (const PrecodingSingularError&) {
          continue;
        }
      }
    }
    return out;
  };
  return aggregate(scenario_name(cfg.scenario), layout,
                   run_trials(cfg.trials, cfg.threads, trial_fn));
}

// Shared per-trial body for the impairment scenarios. Produces the ideal and
// hardware-impaired noiseless equivalent channels plus their CSI-error
// variants, then evaluates rates at the requested SNR points.
struct ImpairmentMetrics {
  double rate_ideal_sim;
  double rate_hw_sim;
  double rate_csi_sim;
  double rate_csi_theo2;
  double rate_csi_coro4;
  double rate_hw_csi_sim;
  double rate_hw_csi_theo2;
  double rate_hw_csi_coro4;
};

std::vector<ImpairmentMetrics> impairment_trial(
    const ScenarioConfig& cfg, const PointSetup& setup, double kappa,
    const ResolvedNoise& noise, double delta2, double xi_hat,
    RandomStream& trial_rng, const std::vector<double>& snrs_db) {
  const SystemDims& dims = setup.dims;
  const ImpairmentProfile profile = profile_for(cfg, dims);

  for (int attempt = 0;; ++attempt) {
    if (attempt >= cfg.max_redraws)
      throw std::runtime_error("impairments: redraw budget exhausted");
    RandomStream point_rng = trial_rng.child(kPointTagBase + attempt);
    Realization r = draw_realization(cfg, setup, kappa, noise, point_rng, true);
    try {
      const EquivalentChannel ideal = true_equivalent_channel(r.channels, r.beams);

      // Noiseless pilot pass with the error matrices applied; the LS output
      // is exactly the impaired equivalent channel.
      const PilotMatrix pilots =
          generate_orthogonal_pilots(dims.num_users, 1.0, cfg.pilot_kind);
      NoiseConfig quiet;
      RandomStream impair_rng = point_rng.child(kTagImpair);
      const EquivalentChannel hw =
          impaired_pilot_reception(r.channels, r.beams, pilots, profile, quiet,
                                   dims, impair_rng)
              .estimate;

      const ZfPrecoder zf_ideal = zf_precoder(ideal.h, cfg.cond_cap);
      const ZfPrecoder zf_hw = zf_precoder(hw.h, cfg.cond_cap);

      // Paired CSI-error draw: both variants see the same error realization.
      RandomStream csi_rng_a = point_rng.child(kTagCsiError);
      RandomStream csi_rng_b = point_rng.child(kTagCsiError);
      const PerturbedEquivalentChannel pert_ideal =
          inject_csi_error(ideal, delta2, dims, csi_rng_a);
      const PerturbedEquivalentChannel pert_hw =
          inject_csi_error(hw, delta2, dims, csi_rng_b);

      const double theo2_ideal = [&] {
        const auto rates = theorem2_rate(pert_ideal.gram, pert_ideal.gram_inv_diag,
                                         pert_ideal.gram_inv_trace, delta2);
        double s = 0.0;
        for (double v : rates) s += v;
        return s / rates.size();
      }();
      const double theo2_hw = [&] {
        const auto rates = theorem2_rate(pert_hw.gram, pert_hw.gram_inv_diag,
                                         pert_hw.gram_inv_trace, delta2);
        double s = 0.0;
        for (double v : rates) s += v;
        return s / rates.size();
      }();
      const double coro4_ideal = corollary4_rate(dims, kappa, 1.0, delta2);
      const double coro4_hw = corollary4_rate(dims, kappa, xi_hat, delta2);

      std::vector<ImpairmentMetrics> out;
      out.reserve(snrs_db.size());
      for (double snr_db : snrs_db) {
        const double snr = db_to_linear(snr_db);
        ImpairmentMetrics m{};
        m.rate_ideal_sim = log2_1p(zf_ideal.beta * zf_ideal.beta * snr);
        m.rate_hw_sim = log2_1p(zf_hw.beta * zf_hw.beta * snr);
        m.rate_csi_sim =
            simulated_rate(simulated_rate_with_csi_errors(pert_ideal, snr,
                                                          cfg.cond_cap))
                .mean_rate;
        m.rate_hw_csi_sim =
            simulated_rate(simulated_rate_with_csi_errors(pert_hw, snr,
                                                          cfg.cond_cap))
                .mean_rate;
        m.rate_csi_theo2 = theo2_ideal;
        m.rate_hw_csi_theo2 = theo2_hw;
        m.rate_csi_coro4 = coro4_ideal;
        m.rate_hw_csi_coro4 = coro4_hw;
        out.push_back(m);
      }
      return out;
    } catch (const PrecodingSingularError&) {
      continue;
    }
  }
}

std::vector<ResultRecord> run_impairments(const ScenarioConfig& cfg) {
  MetricLayout layout;
  layout.x_unit = "dB";
  layout.xs = cfg.snr_db;
  layout.metrics = {"rate_ideal_sim",    "rate_hw_sim",
                    "rate_csi_sim",      "rate_csi_theo2",
                    "rate_csi_coro4",    "rate_hw_csi_sim",
                    "rate_hw_csi_theo2", "rate_hw_csi_coro4"};

  const ResolvedNoise noise = resolve_noise(cfg);
  const double kappa = cfg.kappa.front();
  const double delta2 =
      resolved_csi_error_var(cfg, cfg.dims, noise.pilot_energy);
  const PowerLoss loss = power_loss_coefficient(
      resolved_bs_aoa_var(cfg, cfg.dims), cfg.dims.bs_antennas,
      PowerLossMode::kHalfPower, cfg.dims.spacing_ratio);
  const double xi_hat =
      equivalent_power_loss(deg_to_rad(cfg.phase_err_ue_deg),
                            deg_to_rad(cfg.phase_err_bs_deg), loss.xi);
  const PointSetup setup = make_point_setup(cfg, cfg.dims);
  RandomStream root(cfg.seed);

  auto trial_fn = [&](int trial) {
    std::vector<double> out(layout.total());
    RandomStream trial_rng = root.child(kTrialTagBase + trial);
    const auto rows = impairment_trial(cfg, setup, kappa, noise, delta2,
                                       xi_hat, trial_rng, cfg.snr_db);
    for (size_t p = 0; p < rows.size(); ++p) {
      const ImpairmentMetrics& m = rows[p];
      out[layout.index(p, 0)] = m.rate_ideal_sim;
      out[layout.index(p, 1)] = m.rate_hw_sim;
      out[layout.index(p, 2)] = m.rate_csi_sim;
      out[layout.index(p, 3)] = m.rate_csi_theo2;
      out[layout.index(p, 4)] = m.rate_csi_coro4;
      out[layout.index(p, 5)] = m.rate_hw_csi_sim;
      out[layout.index(p, 6)] = m.rate_hw_csi_theo2;
      out[layout.index(p, 7)] = m.rate_hw_csi_coro4;
    }
    return out;
  };
  return aggregate(scenario_name(cfg.scenario), layout,
                   run_trials(cfg.trials, cfg.threads, trial_fn));
}

std::vector<ResultRecord> run_antenna_sweep(const ScenarioConfig& cfg) {
  MetricLayout layout;
  layout.x_unit = "antennas";
  for (int m : cfg.bs_antenna_sweep) layout.xs.push_back(m);
  layout.metrics = {"rate_ideal_sim", "rate_csi_sim", "rate_csi_coro4",
                    "rate_fd_sim"};

  const ResolvedNoise noise = resolve_noise(cfg);
  const double kappa = cfg.kappa.front();
  const double snr_db = cfg.snr_db.front();
  std::vector<double> delta2_per_point;
  std::vector<double> xi_hat_per_point;
  std::vector<PointSetup> setups;
  for (int m : cfg.bs_antenna_sweep) {
    SystemDims dims = cfg.dims;
    dims.bs_antennas = m;
    setups.push_back(make_point_setup(cfg, dims));
    delta2_per_point.push_back(
        resolved_csi_error_var(cfg, dims, noise.pilot_energy));
    const PowerLoss loss = power_loss_coefficient(
        resolved_bs_aoa_var(cfg, dims), dims.bs_antennas,
        PowerLossMode::kHalfPower, dims.spacing_ratio);
    xi_hat_per_point.push_back(
        equivalent_power_loss(deg_to_rad(cfg.phase_err_ue_deg),
                              deg_to_rad(cfg.phase_err_bs_deg), loss.xi));
  }
  RandomStream root(cfg.seed);

  auto trial_fn = [&](int trial) {
    std::vector<double> out(layout.total());
    RandomStream trial_rng = root.child(kTrialTagBase + trial);
    for (size_t p = 0; p < setups.size(); ++p) {
      RandomStream dim_rng = trial_rng.child(0xA0000 + p);
      const auto rows =
          impairment_trial(cfg, setups[p], kappa, noise, delta2_per_point[p],
                           xi_hat_per_point[p], dim_rng, {snr_db});
      out[layout.index(p, 0)] = rows[0].rate_ideal_sim;
      out[layout.index(p, 1)] = rows[0].rate_csi_sim;
      out[layout.index(p, 2)] = rows[0].rate_csi_coro4;
      // Fully digital reference on a fresh realization of the same point.
      RandomStream fd_rng = dim_rng.child(0xFD);
      Realization r =
          draw_realization(cfg, setups[p], kappa, noise, fd_rng, true);
      out[layout.index(p, 3)] =
          fully_digital_bounds(r.channels, setups[p].dims,
                               db_to_linear(snr_db), cfg.cond_cap)
              .rate;
    }
    return out;
  };
  return aggregate(scenario_name(cfg.scenario), layout,
                   run_trials(cfg.trials, cfg.threads, trial_fn));
}

}  // namespace

std::vector<ResultRecord> run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  switch (cfg.scenario) {
    case Scenario::kMseSweep: return run_mse(cfg);
    case Scenario::kRateVsSnr: return run_rate_vs_snr(cfg);
    case Scenario::kRateVsKappa: return run_rate_vs_kappa(cfg);
    case Scenario::kImpairments: return run_impairments(cfg);
    case Scenario::kAntennaSweep: return run_antenna_sweep(cfg);
  }
  throw std::runtime_error("run_scenario: unhandled scenario");
}

}  // namespace simlab
