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

#include <doctest.h>

#include <Eigen/LU>

#include "simlab/impairments.hpp"

using namespace simlab;

namespace {

struct System {
  SystemDims dims;
  std::vector<ChannelRealization> channels;
  AnalogBeamformers beams;
};

System grid_system(std::uint64_t seed, int m, int p, int n, double kappa) {
  System s;
  s.dims = SystemDims{m, p, n, n, 0.5};
  const DetectionGrid bs_grid = build_detection_grid(default_grid_size(m), m, 0.5);
  const DetectionGrid ue_grid = build_detection_grid(default_grid_size(m), p, 0.5);
  RandomStream rng(seed);
  RicianConfig cfg;
  cfg.kappa = kappa;
  const int step = bs_grid.size() / (n + 1);
  for (int k = 0; k < n; ++k) {
    const double bs_angle = bs_grid.angles[step * (k + 1)];
    const double ue_angle = ue_grid.angles[rng.uniform_index(ue_grid.size())];
    s.channels.push_back(draw_channel(rng, s.dims, cfg, bs_angle, ue_angle));
  }
  NoiseConfig quiet;
  RandomStream train_rng = rng.child(5);
  s.beams = train_beamformers(s.channels, bs_grid, ue_grid, quiet, train_rng);
  return s;
}

CMatrix hermitian_with_spread(RandomStream& rng, int n, double spread) {
  CMatrix a(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) a(r, c) = rng.cnormal();
  const CMatrix q = Eigen::HouseholderQR<CMatrix>(a).householderQ();
  Eigen::VectorXd ev(n);
  for (int i = 0; i < n; ++i)
    ev(i) = std::pow(spread, -static_cast<double>(i) / std::max(1, n - 1));
  return q * ev.asDiagonal() * q.adjoint();
}

}  // namespace

TEST_CASE("phase error diagonal: limits and unit modulus") {
  RandomStream rng(90);
  const CVector none = draw_phase_error_diag(rng, 0.0, 8);
  CHECK((none - CVector::Ones(8)).norm() == 0.0);
  const CVector some = draw_phase_error_diag(rng, 0.3, 64);
  for (int i = 0; i < 64; ++i)
    CHECK(std::abs(some(i)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(draw_phase_error_diag(rng, -0.1, 4), std::invalid_argument);
}

TEST_CASE("phase error mean matches sin(a)/a") {
  RandomStream rng(91);
  for (double a_deg : {1.0, 3.0, 10.0}) {
    const double a = deg_to_rad(a_deg);
    Complex mean = 0.0;
    const int draws = 1000000;
    const int block = 100;
    for (int i = 0; i < draws / block; ++i) {
      const CVector d = draw_phase_error_diag(rng, a, block);
      mean += d.sum();
    }
    mean /= static_cast<double>(draws);
    CHECK(std::abs(mean - Complex(std::sin(a) / a, 0)) < 1e-3);
  }
}

TEST_CASE("beamforming error diagonal forms") {
  RandomStream rng(92);
  SUBCASE("literal form at zero error is the full cosine ramp") {
    const CVector d = draw_beamforming_error_diag(rng, 0.0, 4, 0.5,
                                                  AoaErrorModel::kLiteralCos);
    for (int m = 0; m < 4; ++m) {
      const Complex expected = std::polar(1.0, 2.0 * kPi * m * 0.5);
      CHECK(std::abs(d(m) - expected) < 1e-14);
    }
  }
  SUBCASE("angle-shift form at zero error is the identity") {
    const CVector d = draw_beamforming_error_diag(
        rng, 0.0, 6, 0.5, AoaErrorModel::kAngleShiftGaussian, 1.0);
    CHECK((d - CVector::Ones(6)).norm() < 1e-14);
  }
  SUBCASE("all models preserve vector norms") {
    const CVector beam = steering_vector(1.2, 32, 0.5) / std::sqrt(32.0);
    for (auto model :
         {AoaErrorModel::kLiteralCos, AoaErrorModel::kAngleShiftGaussian,
          AoaErrorModel::kHalfPowerOffset}) {
      const CVector d =
          draw_beamforming_error_diag(rng, 0.01, 32, 0.5, model, 1.2);
      CHECK(CVector(d.cwiseProduct(beam)).norm() ==
            doctest::Approx(beam.norm()).epsilon(1e-13));
    }
  }
}

TEST_CASE("cos-domain displacement moves the grid argmax") {
  const int n = 32;
  const DetectionGrid grid = build_detection_grid(64, n, 0.5);
  const int idx = 20;
  const CVector beam = grid.vectors.col(idx);
  // Deterministic offset of two grid cells in the cosine domain.
  const double shift =
      std::cos(grid.angles[idx + 2]) - std::cos(grid.angles[idx]);
  RandomStream rng(93);
  CVector d(n);
  for (int m = 0; m < n; ++m)
    d(m) = std::polar(1.0, 2.0 * kPi * 0.5 * shift * m);
  const CVector shifted = d.cwiseProduct(beam);
  const CVector scores = grid.vectors.adjoint() * shifted;
  CHECK(select_strongest(scores) == idx + 2);
}

TEST_CASE("beamwidth and power-loss coefficients") {
  CHECK(hpbw(100) == doctest::Approx(0.01782).epsilon(1e-12));
  CHECK_THROWS_AS(hpbw(1), std::invalid_argument);

  const PowerLoss none = power_loss_coefficient(0.0, 100, PowerLossMode::kHalfPower);
  CHECK(none.xi == 1.0);
  CHECK_FALSE(none.fell_back_to_monte_carlo);

  const PowerLoss half =
      power_loss_coefficient(1.782 / 200.0, 100, PowerLossMode::kHalfPower);
  CHECK(half.xi == 0.5);
  CHECK_FALSE(half.fell_back_to_monte_carlo);

  const PowerLoss fallback =
      power_loss_coefficient(0.05, 100, PowerLossMode::kHalfPower);
  CHECK(fallback.fell_back_to_monte_carlo);
  CHECK(fallback.xi > 0.0);
  CHECK(fallback.xi < 1.0);

  const PowerLoss mc_zero =
      power_loss_coefficient(0.0, 100, PowerLossMode::kMonteCarlo);
  CHECK(mc_zero.xi == 1.0);
  const PowerLoss mc_tiny =
      power_loss_coefficient(1e-10, 100, PowerLossMode::kMonteCarlo);
  CHECK(mc_tiny.xi > 0.999);
}

TEST_CASE("equivalent power loss folds in the phase-error averages") {
  CHECK(equivalent_power_loss(0.0, 0.0, 0.7) == doctest::Approx(0.7));
  const double a = deg_to_rad(3.0);
  const double f = std::sin(a) / a;
  CHECK(equivalent_power_loss(a, a, 0.5) ==
        doctest::Approx(f * f * f * f * 0.5).epsilon(1e-14));
}

TEST_CASE("all-zero impairment profile reproduces the clean estimate") {
  System s = grid_system(94, 32, 8, 3, 2.0);
  const PilotMatrix pm = generate_orthogonal_pilots(3, 1.0);
  ImpairmentProfile profile;  // all zeros
  profile.aoa_model = AoaErrorModel::kLiteralCos;
  NoiseConfig quiet;
  RandomStream rng(95);
  const ImpairedEstimate impaired = impaired_pilot_reception(
      s.channels, s.beams, pm, profile, quiet, s.dims, rng);
  const EquivalentChannel truth = true_equivalent_channel(s.channels, s.beams);
  CHECK((impaired.estimate.h - truth.h).norm() < 1e-10 * truth.h.norm());
}

TEST_CASE("impairments are absorbed: ZF still nulls the estimated channel") {
  System s = grid_system(96, 64, 8, 4, 2.0);
  const PilotMatrix pm = generate_orthogonal_pilots(4, 1.0);
  ImpairmentProfile profile;
  profile.ue_phase_half_width = deg_to_rad(3.0);
  profile.bs_phase_half_width = deg_to_rad(3.0);
  profile.bs_aoa_var = hpbw(64) / 2.0;
  profile.aoa_model = AoaErrorModel::kHalfPowerOffset;
  NoiseConfig quiet;
  RandomStream rng(97);
  const ImpairedEstimate impaired = impaired_pilot_reception(
      s.channels, s.beams, pm, profile, quiet, s.dims, rng);
  const EquivalentChannel truth = true_equivalent_channel(s.channels, s.beams);
  CHECK((impaired.estimate.h - truth.h).norm() > 1e-3 * truth.h.norm());
  const ZfPrecoder zf = zf_precoder(impaired.estimate.h);
  CHECK((impaired.estimate.h * zf.weights - CMatrix::Identity(4, 4)).norm() <
        1e-8);
}

TEST_CASE("closed-form rate with a loss coefficient") {
  const SystemDims dims{512, 16, 4, 4, 0.5};
  for (double kappa : {1.0, 2.0, 10.0})
    for (double snr : {0.5, 10.0})
      CHECK(rate_with_beamforming_errors(kappa, dims, 1.0, snr) ==
            doctest::Approx(hybrid_rate_upper_bound_asymptotic(dims, kappa, snr))
                .epsilon(1e-13));

  // Halving the coefficient costs one bit once the array term dominates.
  const double diff = rate_with_beamforming_errors(2.0, dims, 1.0, 1e6) -
                      rate_with_beamforming_errors(2.0, dims, 0.5, 1e6);
  CHECK(std::abs(diff - 1.0) < 1e-3);

  // Pure LOS leaves only the array term.
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(rate_with_beamforming_errors(inf, dims, 0.25, 2.0) ==
        doctest::Approx(std::log2(1.0 + 512.0 * 16.0 / 4.0 * 0.25 * 2.0))
            .epsilon(1e-12));

  CHECK_THROWS_AS(rate_with_beamforming_errors(2.0, dims, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(rate_with_beamforming_errors(2.0, dims, 1.5, 1.0),
                  std::invalid_argument);
}

TEST_CASE("CSI error injection: scale and degenerate case") {
  System s = grid_system(98, 32, 8, 4, 2.0);
  const EquivalentChannel truth = true_equivalent_channel(s.channels, s.beams);
  RandomStream rng(99);
  const auto clean = inject_csi_error(truth, 0.0, s.dims, rng);
  CHECK((clean.h_tilde - clean.h_hat).norm() == 0.0);

  // Error entries carry variance delta^2 at the unnormalized channel scale.
  const double delta2 = 0.004;
  double acc = 0.0;
  long count = 0;
  RandomStream rng2(100);
  while (count < 100000) {
    const auto pert = inject_csi_error(truth, delta2, s.dims, rng2);
    acc += (pert.h_tilde - pert.h_hat).squaredNorm();
    count += truth.h.size();
  }
  CHECK(acc / count / delta2 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("closed-form rate under imperfect CSI") {
  const SystemDims dims{100, 8, 8, 8, 0.5};
  const double kappa = 2.0;
  const double delta2 = 0.005;

  SUBCASE("zero error variance reports the infinite-rate sentinel") {
    const CMatrix gram = CMatrix::Identity(8, 8);
    const auto rates =
        theorem2_rate(gram, std::vector<double>(8, 1.0), 8.0, 0.0);
    for (double r : rates) CHECK(std::isinf(r));
    CHECK(std::isinf(corollary4_rate(dims, kappa, 1.0, 0.0)));
  }

  SUBCASE("Gram substitution reproduces the large-array form") {
    for (double xi_hat : {1.0, 0.5}) {
      const double scale = xi_hat * 100.0 * 8.0 * kappa / (kappa + 1.0);
      const CMatrix gram = scale * CMatrix::Identity(8, 8);
      const std::vector<double> eta(8, 1.0 / scale);
      const double trace = 8.0 / scale;
      const auto rates = theorem2_rate(gram, eta, trace, delta2);
      const double reference = corollary4_rate(dims, kappa, xi_hat, delta2);
      for (double r : rates)
        CHECK(std::abs(r - reference) < 1e-12 * std::abs(reference));
    }
  }

  SUBCASE("frozen operating-point value") {
    // Independent evaluation of the large-array closed form at the reference
    // operating point gives 13.594 bits/s/Hz.
    CHECK(corollary4_rate(dims, kappa, 1.0, delta2) ==
          doctest::Approx(13.594).epsilon(2e-4));
  }
}

TEST_CASE("high-SNR hardware gap") {
  CHECK(corollary5_gap(1.0) == 0.0);
  CHECK(corollary5_gap(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(corollary5_gap(0.25) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(corollary5_gap(0.0), std::invalid_argument);
  CHECK_THROWS_AS(corollary5_gap(1.5), std::invalid_argument);
}

TEST_CASE("first-order inverse expansion") {
  RandomStream rng(101);
  const CMatrix k = hermitian_with_spread(rng, 6, 10.0);
  const CMatrix zero = CMatrix::Zero(6, 6);
  const CMatrix base = first_order_inverse(k, zero);
  CHECK((base * k - CMatrix::Identity(6, 6)).norm() < 1e-12);

  SUBCASE("scalar series: error is second order in the perturbation") {
    const CMatrix eye = CMatrix::Identity(4, 4);
    auto scalar_err = [&](double eps) {
      const CMatrix d = eps * eye;
      const CMatrix exact = (eye + d).inverse();
      return (first_order_inverse(eye, d) - exact).norm();
    };
    const double e2 = scalar_err(1e-2);
    const double e3 = scalar_err(1e-3);
    // Exact ratio is 100 * (1 + 1e-3) / (1 + 1e-2).
    CHECK(e2 / e3 == doctest::Approx(100.0).epsilon(0.02));
  }

  SUBCASE("random matrices: halving the perturbation quarters the error") {
    RandomStream trial_rng(102);
    for (int trial = 0; trial < 30; ++trial) {
      const CMatrix base_k = hermitian_with_spread(trial_rng, 8, 100.0);
      CMatrix d(8, 8);
      for (int c = 0; c < 8; ++c)
        for (int r = 0; r < 8; ++r) d(r, c) = trial_rng.cnormal();
      d = (d + CMatrix(d.adjoint())).eval();
      d *= 1e-4 * base_k.norm() / d.norm();
      const auto err = [&](const CMatrix& pert) {
        const CMatrix exact = (base_k + pert).inverse();
        return (first_order_inverse(base_k, pert) - exact).norm();
      };
      const double ratio = err(d) / err(0.5 * d);
      CHECK(ratio > 3.5);
      CHECK(ratio < 4.5);
    }
  }

  CHECK_THROWS_AS(first_order_inverse(zero, zero), std::invalid_argument);
}

TEST_CASE("simulated rates under CSI errors") {
  System s = grid_system(103, 64, 8, 4, 2.0);
  const EquivalentChannel truth = true_equivalent_channel(s.channels, s.beams);
  const double snr = 1000.0;

  RandomStream rng(104);
  const auto perfect = inject_csi_error(truth, 0.0, s.dims, rng);
  const ZfPrecoder zf = zf_precoder(truth.h);
  const auto sinr_perfect = simulated_rate_with_csi_errors(perfect, snr);
  for (double sv : sinr_perfect)
    CHECK(sv == doctest::Approx(zf.beta * zf.beta * snr).epsilon(1e-9));

  RandomStream rng2(105);
  const auto perturbed = inject_csi_error(truth, 0.01, s.dims, rng2);
  const auto sinr = simulated_rate_with_csi_errors(perturbed, snr);
  const ZfPrecoder zf_tilde = zf_precoder(perturbed.h_tilde);
  for (double sv : sinr) CHECK(sv < zf_tilde.beta * zf_tilde.beta * snr);
}
