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

#include "simlab/impairments.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>

namespace simlab {

namespace {

double sinc_ratio(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

CVector phase_ramp_diag(double cos_shift, int n_elems, double spacing_ratio) {
  CVector d(n_elems);
  const double step = 2.0 * kPi * spacing_ratio * cos_shift;
  for (int m = 0; m < n_elems; ++m)
    d(m) = std::polar(1.0, step * static_cast<double>(m));
  return d;
}

}  // namespace

void ImpairmentProfile::validate() const {
  if (ue_phase_half_width < 0.0 || bs_phase_half_width < 0.0)
    throw std::invalid_argument("ImpairmentProfile: phase half-widths >= 0");
  if (bs_aoa_var < 0.0 || ue_aoa_var < 0.0)
    throw std::invalid_argument("ImpairmentProfile: AoA variances >= 0");
  if (csi_error_var < 0.0)
    throw std::invalid_argument("ImpairmentProfile: csi_error_var >= 0");
}

CVector draw_phase_error_diag(RandomStream& rng, double half_width, int size) {
  if (half_width < 0.0)
    throw std::invalid_argument("draw_phase_error_diag: half_width >= 0");
  CVector d(size);
  if (half_width == 0.0) {
    d.setOnes();
    return d;
  }
  for (int i = 0; i < size; ++i)
    d(i) = std::polar(1.0, rng.uniform(-half_width, half_width));
  return d;
}

CVector draw_beamforming_error_diag(RandomStream& rng, double var_aoa,
                                    int n_elems, double spacing_ratio,
                                    AoaErrorModel model, double nominal_angle) {
  if (var_aoa < 0.0)
    throw std::invalid_argument("draw_beamforming_error_diag: var_aoa >= 0");
  switch (model) {
    case AoaErrorModel::kLiteralCos: {
      const double dtheta = std::sqrt(var_aoa) * rng.normal();
      return phase_ramp_diag(std::cos(dtheta), n_elems, spacing_ratio);
    }
    case AoaErrorModel::kAngleShiftGaussian: {
      const double dtheta = std::sqrt(var_aoa) * rng.normal();
      const double shift =
          std::cos(nominal_angle + dtheta) - std::cos(nominal_angle);
      return phase_ramp_diag(shift, n_elems, spacing_ratio);
    }
    case AoaErrorModel::kHalfPowerOffset: {
      const double shift = rng.coin() ? var_aoa : -var_aoa;
      return phase_ramp_diag(shift, n_elems, spacing_ratio);
    }
  }
  throw std::invalid_argument("draw_beamforming_error_diag: unknown model");
}

double hpbw(int n_elems) {
  if (n_elems < 2) throw std::invalid_argument("hpbw: n_elems must be >= 2");
  return 1.782 / static_cast<double>(n_elems);
}

PowerLoss power_loss_coefficient(double var_aoa, int n_elems,
                                 PowerLossMode mode, double spacing_ratio,
                                 double nominal_angle, int mc_draws,
                                 std::uint64_t mc_seed) {
  if (var_aoa < 0.0)
    throw std::invalid_argument("power_loss_coefficient: var_aoa >= 0");
  PowerLoss out;
  if (var_aoa == 0.0) return out;  // no misalignment, no loss
  const double half_width = hpbw(n_elems) / 2.0;
  if (mode == PowerLossMode::kHalfPower) {
    if (var_aoa <= half_width) {
      out.xi = 0.5;
      return out;
    }
    out.fell_back_to_monte_carlo = true;
  }
  // Monte-Carlo: mean squared correlation between the nominal unit-norm beam
  // and the beam displaced by a Gaussian angle error.
  RandomStream rng(mc_seed);
  const double sigma = std::sqrt(var_aoa);
  double acc = 0.0;
  for (int t = 0; t < mc_draws; ++t) {
    double shifted = nominal_angle + sigma * rng.normal();
    const double du = std::cos(shifted) - std::cos(nominal_angle);
    const double phase_step = kPi * 2.0 * spacing_ratio * du / 2.0;
    // |sum_m e^{j 2 pi s du m}|^2 / n^2 via the Dirichlet-kernel magnitude.
    const double denom = std::sin(phase_step);
    double corr;
    if (std::abs(denom) < 1e-15) {
      corr = 1.0;
    } else {
      corr = std::sin(phase_step * n_elems) / (n_elems * denom);
    }
    acc += corr * corr;
  }
  out.xi = acc / mc_draws;
  return out;
}

double equivalent_power_loss(double ue_phase_half_width,
                             double bs_phase_half_width, double xi) {
  const double fa = sinc_ratio(ue_phase_half_width);
  const double fb = sinc_ratio(bs_phase_half_width);
  return fa * fa * fb * fb * xi;
}

ImpairedEstimate impaired_pilot_reception(
    const std::vector<ChannelRealization>& channels,
    const AnalogBeamformers& beams, const PilotMatrix& pilots,
    const ImpairmentProfile& profile, const NoiseConfig& noise,
    const SystemDims& dims, RandomStream& rng) {
  profile.validate();
  const int n = static_cast<int>(channels.size());
  const int m = static_cast<int>(beams.bs_beams.rows());
  const int p = static_cast<int>(beams.ue_beams.rows());

  RandomStream phase_bs_rng = rng.child(kTagPhaseErrBs);
  RandomStream phase_ue_rng = rng.child(kTagPhaseErrUe);
  RandomStream aoa_bs_rng = rng.child(kTagAoaErrBs);
  RandomStream aoa_ue_rng = rng.child(kTagAoaErrUe);

  // Perturbed BS beams: RF chain k applies its own phase errors and AoA
  // displacement on top of the trained column.
  AnalogBeamformers perturbed = beams;
  for (int k = 0; k < n; ++k) {
    CVector col = beams.bs_beams.col(k);
    if (profile.bs_aoa_var > 0.0) {
      const CVector d = draw_beamforming_error_diag(
          aoa_bs_rng, profile.bs_aoa_var, m, dims.spacing_ratio,
          profile.aoa_model, beams.bs_angle.empty() ? kPi / 2 : beams.bs_angle[k]);
      col = col.cwiseProduct(d);
    }
    if (profile.bs_phase_half_width > 0.0) {
      const CVector d =
          draw_phase_error_diag(phase_bs_rng, profile.bs_phase_half_width, m);
      col = col.cwiseProduct(d);
    }
    perturbed.bs_beams.col(k) = col;
  }
  // Perturbed user beams, stored so that the adjoint application used by the
  // pilot composition sees ue_beam^H * Theta * Lambda.
  for (int i = 0; i < n; ++i) {
    CVector col = beams.ue_beams.col(i);
    if (profile.ue_aoa_var > 0.0) {
      const CVector d = draw_beamforming_error_diag(
          aoa_ue_rng, profile.ue_aoa_var, p, dims.spacing_ratio,
          profile.aoa_model, beams.ue_angle.empty() ? kPi / 2 : beams.ue_angle[i]);
      col = col.cwiseProduct(d.conjugate());
    }
    if (profile.ue_phase_half_width > 0.0) {
      const CVector d =
          draw_phase_error_diag(phase_ue_rng, profile.ue_phase_half_width, p);
      col = col.cwiseProduct(d.conjugate());
    }
    perturbed.ue_beams.col(i) = col;
  }

  ImpairedEstimate out;
  RandomStream pilot_rng = rng.child(kTagPilotNoise);
  out.received =
      uplink_pilot_reception(channels, perturbed, pilots, noise, pilot_rng);
  out.estimate = ls_estimate(out.received, pilots);
  out.estimate.bs_antennas = m;
  out.estimate.ue_antennas = p;
  return out;
}

double rate_with_beamforming_errors(double kappa, const SystemDims& dims,
                                    double loss_coef, double snr) {
  if (!(loss_coef > 0.0 && loss_coef <= 1.0))
    throw std::invalid_argument(
        "rate_with_beamforming_errors: loss coefficient must be in (0, 1]");
  const auto [wl, ws] = rician_weights(kappa);
  const double mp_over_n =
      static_cast<double>(dims.bs_antennas) * dims.ue_antennas / dims.num_users;
  return log2_1p((wl * wl * mp_over_n * loss_coef + ws * ws) * snr);
}

PerturbedEquivalentChannel inject_csi_error(const EquivalentChannel& h_hat,
                                            double csi_error_var,
                                            const SystemDims& /*dims*/,
                                            RandomStream& rng) {
  if (csi_error_var < 0.0)
    throw std::invalid_argument("inject_csi_error: csi_error_var >= 0");
  const int n = static_cast<int>(h_hat.h.rows());
  PerturbedEquivalentChannel out;
  out.h_hat = h_hat.h;
  out.h_tilde = h_hat.h;
  if (csi_error_var > 0.0) {
    // Error entries are CN(0, csi_error_var) against the unnormalized
    // equivalent channel: the scale the closed-form rate approximations
    // operate at (their Gram substitution carries the full MP power).
    const double scale = std::sqrt(csi_error_var);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) out.h_tilde(r, c) += scale * rng.cnormal();
  }
  out.gram = out.h_hat * out.h_hat.adjoint();
  const CMatrix gram_inv = out.gram.partialPivLu().inverse();
  out.gram_inv_diag.resize(n);
  for (int k = 0; k < n; ++k) out.gram_inv_diag[k] = gram_inv(k, k).real();
  out.gram_inv_trace = gram_inv.trace().real();
  return out;
}

std::vector<double> theorem2_rate(const CMatrix& gram,
                                  const std::vector<double>& gram_inv_diag,
                                  double gram_inv_trace, double csi_error_var) {
  const int n = static_cast<int>(gram.rows());
  if (static_cast<int>(gram_inv_diag.size()) != n)
    throw std::invalid_argument("theorem2_rate: diag size mismatch");
  std::vector<double> rates(n);
  if (csi_error_var == 0.0) {
    for (auto& r : rates) r = std::numeric_limits<double>::infinity();
    return rates;
  }
  const double s = std::sqrt(1.0 + csi_error_var);
  const double quad = (s - 1.0) * (s - 1.0);
  const double trace_term =
      s * (2.0 - s) * csi_error_var * gram_inv_trace;
  for (int k = 0; k < n; ++k) {
    const double diag_term =
        2.0 * s * (s - 1.0) * csi_error_var * n * gram_inv_diag[k];
    const double bracket = quad - diag_term + trace_term;
    rates[k] = bracket > 0.0 ? log2_1p(1.0 / bracket)
                             : std::numeric_limits<double>::infinity();
  }
  return rates;
}

double corollary4_rate(const SystemDims& dims, double kappa, double xi_hat,
                       double csi_error_var) {
  if (!(xi_hat > 0.0 && xi_hat <= 1.0))
    throw std::invalid_argument("corollary4_rate: xi_hat in (0, 1]");
  if (csi_error_var == 0.0) return std::numeric_limits<double>::infinity();
  if (!(kappa > 0.0))
    throw std::invalid_argument("corollary4_rate: kappa must be > 0");
  const double s = std::sqrt(1.0 + csi_error_var);
  const double kf = std::isinf(kappa) ? 1.0 : (kappa + 1.0) / kappa;
  const double t = csi_error_var * dims.num_users /
                   (xi_hat * dims.bs_antennas * dims.ue_antennas) * kf;
  const double bracket =
      (s - 1.0) * (s - 1.0) - 2.0 * s * (s - 1.0) * t + s * (2.0 - s) * t;
  return log2_1p(1.0 / bracket);
}

double corollary5_gap(double xi_hat) {
  if (!(xi_hat > 0.0 && xi_hat <= 1.0))
    throw std::invalid_argument("corollary5_gap: xi_hat must be in (0, 1]");
  return std::log2(1.0 / xi_hat);
}

CMatrix first_order_inverse(const CMatrix& k, const CMatrix& d) {
  if (k.rows() != k.cols() || d.rows() != d.cols() || k.rows() != d.rows())
    throw std::invalid_argument("first_order_inverse: square same-size inputs");
  Eigen::PartialPivLU<CMatrix> lu(k);
  const double rcond_proxy = std::abs(lu.determinant());
  if (!(rcond_proxy > 0.0) || !std::isfinite(rcond_proxy))
    throw std::invalid_argument("first_order_inverse: singular base matrix");
  const CMatrix k_inv = lu.inverse();
  return k_inv - k_inv * d * k_inv;
}

std::vector<double> simulated_rate_with_csi_errors(
    const PerturbedEquivalentChannel& perturbed, double snr, double cond_cap) {
  const ZfPrecoder w = zf_precoder(perturbed.h_tilde, cond_cap);
  return downlink_sinr(perturbed.h_hat, w, snr);
}

}  // namespace simlab
