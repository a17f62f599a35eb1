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

#ifndef SIMLAB_IMPAIRMENTS_HPP
#define SIMLAB_IMPAIRMENTS_HPP

#include <vector>

#include "simlab/zf_precoding.hpp"

namespace simlab {

// How an analog-beamforming (AoA) error displaces a trained beam.
//
//  kLiteralCos:          diagonal phase ramp exp(j 2 pi m s cos(dtheta)) with
//                        dtheta ~ N(0, var). Note cos(0) = 1, so a zero draw
//                        is a full cos-domain shift, not the identity.
//  kAngleShiftGaussian:  the beam's pointing angle moves by dtheta ~ N(0, var);
//                        ramp exp(j 2 pi m s [cos(theta + dtheta) - cos(theta)]).
//  kHalfPowerOffset:     deterministic cos-domain displacement of +/- `var`
//                        (random sign). With var = hpbw/2 this realizes the
//                        half-power operating point of the loss model.
enum class AoaErrorModel { kLiteralCos, kAngleShiftGaussian, kHalfPowerOffset };

struct ImpairmentProfile {
  double ue_phase_half_width = 0.0;  // radians, uniform phase error bound a
  double bs_phase_half_width = 0.0;  // radians, uniform phase error bound b
  double bs_aoa_var = 0.0;           // radians^2
  double ue_aoa_var = 0.0;           // radians^2
  AoaErrorModel aoa_model = AoaErrorModel::kHalfPowerOffset;
  double csi_error_var = 0.0;        // normalized estimation-error variance

  void validate() const;
};

// Diagonal of a random phase-error matrix: entries exp(j d) with d uniform on
// [-half_width, half_width]. All entries have unit modulus.
CVector draw_phase_error_diag(RandomStream& rng, double half_width, int size);

// Diagonal of an analog-beamforming error matrix under the chosen model.
// `nominal_angle` is the beam's pointing angle (used by kAngleShiftGaussian).
// Entries are unit-modulus, so applying the matrix preserves vector norms.
CVector draw_beamforming_error_diag(RandomStream& rng, double var_aoa,
                                    int n_elems, double spacing_ratio,
                                    AoaErrorModel model = AoaErrorModel::kLiteralCos,
                                    double nominal_angle = kPi / 2.0);

// Half-power beamwidth of an n-element ULA, radians: 1.782 / n.
double hpbw(int n_elems);

enum class PowerLossMode { kHalfPower, kMonteCarlo };

struct PowerLoss {
  double xi = 1.0;
  bool fell_back_to_monte_carlo = false;
};

// Beam-misalignment power loss coefficient in (0, 1]. Half-power mode applies
// the rulebook value 0.5 whenever 0 < var_aoa <= hpbw/2 (and 1 at zero); out
// of that range it falls back to a Monte-Carlo estimate of
// E |gamma(theta)^H gamma(theta + dtheta)|^2 with dtheta ~ N(0, var_aoa).
PowerLoss power_loss_coefficient(double var_aoa, int n_elems,
                                 PowerLossMode mode,
                                 double spacing_ratio = 0.5,
                                 double nominal_angle = kPi / 2.0,
                                 int mc_draws = 200000,
                                 std::uint64_t mc_seed = 0x5eedULL);

// Combined loss including phase-error averaging: (sin a / a)^2 (sin b / b)^2 xi.
double equivalent_power_loss(double ue_phase_half_width,
                             double bs_phase_half_width, double xi);

// Pilot reception with phase and beamforming error matrices applied on both
// sides, followed by the LS estimate. With zero thermal noise the estimate
// equals the impaired equivalent channel exactly (the impairments are
// absorbed into the channel). A zero error variance applies no AoA error.
struct ImpairedEstimate {
  CMatrix received;            // raw RF-chain block
  EquivalentChannel estimate;  // LS result
};

ImpairedEstimate impaired_pilot_reception(
    const std::vector<ChannelRealization>& channels,
    const AnalogBeamformers& beams, const PilotMatrix& pilots,
    const ImpairmentProfile& profile, const NoiseConfig& noise,
    const SystemDims& dims, RandomStream& rng);

// Closed-form rate under beamforming (and optionally phase) errors in the
// large-array limit: log2{1 + [k/(k+1) (MP/N) coef + 1/(k+1)] snr}.
double rate_with_beamforming_errors(double kappa, const SystemDims& dims,
                                    double loss_coef, double snr);

// Equivalent channel with an additive CSI error whose entries are i.i.d.
// CN(0, csi_error_var) at the unnormalized channel scale (the frame the
// closed-form rate approximations operate in), plus the cached Gram
// quantities those closed forms consume.
struct PerturbedEquivalentChannel {
  CMatrix h_hat;                 // impaired-but-noiseless equivalent channel
  CMatrix h_tilde;               // h_hat + CSI error
  CMatrix gram;                  // h_hat * h_hat^H
  std::vector<double> gram_inv_diag;  // eta_kk
  double gram_inv_trace = 0.0;
};

PerturbedEquivalentChannel inject_csi_error(const EquivalentChannel& h_hat,
                                            double csi_error_var,
                                            const SystemDims& dims,
                                            RandomStream& rng);

// High-SNR closed-form per-user rates under imperfect CSI, driven by the Gram
// matrix of the noise-free equivalent channel. csi_error_var = 0 degenerates
// to an infinite-rate sentinel.
std::vector<double> theorem2_rate(const CMatrix& gram,
                                  const std::vector<double>& gram_inv_diag,
                                  double gram_inv_trace, double csi_error_var);

// Large-array specialization of the same closed form.
double corollary4_rate(const SystemDims& dims, double kappa, double xi_hat,
                       double csi_error_var);

// High-SNR rate gap to ideal hardware: log2(1 / xi_hat).
double corollary5_gap(double xi_hat);

// First-order expansion of (K + D)^{-1}: K^{-1} - K^{-1} D K^{-1}.
CMatrix first_order_inverse(const CMatrix& k, const CMatrix& d);

// Monte-Carlo rate under CSI errors: ZF on h_tilde, interference-aware SINR
// against the impaired truth h_hat.
std::vector<double> simulated_rate_with_csi_errors(
    const PerturbedEquivalentChannel& perturbed, double snr,
    double cond_cap = 1e8);

}  // namespace simlab

#endif  // SIMLAB_IMPAIRMENTS_HPP
