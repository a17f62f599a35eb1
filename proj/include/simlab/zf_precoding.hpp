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

#ifndef SIMLAB_ZF_PRECODING_HPP
#define SIMLAB_ZF_PRECODING_HPP

#include <string>
#include <vector>

#include "simlab/pilot_equalization.hpp"

namespace simlab {

// Zero-forcing precoder W = H^H (H H^H)^{-1} for a channel with one row per
// user; H * W = I. beta is the transmit power normalization 1/sqrt(tr(W W^H)).
struct ZfPrecoder {
  CMatrix weights;  // cols x num_users, one column per user
  double beta = 0.0;
  double gram_cond = 0.0;       // spectral condition estimate of H H^H
  double gram_inv_trace = 0.0;  // tr[(H H^H)^{-1}] = tr(W W^H)
};

// Builds the ZF precoder. Rows of `channel_rows` are the per-user channel
// vectors (square equivalent channel or wide fully-digital rows). Throws
// PrecodingSingularError when the Gram condition exceeds cond_cap; the
// channel is inverted exactly, never regularized.
ZfPrecoder zf_precoder(const CMatrix& channel_rows, double cond_cap = 1e8);

// Interference-aware per-user SINR of a precoder evaluated against the true
// channel rows, at symbol-energy-to-noise ratio `snr`. When the precoder was
// built from these same rows the interference term vanishes and every user
// sees beta^2 * snr.
std::vector<double> downlink_sinr(const CMatrix& true_rows,
                                  const ZfPrecoder& precoder, double snr);

struct RateResult {
  std::vector<double> per_user_rate;  // bits/s/Hz
  double mean_rate = 0.0;
  double snr = 0.0;
  std::string label;
};

RateResult simulated_rate(const std::vector<double>& sinrs, double snr = 0.0,
                          const std::string& label = {});

// Closed-form per-user rate ceiling of the hybrid scheme, driven by the
// realized BS beam Gram energy ||F^H F||_F^2.
double hybrid_rate_upper_bound(const CMatrix& bs_beams, double kappa,
                               const SystemDims& dims, double snr);

// Large-array limit of the same bound (orthonormal BS beams).
double hybrid_rate_upper_bound_asymptotic(const SystemDims& dims, double kappa,
                                          double snr);

// Fully digital baseline on the per-user BS-side channel rows (column 0 of
// each assembled channel, i.e. the Rician mixture seen from one user
// antenna); the user-side array contributes the P-fold gain factor.
struct FullyDigitalBounds {
  double rate = 0.0;        // log2(1 + P snr / tr(W W^H))
  double upper = 0.0;       // trace bound
  double asymptotic = 0.0;  // log2(1 + M P snr / N)
};

FullyDigitalBounds fully_digital_bounds(
    const std::vector<ChannelRealization>& channels, const SystemDims& dims,
    double snr, double cond_cap = 1e8);

// Asymptotic bound gap between hybrid and fully digital systems:
// log2(kappa / (kappa + 1)), nonpositive, vanishing as kappa grows.
double corollary3_gap(double kappa);

}  // namespace simlab

#endif  // SIMLAB_ZF_PRECODING_HPP
