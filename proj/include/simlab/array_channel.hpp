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

#ifndef SIMLAB_ARRAY_CHANNEL_HPP
#define SIMLAB_ARRAY_CHANNEL_HPP

#include <limits>
#include <vector>

#include "simlab/rng.hpp"
#include "simlab/types.hpp"

namespace simlab {

enum class ScatteringMode { kIidGaussian, kClustered };

// Rician mixing and scattering-field configuration for one user.
struct RicianConfig {
  // LOS-to-scattering power ratio; +inf means pure LOS, 0 pure scattering.
  double kappa = std::numeric_limits<double>::infinity();
  ScatteringMode mode = ScatteringMode::kIidGaussian;
  int clusters = 1;
  std::vector<int> paths_per_cluster = {1};

  void validate() const;
};

// One user's channel draw: M x P gain matrix plus the ground-truth LOS
// geometry it was built from.
struct ChannelRealization {
  CMatrix h;          // bs_antennas x ue_antennas
  double bs_angle;    // LOS incidence angle at the BS array, radians in [0, pi]
  double ue_angle;    // LOS incidence angle at the user array
  double kappa;
};

// ULA response: element m carries phase exp(-j 2 pi m spacing cos(angle)).
// Every element has unit modulus, so the squared norm equals n_elems.
CVector steering_vector(double angle, int n_elems, double spacing_ratio);

// Rank-one LOS matrix: bs response times the adjoint of the UE response.
// Frobenius norm is sqrt(M * P) exactly.
CMatrix los_channel(double bs_angle, double ue_angle, const SystemDims& dims);

// Scattering component. IID mode draws unit-variance circularly symmetric
// entries; clustered mode sums per-path rank-one terms with standard complex
// Gaussian attenuation and angles uniform on [0, pi], normalized so the mean
// per-entry power is one.
CMatrix scattering_channel(RandomStream& rng, const SystemDims& dims,
                           const RicianConfig& cfg);

// Rician mixture sqrt(k/(k+1)) * los + sqrt(1/(k+1)) * scatter.
ChannelRealization assemble_channel(const CMatrix& los, const CMatrix& scatter,
                                    double kappa, double bs_angle,
                                    double ue_angle);

// Convenience: LOS + scattering + mixture in one call.
ChannelRealization draw_channel(RandomStream& rng, const SystemDims& dims,
                                const RicianConfig& cfg, double bs_angle,
                                double ue_angle);

// Mixture amplitudes (los_weight, scatter_weight); squares sum to one.
std::pair<double, double> rician_weights(double kappa);

}  // namespace simlab

#endif  // SIMLAB_ARRAY_CHANNEL_HPP
