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

#ifndef SIMLAB_PILOT_EQUALIZATION_HPP
#define SIMLAB_PILOT_EQUALIZATION_HPP

#include <vector>

#include "simlab/aoa_beam_training.hpp"

namespace simlab {

enum class PilotKind { kDft, kHadamard };

// N x N orthogonal pilot family scaled so symbols^H * symbols = energy * I.
// Row index is time, column index is user.
struct PilotMatrix {
  CMatrix symbols;
  double energy = 1.0;
};

PilotMatrix generate_orthogonal_pilots(int num_users, double energy,
                                       PilotKind kind = PilotKind::kDft);

// Equivalent baseband channel seen through both analog beamformers, stored in
// the downlink orientation: row k = ue_beam_k^H * H_k^T * bs_beams. This is
// the matrix the ZF precoder inverts.
struct EquivalentChannel {
  CMatrix h;  // num_users x num_users
  bool is_estimate = false;
  int bs_antennas = 0;
  int ue_antennas = 0;
};

// Received pilot block at the BS RF chains. Row k is chain k across the N
// symbol times: bs_beam_k^T * (sum_i H_i ue_beam_i^* sqrt(E) pilot_i^T) plus
// projected thermal noise.
CMatrix uplink_pilot_reception(const std::vector<ChannelRealization>& channels,
                               const AnalogBeamformers& beams,
                               const PilotMatrix& pilots,
                               const NoiseConfig& noise, RandomStream& rng);

// Least-squares estimate from the received block; normalized by the pilot
// energy so a noiseless round trip reproduces the true equivalent channel
// exactly.
EquivalentChannel ls_estimate(const CMatrix& received,
                              const PilotMatrix& pilots);

EquivalentChannel true_equivalent_channel(
    const std::vector<ChannelRealization>& channels,
    const AnalogBeamformers& beams);

// Empirical normalized estimation error: per-user mean of
// ||row_err||^2 / (N * M * P), i.e. the 1/sqrt(MP)-scaled squared error.
double normalized_mse(const EquivalentChannel& estimate,
                      const EquivalentChannel& truth, const SystemDims& dims);

// Closed-form counterpart: noise_var / (pilot_energy * M * P).
double closed_form_mse(double bs_noise_var, double pilot_energy,
                       int bs_antennas, int ue_antennas);

}  // namespace simlab

#endif  // SIMLAB_PILOT_EQUALIZATION_HPP
