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

#ifndef SIMLAB_AOA_BEAM_TRAINING_HPP
#define SIMLAB_AOA_BEAM_TRAINING_HPP

#include <vector>

#include "simlab/array_channel.hpp"

namespace simlab {

// Uniform angular search grid. Column i is the unit-norm conjugate-phase
// steering column for angle (i-1) * pi / J, so correlating a matching
// incoming wavefront yields gain sqrt(n_elems).
struct DetectionGrid {
  CMatrix vectors;             // n_elems x J
  std::vector<double> angles;  // radians, strictly increasing in [0, pi)
  int size() const { return static_cast<int>(angles.size()); }
};

// Smallest search-step count tied to the array's beamwidth: ceil(2n / 1.782).
int default_grid_size(int n_elems);

DetectionGrid build_detection_grid(int grid_size, int n_elems,
                                   double spacing_ratio);

// Tone/pilot noise levels. One thermal-noise snapshot is shared by all grid
// correlations of a user (the array receives a single physical signal);
// fresh_noise_per_correlation switches to an independent draw per direction.
struct NoiseConfig {
  double bs_noise_var = 0.0;  // per BS antenna
  double ue_noise_var = 0.0;  // per user antenna
  double tone_energy = 1.0;
  bool fresh_noise_per_correlation = false;
};

// Uplink tone observations at the BS: the user transmits from its first
// antenna, so the propagation vector is column 0 of the assembled channel.
// Grid columns are applied with a plain transpose.
CVector simulate_bs_tone_reception(const ChannelRealization& channel,
                                   const DetectionGrid& grid,
                                   const NoiseConfig& noise, RandomStream& rng);

// Downlink tone observations at one user fed through the chosen BS beam.
// Grid columns are applied with an adjoint.
CVector simulate_ue_tone_reception(const ChannelRealization& channel,
                                   const CVector& bs_beam,
                                   const DetectionGrid& grid,
                                   const NoiseConfig& noise, RandomStream& rng);

// Index of the largest-magnitude response; ties break to the lowest index.
int select_strongest(const CVector& responses);

// Trained analog beams. Columns are exact members of the detection grids;
// the user-side columns are stored unconjugated and applied with an adjoint
// when composing the equivalent channel.
struct AnalogBeamformers {
  CMatrix bs_beams;               // bs_antennas x num_users
  CMatrix ue_beams;               // ue_antennas x num_users
  std::vector<int> bs_index;      // chosen BS grid index per user
  std::vector<int> ue_index;      // chosen user grid index per user
  std::vector<double> bs_angle;   // pointing angle of each BS beam, radians
  std::vector<double> ue_angle;
};

struct TrainingGrids {
  int bs_grid_size = 0;  // 0 = default_grid_size(bs_antennas)
  int ue_grid_size = 0;  // 0 = default_grid_size(ue_antennas)
};

// Two-pass strongest-direction estimation: BS side first, then each user
// through its trained BS beam. Per-user substreams are derived from `rng`.
AnalogBeamformers train_beamformers(
    const std::vector<ChannelRealization>& channels, const SystemDims& dims,
    const NoiseConfig& noise, RandomStream& rng,
    const TrainingGrids& grids = {});

// Same, with caller-built grids (hot loops cache them across realizations).
AnalogBeamformers train_beamformers(
    const std::vector<ChannelRealization>& channels,
    const DetectionGrid& bs_grid, const DetectionGrid& ue_grid,
    const NoiseConfig& noise, RandomStream& rng);

}  // namespace simlab

#endif  // SIMLAB_AOA_BEAM_TRAINING_HPP
