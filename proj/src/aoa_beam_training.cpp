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

#include "simlab/aoa_beam_training.hpp"

#include <cmath>

namespace simlab {

namespace {

CVector draw_noise(RandomStream& rng, int n, double variance) {
  CVector z = CVector::Zero(n);
  if (variance > 0.0) {
    const double scale = std::sqrt(variance);
    for (int i = 0; i < n; ++i) z(i) = scale * rng.cnormal();
  }
  return z;
}

}  // namespace

int default_grid_size(int n_elems) {
  if (n_elems < 1)
    throw std::invalid_argument("default_grid_size: n_elems must be >= 1");
  return static_cast<int>(std::ceil(2.0 * n_elems / 1.782));
}

DetectionGrid build_detection_grid(int grid_size, int n_elems,
                                   double spacing_ratio) {
  if (grid_size < 2)
    throw std::invalid_argument("build_detection_grid: grid_size must be >= 2");
  if (n_elems < 1)
    throw std::invalid_argument("build_detection_grid: n_elems must be >= 1");
  DetectionGrid grid;
  grid.vectors.resize(n_elems, grid_size);
  grid.angles.resize(grid_size);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n_elems));
  for (int i = 0; i < grid_size; ++i) {
    const double angle = static_cast<double>(i) * kPi / grid_size;
    grid.angles[i] = angle;
    const double step = 2.0 * kPi * spacing_ratio * std::cos(angle);
    for (int m = 0; m < n_elems; ++m)
      grid.vectors(m, i) = norm * std::polar(1.0, step * static_cast<double>(m));
  }
  return grid;
}

CVector simulate_bs_tone_reception(const ChannelRealization& channel,
                                   const DetectionGrid& grid,
                                   const NoiseConfig& noise,
                                   RandomStream& rng) {
  const int m = static_cast<int>(channel.h.rows());
  if (grid.vectors.rows() != m)
    throw std::invalid_argument(
        "simulate_bs_tone_reception: grid built for a different array size");
  const CVector propagation =
      channel.h.col(0) * std::sqrt(noise.tone_energy);
  if (!noise.fresh_noise_per_correlation) {
    const CVector z = draw_noise(rng, m, noise.bs_noise_var);
    return grid.vectors.transpose() * (propagation + z);
  }
  CVector r(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const CVector z = draw_noise(rng, m, noise.bs_noise_var);
    r(i) = grid.vectors.col(i).transpose() * (propagation + z);
  }
  return r;
}

CVector simulate_ue_tone_reception(const ChannelRealization& channel,
                                   const CVector& bs_beam,
                                   const DetectionGrid& grid,
                                   const NoiseConfig& noise,
                                   RandomStream& rng) {
  const int p = static_cast<int>(channel.h.cols());
  if (grid.vectors.rows() != p)
    throw std::invalid_argument(
        "simulate_ue_tone_reception: grid built for a different array size");
  if (bs_beam.size() != channel.h.rows())
    throw std::invalid_argument(
        "simulate_ue_tone_reception: BS beam length mismatch");
  const CVector propagation =
      channel.h.transpose() * bs_beam * std::sqrt(noise.tone_energy);
  if (!noise.fresh_noise_per_correlation) {
    const CVector z = draw_noise(rng, p, noise.ue_noise_var);
    return grid.vectors.adjoint() * (propagation + z);
  }
  CVector r(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const CVector z = draw_noise(rng, p, noise.ue_noise_var);
    r(i) = grid.vectors.col(i).adjoint() * (propagation + z);
  }
  return r;
}

int select_strongest(const CVector& responses) {
  if (responses.size() == 0)
    throw std::invalid_argument("select_strongest: empty response vector");
  int best = 0;
  double best_mag = std::abs(responses(0));
  for (int i = 1; i < responses.size(); ++i) {
    const double mag = std::abs(responses(i));
    if (!(std::isfinite(mag)))
      throw std::invalid_argument("select_strongest: non-finite response");
    if (mag > best_mag) {
      best = i;
      best_mag = mag;
    }
  }
  if (!std::isfinite(best_mag))
    throw std::invalid_argument("select_strongest: non-finite response");
  return best;
}

AnalogBeamformers train_beamformers(
    const std::vector<ChannelRealization>& channels, const SystemDims& dims,
    const NoiseConfig& noise, RandomStream& rng, const TrainingGrids& grids) {
  dims.validate();
  if (static_cast<int>(channels.size()) != dims.num_users)
    throw std::invalid_argument(
        "train_beamformers: expected one channel per user");
  const int j_bs = grids.bs_grid_size > 0 ? grids.bs_grid_size
                                          : default_grid_size(dims.bs_antennas);
  const int j_ue = grids.ue_grid_size > 0 ? grids.ue_grid_size
                                          : default_grid_size(dims.ue_antennas);
  const DetectionGrid bs_grid =
      build_detection_grid(j_bs, dims.bs_antennas, dims.spacing_ratio);
  const DetectionGrid ue_grid =
      build_detection_grid(j_ue, dims.ue_antennas, dims.spacing_ratio);
  return train_beamformers(channels, bs_grid, ue_grid, noise, rng);
}

AnalogBeamformers train_beamformers(
    const std::vector<ChannelRealization>& channels,
    const DetectionGrid& bs_grid, const DetectionGrid& ue_grid,
    const NoiseConfig& noise, RandomStream& rng) {
  const int n = static_cast<int>(channels.size());
  if (n < 1)
    throw std::invalid_argument("train_beamformers: expected one channel per user");
  const int bs_antennas = static_cast<int>(bs_grid.vectors.rows());
  const int ue_antennas = static_cast<int>(ue_grid.vectors.rows());

  AnalogBeamformers out;
  out.bs_beams.resize(bs_antennas, n);
  out.ue_beams.resize(ue_antennas, n);
  out.bs_index.resize(n);
  out.ue_index.resize(n);
  out.bs_angle.resize(n);
  out.ue_angle.resize(n);

  for (int k = 0; k < n; ++k) {
    RandomStream user_rng = rng.child(1000 + k);
    RandomStream bs_noise_rng = user_rng.child(kTagToneNoiseBs);
    const CVector bs_resp =
        simulate_bs_tone_reception(channels[k], bs_grid, noise, bs_noise_rng);
    const int bi = select_strongest(bs_resp);
    out.bs_index[k] = bi;
    out.bs_angle[k] = bs_grid.angles[bi];
    out.bs_beams.col(k) = bs_grid.vectors.col(bi);

    RandomStream ue_noise_rng = user_rng.child(kTagToneNoiseUe);
    const CVector ue_resp = simulate_ue_tone_reception(
        channels[k], out.bs_beams.col(k), ue_grid, noise, ue_noise_rng);
    const int ui = select_strongest(ue_resp);
    out.ue_index[k] = ui;
    out.ue_angle[k] = ue_grid.angles[ui];
    out.ue_beams.col(k) = ue_grid.vectors.col(ui);
  }
  return out;
}

}  // namespace simlab
