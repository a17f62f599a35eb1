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

#include "simlab/array_channel.hpp"

#include <cmath>

namespace simlab {

void RicianConfig::validate() const {
  if (!(kappa >= 0.0))  // rejects NaN and negatives, allows +inf
    throw std::invalid_argument("RicianConfig: kappa must be >= 0");
  if (mode == ScatteringMode::kClustered) {
    if (clusters < 1)
      throw std::invalid_argument("RicianConfig: clusters must be >= 1");
    if (paths_per_cluster.size() != static_cast<size_t>(clusters))
      throw std::invalid_argument(
          "RicianConfig: paths_per_cluster must have one entry per cluster");
    for (int p : paths_per_cluster)
      if (p < 1)
        throw std::invalid_argument(
            "RicianConfig: every cluster needs at least one path");
  }
}

CVector steering_vector(double angle, int n_elems, double spacing_ratio) {
  if (n_elems < 1)
    throw std::invalid_argument("steering_vector: n_elems must be >= 1");
  if (!std::isfinite(angle) || angle < 0.0 || angle > kPi)
    throw std::invalid_argument("steering_vector: angle must lie in [0, pi]");
  CVector v(n_elems);
  const double step = -2.0 * kPi * spacing_ratio * std::cos(angle);
  for (int m = 0; m < n_elems; ++m)
    v(m) = std::polar(1.0, step * static_cast<double>(m));
  return v;
}

CMatrix los_channel(double bs_angle, double ue_angle, const SystemDims& dims) {
  dims.validate();
  const CVector bs = steering_vector(bs_angle, dims.bs_antennas, dims.spacing_ratio);
  const CVector ue = steering_vector(ue_angle, dims.ue_antennas, dims.spacing_ratio);
  return bs * ue.adjoint();
}

CMatrix scattering_channel(RandomStream& rng, const SystemDims& dims,
                           const RicianConfig& cfg) {
  dims.validate();
  cfg.validate();
  const int m = dims.bs_antennas;
  const int p = dims.ue_antennas;
  if (cfg.mode == ScatteringMode::kIidGaussian) {
    CMatrix h(m, p);
    for (int c = 0; c < p; ++c)
      for (int r = 0; r < m; ++r) h(r, c) = rng.cnormal();
    return h;
  }
  long total_paths = 0;
  for (int n : cfg.paths_per_cluster) total_paths += n;
  CMatrix h = CMatrix::Zero(m, p);
  for (int c = 0; c < cfg.clusters; ++c) {
    for (int l = 0; l < cfg.paths_per_cluster[c]; ++l) {
      const Complex gain = rng.cnormal();
      const double bs_angle = rng.uniform(0.0, kPi);
      const double ue_angle = rng.uniform(0.0, kPi);
      h.noalias() += gain * steering_vector(bs_angle, m, dims.spacing_ratio) *
                     steering_vector(ue_angle, p, dims.spacing_ratio).adjoint();
    }
  }
  h *= 1.0 / std::sqrt(static_cast<double>(total_paths));
  return h;
}

std::pair<double, double> rician_weights(double kappa) {
  if (!(kappa >= 0.0))
    throw std::invalid_argument("rician_weights: kappa must be >= 0");
  if (std::isinf(kappa)) return {1.0, 0.0};
  return {std::sqrt(kappa / (kappa + 1.0)), std::sqrt(1.0 / (kappa + 1.0))};
}

ChannelRealization assemble_channel(const CMatrix& los, const CMatrix& scatter,
                                    double kappa, double bs_angle,
                                    double ue_angle) {
  if (los.rows() != scatter.rows() || los.cols() != scatter.cols())
    throw std::invalid_argument(
        "assemble_channel: LOS and scattering dimensions differ");
  const auto [wl, ws] = rician_weights(kappa);
  ChannelRealization out;
  if (ws == 0.0) {
    out.h = los;
  } else if (wl == 0.0) {
    out.h = scatter;
  } else {
    out.h = wl * los + ws * scatter;
  }
  out.bs_angle = bs_angle;
  out.ue_angle = ue_angle;
  out.kappa = kappa;
  return out;
}

ChannelRealization draw_channel(RandomStream& rng, const SystemDims& dims,
                                const RicianConfig& cfg, double bs_angle,
                                double ue_angle) {
  const CMatrix los = los_channel(bs_angle, ue_angle, dims);
  // Pure LOS never consumes scattering draws, keeping substreams stable.
  if (std::isinf(cfg.kappa))
    return assemble_channel(los, CMatrix::Zero(los.rows(), los.cols()),
                            cfg.kappa, bs_angle, ue_angle);
  const CMatrix scatter = scattering_channel(rng, dims, cfg);
  return assemble_channel(los, scatter, cfg.kappa, bs_angle, ue_angle);
}

}  // namespace simlab
