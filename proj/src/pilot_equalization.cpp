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

#include "simlab/pilot_equalization.hpp"

#include <cmath>

namespace simlab {

PilotMatrix generate_orthogonal_pilots(int num_users, double energy,
                                       PilotKind kind) {
  if (num_users < 1)
    throw std::invalid_argument("generate_orthogonal_pilots: num_users >= 1");
  if (!(energy > 0.0))
    throw std::invalid_argument("generate_orthogonal_pilots: energy > 0");
  PilotMatrix out;
  out.energy = energy;
  out.symbols.resize(num_users, num_users);
  if (kind == PilotKind::kDft) {
    const double scale = std::sqrt(energy / num_users);
    for (int t = 0; t < num_users; ++t)
      for (int u = 0; u < num_users; ++u)
        out.symbols(t, u) =
            scale * std::polar(1.0, -2.0 * kPi * t * u / num_users);
  } else {
    if ((num_users & (num_users - 1)) != 0)
      throw std::invalid_argument(
          "generate_orthogonal_pilots: Hadamard requires a power-of-two size");
    const double scale = std::sqrt(energy / num_users);
    for (int t = 0; t < num_users; ++t)
      for (int u = 0; u < num_users; ++u) {
        // Sylvester construction: sign = (-1)^{popcount(t & u)}.
        const int bits = __builtin_popcount(static_cast<unsigned>(t & u));
        out.symbols(t, u) = scale * ((bits & 1) ? -1.0 : 1.0);
      }
  }
  return out;
}

CMatrix uplink_pilot_reception(const std::vector<ChannelRealization>& channels,
                               const AnalogBeamformers& beams,
                               const PilotMatrix& pilots,
                               const NoiseConfig& noise, RandomStream& rng) {
  const int n = static_cast<int>(channels.size());
  if (beams.bs_beams.cols() != n || beams.ue_beams.cols() != n ||
      pilots.symbols.rows() != n)
    throw std::invalid_argument("uplink_pilot_reception: dimension mismatch");
  const int m = static_cast<int>(beams.bs_beams.rows());

  // Effective uplink stream per user: H_i * conj(ue_beam_i).
  CMatrix effective(m, n);
  for (int i = 0; i < n; ++i)
    effective.col(i) = channels[i].h * beams.ue_beams.col(i).conjugate();

  CMatrix antenna_rx = effective * pilots.symbols.transpose();  // m x n (time)
  if (noise.bs_noise_var > 0.0) {
    const double scale = std::sqrt(noise.bs_noise_var);
    for (int t = 0; t < n; ++t)
      for (int r = 0; r < m; ++r) antenna_rx(r, t) += scale * rng.cnormal();
  }
  return beams.bs_beams.transpose() * antenna_rx;
}

EquivalentChannel ls_estimate(const CMatrix& received,
                              const PilotMatrix& pilots) {
  if (!(pilots.energy > 0.0))
    throw std::invalid_argument("ls_estimate: pilot energy must be positive");
  if (received.rows() != received.cols() ||
      received.rows() != pilots.symbols.rows())
    throw std::invalid_argument("ls_estimate: dimension mismatch");
  EquivalentChannel out;
  out.h = (pilots.symbols.adjoint() * received.transpose()) / pilots.energy;
  out.is_estimate = true;
  return out;
}

EquivalentChannel true_equivalent_channel(
    const std::vector<ChannelRealization>& channels,
    const AnalogBeamformers& beams) {
  const int n = static_cast<int>(channels.size());
  if (beams.bs_beams.cols() != n || beams.ue_beams.cols() != n)
    throw std::invalid_argument("true_equivalent_channel: dimension mismatch");
  EquivalentChannel out;
  out.h.resize(n, n);
  for (int k = 0; k < n; ++k)
    out.h.row(k) = beams.ue_beams.col(k).adjoint() *
                   channels[k].h.transpose() * beams.bs_beams;
  out.is_estimate = false;
  out.bs_antennas = static_cast<int>(beams.bs_beams.rows());
  out.ue_antennas = static_cast<int>(beams.ue_beams.rows());
  return out;
}

double normalized_mse(const EquivalentChannel& estimate,
                      const EquivalentChannel& truth, const SystemDims& dims) {
  if (estimate.h.rows() != truth.h.rows() ||
      estimate.h.cols() != truth.h.cols())
    throw std::invalid_argument("normalized_mse: shape mismatch");
  const double n = static_cast<double>(truth.h.rows());
  const double mp =
      static_cast<double>(dims.bs_antennas) * dims.ue_antennas;
  return (estimate.h - truth.h).squaredNorm() / (n * n * mp);
}

double closed_form_mse(double bs_noise_var, double pilot_energy,
                       int bs_antennas, int ue_antennas) {
  if (!(pilot_energy > 0.0) || bs_antennas < 1 || ue_antennas < 1)
    throw std::invalid_argument("closed_form_mse: invalid parameters");
  return bs_noise_var /
         (pilot_energy * static_cast<double>(bs_antennas) * ue_antennas);
}

}  // namespace simlab
