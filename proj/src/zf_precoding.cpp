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

#include "simlab/zf_precoding.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace simlab {

ZfPrecoder zf_precoder(const CMatrix& channel_rows, double cond_cap) {
  const int n = static_cast<int>(channel_rows.rows());
  if (n < 1 || channel_rows.cols() < n)
    throw std::invalid_argument(
        "zf_precoder: need at least as many columns as user rows");
  const CMatrix gram = channel_rows * channel_rows.adjoint();

  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
  if (es.info() != Eigen::Success)
    throw PrecodingSingularError("zf_precoder: eigendecomposition failed",
                                 std::numeric_limits<double>::infinity());
  const Eigen::VectorXd evals = es.eigenvalues();  // ascending
  const double lambda_min = evals(0);
  const double lambda_max = evals(n - 1);
  const double cond = (lambda_min > 0.0)
                          ? lambda_max / lambda_min
                          : std::numeric_limits<double>::infinity();
  if (!(lambda_min > 0.0) || cond > cond_cap)
    throw PrecodingSingularError(
        "zf_precoder: Gram matrix condition estimate " + std::to_string(cond) +
            " exceeds cap",
        cond);

  const CMatrix gram_inv = es.eigenvectors() *
                           evals.cwiseInverse().asDiagonal() *
                           es.eigenvectors().adjoint();
  ZfPrecoder out;
  out.weights = channel_rows.adjoint() * gram_inv;
  out.gram_inv_trace = evals.cwiseInverse().sum();
  out.beta = 1.0 / std::sqrt(out.weights.squaredNorm());
  out.gram_cond = cond;
  return out;
}

std::vector<double> downlink_sinr(const CMatrix& true_rows,
                                  const ZfPrecoder& precoder, double snr) {
  if (true_rows.cols() != precoder.weights.rows() ||
      true_rows.rows() != precoder.weights.cols())
    throw std::invalid_argument("downlink_sinr: shape mismatch");
  const int n = static_cast<int>(true_rows.rows());
  const CMatrix cross = true_rows * precoder.weights;  // row k, col j
  const double beta2 = precoder.beta * precoder.beta;
  std::vector<double> sinr(n);
  for (int k = 0; k < n; ++k) {
    const double signal = beta2 * snr * std::norm(cross(k, k));
    double interference = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != k) interference += std::norm(cross(k, j));
    sinr[k] = signal / (beta2 * snr * interference + 1.0);
  }
  return sinr;
}

RateResult simulated_rate(const std::vector<double>& sinrs, double snr,
                          const std::string& label) {
  RateResult out;
  out.snr = snr;
  out.label = label;
  out.per_user_rate.reserve(sinrs.size());
  double sum = 0.0;
  for (double s : sinrs) {
    if (!(s >= 0.0) || !std::isfinite(s))
      throw std::invalid_argument("simulated_rate: SINRs must be finite and >= 0");
    const double r = log2_1p(s);
    out.per_user_rate.push_back(r);
    sum += r;
  }
  out.mean_rate = sinrs.empty() ? 0.0 : sum / sinrs.size();
  return out;
}

double hybrid_rate_upper_bound(const CMatrix& bs_beams, double kappa,
                               const SystemDims& dims, double snr) {
  if (!(snr >= 0.0))
    throw std::invalid_argument("hybrid_rate_upper_bound: snr must be >= 0");
  const auto [wl, ws] = rician_weights(kappa);
  const double los_frac = wl * wl;
  const double scatter_frac = ws * ws;
  const double n = static_cast<double>(dims.num_users);
  const double mp =
      static_cast<double>(dims.bs_antennas) * dims.ue_antennas;
  const double beam_energy = (bs_beams.adjoint() * bs_beams).squaredNorm();
  const double bracket = los_frac * mp * beam_energy + scatter_frac * n * n;
  return log2_1p(bracket * snr / (n * n));
}

double hybrid_rate_upper_bound_asymptotic(const SystemDims& dims, double kappa,
                                          double snr) {
  if (!(snr >= 0.0))
    throw std::invalid_argument(
        "hybrid_rate_upper_bound_asymptotic: snr must be >= 0");
  const auto [wl, ws] = rician_weights(kappa);
  const double mp =
      static_cast<double>(dims.bs_antennas) * dims.ue_antennas;
  const double bracket =
      wl * wl * mp / dims.num_users + ws * ws;
  return log2_1p(bracket * snr);
}

FullyDigitalBounds fully_digital_bounds(
    const std::vector<ChannelRealization>& channels, const SystemDims& dims,
    double snr, double cond_cap) {
  if (!(snr >= 0.0))
    throw std::invalid_argument("fully_digital_bounds: snr must be >= 0");
  const int n = static_cast<int>(channels.size());
  if (n < 1) throw std::invalid_argument("fully_digital_bounds: no channels");
  const int m = static_cast<int>(channels[0].h.rows());
  CMatrix rows(n, m);
  for (int k = 0; k < n; ++k) rows.row(k) = channels[k].h.col(0).transpose();

  FullyDigitalBounds out;
  const double p = static_cast<double>(dims.ue_antennas);
  const ZfPrecoder w = zf_precoder(rows, cond_cap);
  out.rate = log2_1p(p * snr / w.gram_inv_trace);
  out.upper = log2_1p(p / (static_cast<double>(n) * n) * rows.squaredNorm() * snr);
  out.asymptotic =
      log2_1p(static_cast<double>(m) * p / n * snr);
  return out;
}

double corollary3_gap(double kappa) {
  if (!(kappa > 0.0))
    throw std::invalid_argument("corollary3_gap: kappa must be > 0");
  if (std::isinf(kappa)) return 0.0;
  return std::log2(kappa / (kappa + 1.0));
}

}  // namespace simlab
