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

#ifndef SIMLAB_TYPES_HPP
#define SIMLAB_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace simlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a scenario or config value violates its schema.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a zero-forcing Gram matrix is too ill-conditioned to invert.
class PrecodingSingularError : public std::runtime_error {
 public:
  PrecodingSingularError(const std::string& msg, double cond_estimate)
      : std::runtime_error(msg), cond_estimate_(cond_estimate) {}
  double cond_estimate() const { return cond_estimate_; }

 private:
  double cond_estimate_;
};

// Antenna/RF-chain/user counts and the ULA element spacing in wavelengths.
struct SystemDims {
  int bs_antennas = 1;   // M
  int ue_antennas = 1;   // P
  int num_users = 1;     // N
  int rf_chains = 1;     // N_RF, >= num_users
  double spacing_ratio = 0.5;

  void validate() const {
    if (bs_antennas < 1 || ue_antennas < 1 || num_users < 1 || rf_chains < 1)
      throw std::invalid_argument("SystemDims: counts must be positive");
    if (!(bs_antennas >= rf_chains && rf_chains >= num_users))
      throw std::invalid_argument(
          "SystemDims: require bs_antennas >= rf_chains >= num_users");
    if (!(spacing_ratio > 0.0))
      throw std::invalid_argument("SystemDims: spacing_ratio must be > 0");
  }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

inline double log2_1p(double x) { return std::log1p(x) / std::log(2.0); }

}  // namespace simlab

#endif  // SIMLAB_TYPES_HPP
