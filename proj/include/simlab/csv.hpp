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

#ifndef SIMLAB_CSV_HPP
#define SIMLAB_CSV_HPP

#include <string>
#include <vector>

namespace simlab {

// One aggregated measurement: a metric at one sweep coordinate.
struct ResultRecord {
  std::string scenario;
  double x = 0.0;
  std::string x_unit;
  std::string metric;
  double value = 0.0;
  long trials = 0;
  double stderr_value = 0.0;
};

// Serialized table: header `scenario,x,x_unit,metric,value,trials,stderr`,
// one row per record, 12 significant digits, newline-terminated.
std::string csv_to_string(const std::vector<ResultRecord>& records);

void emit_csv(const std::vector<ResultRecord>& records,
              const std::string& path);

std::vector<ResultRecord> parse_csv_string(const std::string& text);
std::vector<ResultRecord> parse_csv_file(const std::string& path);

// Gnuplot-friendly layout: one indexed block per (scenario, metric) with
// `x value stderr` rows.
void emit_gnuplot(const std::vector<ResultRecord>& records,
                  const std::string& path);

}  // namespace simlab

#endif  // SIMLAB_CSV_HPP
