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

#include "simlab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace simlab {

namespace {

std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string csv_to_string(const std::vector<ResultRecord>& records) {
  std::string out = "scenario,x,x_unit,metric,value,trials,stderr\n";
  for (const auto& r : records) {
    out += r.scenario;
    out += ',';
    out += format_g12(r.x);
    out += ',';
    out += r.x_unit;
    out += ',';
    out += r.metric;
    out += ',';
    out += format_g12(r.value);
    out += ',';
    out += std::to_string(r.trials);
    out += ',';
    out += format_g12(r.stderr_value);
    out += '\n';
  }
  return out;
}

void emit_csv(const std::vector<ResultRecord>& records,
              const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emit_csv: cannot open '" + path + "'");
  f << csv_to_string(records);
  if (!f) throw std::runtime_error("emit_csv: write failed for '" + path + "'");
}

std::vector<ResultRecord> parse_csv_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      line != "scenario,x,x_unit,metric,value,trials,stderr")
    throw std::runtime_error("parse_csv: bad or missing header");
  std::vector<ResultRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 7)
      throw std::runtime_error("parse_csv: expected 7 fields, got line '" +
                               line + "'");
    ResultRecord r;
    r.scenario = f[0];
    r.x = std::stod(f[1]);
    r.x_unit = f[2];
    r.metric = f[3];
    r.value = std::stod(f[4]);
    r.trials = std::stol(f[5]);
    r.stderr_value = std::stod(f[6]);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ResultRecord> parse_csv_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("parse_csv: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_csv_string(ss.str());
}

void emit_gnuplot(const std::vector<ResultRecord>& records,
                  const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emit_gnuplot: cannot open '" + path + "'");
  // Group by (scenario, metric) preserving first-seen order.
  std::vector<std::pair<std::string, std::string>> keys;
  for (const auto& r : records) {
    std::pair<std::string, std::string> k{r.scenario, r.metric};
    bool seen = false;
    for (const auto& e : keys) seen = seen || e == k;
    if (!seen) keys.push_back(k);
  }
  bool first = true;
  for (const auto& k : keys) {
    if (!first) f << "\n\n";
    first = false;
    f << "# " << k.first << " " << k.second << "  (x value stderr)\n";
    for (const auto& r : records)
      if (r.scenario == k.first && r.metric == k.second)
        f << format_g12(r.x) << ' ' << format_g12(r.value) << ' '
          << format_g12(r.stderr_value) << '\n';
  }
  if (!f) throw std::runtime_error("emit_gnuplot: write failed for '" + path + "'");
}

}  // namespace simlab
