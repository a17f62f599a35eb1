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

#include <doctest.h>

#include "simlab/rng.hpp"

using namespace simlab;

TEST_CASE("identical seeds give identical sequences") {
  RandomStream a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  RandomStream c(42), d(42);
  for (int i = 0; i < 100; ++i) {
    CHECK(c.uniform() == d.uniform());
    CHECK(c.normal() == d.normal());
  }
}

TEST_CASE("child streams derive from the key, not the consumption state") {
  RandomStream parent(7);
  RandomStream child_before = parent.child(3);
  for (int i = 0; i < 57; ++i) parent.next_u64();
  RandomStream child_after = parent.child(3);
  for (int i = 0; i < 64; ++i)
    CHECK(child_before.next_u64() == child_after.next_u64());

  RandomStream x = RandomStream(7).child(1);
  RandomStream y = RandomStream(7).child(2);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += (x.next_u64() == y.next_u64());
  CHECK(same == 0);
}

TEST_CASE("uniform stays in [0, 1)") {
  RandomStream rng(9);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal and complex normal moments") {
  RandomStream rng(11);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sumsq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.02));

  double power = 0.0;
  for (int i = 0; i < n; ++i) power += std::norm(rng.cnormal());
  CHECK(power / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("uniform_index covers the range") {
  RandomStream rng(13);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) ++hits[rng.uniform_index(7)];
  for (int h : hits) CHECK(h > 700);
}
