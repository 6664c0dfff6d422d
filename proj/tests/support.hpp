// Copyright 2026 The dspkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DSPKIT_TESTS_SUPPORT_HPP_
#define DSPKIT_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "dspkit/core.hpp"
#include "dspkit/generate.hpp"
#include "dspkit/transform.hpp"

namespace dspkit::testing {

inline Instance gap_instance() { return gen_gap_instance(); }

// Optimal unsliced packing of the gap instance: a b c d e f g h.
inline SlicedPacking gap_packing() {
  SlicedPacking p;
  p.starts = {0, 3, 0, 3, 6, 6, 7, 8};
  p.bottoms = {{0, 0, 0}, {0, 0, 0, 0, 0}, {3, 3, 3, 3, 3, 3, 3}, {1, 1, 1}, {2},
               {1, 1, 0}, {2}, {1}};
  return p;
}

// Peak from a start vector, computed column by column.
inline int64_t naive_peak(const Instance& inst, const std::vector<int64_t>& starts) {
  std::vector<int64_t> load(inst.strip_width(), 0);
  for (size_t i = 0; i < inst.size(); ++i)
    for (int64_t c = 0; c < inst.item(i).width; ++c) load[starts[i] + c] += inst.item(i).height;
  int64_t best = 0;
  for (int64_t v : load) best = std::max(best, v);
  return best;
}

// Minimum peak over every start tuple.
inline int64_t brute_dsp(const Instance& inst) {
  std::vector<int64_t> s(inst.size(), 0);
  int64_t best = std::numeric_limits<int64_t>::max();
  while (true) {
    best = std::min(best, naive_peak(inst, s));
    size_t i = 0;
    for (; i < s.size(); ++i) {
      if (s[i] + inst.item(i).width < inst.strip_width()) {
        ++s[i];
        break;
      }
      s[i] = 0;
    }
    if (i == s.size()) break;
  }
  return inst.empty() ? 0 : best;
}

// Random start vector with every item inside the strip.
inline DspSolution random_starts(const Instance& inst, std::mt19937_64& rng) {
  DspSolution s;
  for (const Item& it : inst.items()) {
    std::uniform_int_distribution<int64_t> d(0, inst.strip_width() - it.width);
    s.starts.push_back(d(rng));
  }
  return s;
}

// Random feasible sliced packing: columns stacked, then each column shuffled.
inline SlicedPacking random_packing(const Instance& inst, std::mt19937_64& rng) {
  DspSolution s = random_starts(inst, rng);
  SlicedPacking p;
  p.starts = s.starts;
  p.bottoms.resize(inst.size());
  for (size_t i = 0; i < inst.size(); ++i) p.bottoms[i].assign(inst.item(i).width, 0);
  for (int64_t x = 0; x < inst.strip_width(); ++x) {
    std::vector<size_t> here;
    for (size_t i = 0; i < inst.size(); ++i)
      if (s.starts[i] <= x && x < s.starts[i] + inst.item(i).width) here.push_back(i);
    std::shuffle(here.begin(), here.end(), rng);
    int64_t y = 0;
    for (size_t i : here) {
      p.bottoms[i][x - s.starts[i]] = y;
      y += inst.item(i).height;
    }
  }
  return p;
}

}  // namespace dspkit::testing

#endif  // DSPKIT_TESTS_SUPPORT_HPP_
