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

#include "dspkit/generate.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "dspkit/errors.hpp"

namespace dspkit {

namespace {

int64_t draw(std::mt19937_64& rng, int64_t lo, int64_t hi) {
  return lo + static_cast<int64_t>(rng() % static_cast<uint64_t>(hi - lo + 1));
}

}  // namespace

Instance gen_gap_instance() {
  return Instance(9, {{"a", 3, 3},
                      {"b", 5, 1},
                      {"c", 7, 1},
                      {"d", 3, 2},
                      {"e", 1, 1},
                      {"f", 3, 1},
                      {"g", 1, 2},
                      {"h", 1, 3}});
}

Instance gen_random(uint64_t seed, size_t n, int64_t W, int64_t h_max) {
  if (W < 1 || h_max < 1) throw InvalidInput("width and height caps must be positive");
  std::mt19937_64 rng(seed);
  std::vector<Item> items;
  items.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    int64_t w = draw(rng, 1, W);
    int64_t h = draw(rng, 1, h_max);
    items.push_back({"r" + std::to_string(i), w, h});
  }
  return Instance(W, std::move(items));
}

RandomSchedule gen_random_schedule(uint64_t seed, size_t n, int64_t m, int64_t p_max) {
  if (m < 1 || p_max < 1) throw InvalidInput("machines and processing cap must be positive");
  std::mt19937_64 rng(seed);
  RandomSchedule out;
  out.machines = m;
  std::vector<int64_t> free_at(m, 0);
  std::vector<int64_t> order(m);
  for (size_t j = 0; j < n; ++j) {
    Job job{"j" + std::to_string(j), draw(rng, 1, p_max), draw(rng, 1, m)};
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int64_t a, int64_t b) {
      return std::tie(free_at[a], a) < std::tie(free_at[b], b);
    });
    std::vector<int64_t> machines(order.begin(), order.begin() + job.q);
    int64_t start = 0;
    for (int64_t k : machines) start = std::max(start, free_at[k]);
    for (int64_t k : machines) free_at[k] = start + job.p;
    std::sort(machines.begin(), machines.end());
    out.schedule.sigma.push_back(start);
    out.schedule.rho.push_back(std::move(machines));
    out.jobs.push_back(std::move(job));
  }
  return out;
}

PlantedInstance gen_planted(uint64_t seed, int64_t W, int64_t H, size_t pieces) {
  if (W < 1 || H < 1) throw InvalidInput("planted rectangle must be non-empty");
  std::mt19937_64 rng(seed);
  struct Part {
    int64_t x, y, w, h;
  };
  std::vector<Part> parts{{0, 0, W, H}};
  for (int tries = 0; tries < 64 * static_cast<int>(pieces) && parts.size() < pieces; ++tries) {
    size_t k = rng() % parts.size();
    Part p = parts[k];
    const bool vertical = rng() % 2 == 0;
    const bool thin = rng() % 3 == 0;
    if (vertical && p.w > 1) {
      int64_t c = thin ? 1 : draw(rng, 1, p.w - 1);
      parts[k] = {p.x, p.y, c, p.h};
      parts.push_back({p.x + c, p.y, p.w - c, p.h});
    } else if (!vertical && p.h > 1) {
      int64_t c = thin ? std::min<int64_t>(draw(rng, 1, 2), p.h - 1) : draw(rng, 1, p.h - 1);
      parts[k] = {p.x, p.y, p.w, c};
      parts.push_back({p.x, p.y + c, p.w, p.h - c});
    }
  }
  PlantedInstance out;
  std::vector<Item> items;
  for (size_t i = 0; i < parts.size(); ++i) {
    items.push_back({"p" + std::to_string(i), parts[i].w, parts[i].h});
    out.packing.placements.push_back({parts[i].x, parts[i].y});
  }
  out.instance = Instance(W, std::move(items));
  out.height = H;
  return out;
}

}  // namespace dspkit
