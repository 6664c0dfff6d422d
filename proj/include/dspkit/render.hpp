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

#ifndef DSPKIT_RENDER_HPP_
#define DSPKIT_RENDER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "dspkit/core.hpp"
#include "dspkit/transform.hpp"

namespace dspkit {

struct RenderSpec {
  int64_t cell = 20;        // pixels per column and per height_unit
  int64_t height_unit = 1;  // model height units per cell
  bool boxes = true;
  bool grid = true;
  bool profile = false;
};

struct Overlay {
  int64_t x = 0;
  int64_t y = 0;
  int64_t width = 0;
  int64_t height = 0;
  std::string label;
};

// Fill colour for a class letter (L, T, V, Mv, H, S, M) or, for an empty
// letter, a fixed palette entry picked by index.
std::string item_colour(const std::string& class_letter, size_t index);

// classes: empty or one class letter per item.
std::string render_packing(const Instance& instance, const SlicedPacking& packing,
                           const RenderSpec& spec, const std::vector<std::string>& classes = {},
                           const std::vector<Overlay>& overlays = {});

std::string render_sp(const Instance& instance, const SpSolution& solution, const RenderSpec& spec);

// Time along x, one lane per machine.
std::string render_schedule(const std::vector<Job>& jobs, const PtsSchedule& schedule, int64_t m,
                            const RenderSpec& spec);

}  // namespace dspkit

#endif  // DSPKIT_RENDER_HPP_
