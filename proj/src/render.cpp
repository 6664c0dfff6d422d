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

#include "dspkit/render.hpp"

#include <algorithm>
#include <sstream>

#include "dspkit/errors.hpp"

namespace dspkit {

namespace {

const char* const kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

class Canvas {
 public:
  Canvas(int64_t columns, int64_t height, const RenderSpec& spec)
      : spec_(spec), height_(height), width_px_(columns * spec.cell), height_px_(py(0)) {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_px_ + 2 * kMargin
         << "\" height=\"" << height_px_ + 2 * kMargin << "\" viewBox=\"0 0 "
         << width_px_ + 2 * kMargin << ' ' << height_px_ + 2 * kMargin << "\">\n";
    out_ << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << width_px_
         << "\" height=\"" << height_px_ << "\" fill=\"white\" stroke=\"black\"/>\n";
  }

  // Model coordinates: x in columns, y upwards in height units.
  void rect(int64_t x, int64_t y, int64_t w, int64_t h, const std::string& fill,
            const std::string& extra = "") {
    const int64_t top = py(y + h), bottom = py(y);
    out_ << "<rect x=\"" << kMargin + x * spec_.cell << "\" y=\"" << kMargin + top << "\" width=\""
         << w * spec_.cell << "\" height=\"" << bottom - top << "\" fill=\"" << fill << '"' << extra
         << "/>\n";
  }

  void text(int64_t x, int64_t y, int64_t w, int64_t h, const std::string& s) {
    const int64_t cx = kMargin + x * spec_.cell + w * spec_.cell / 2;
    const int64_t cy = kMargin + (py(y) + py(y + h)) / 2;
    out_ << "<text x=\"" << cx << "\" y=\"" << cy
         << "\" font-size=\"10\" text-anchor=\"middle\" dominant-baseline=\"middle\">"
         << escape(s) << "</text>\n";
  }

  void hline(int64_t y, const std::string& stroke) {
    out_ << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin + py(y) << "\" x2=\""
         << kMargin + width_px_ << "\" y2=\"" << kMargin + py(y) << "\" stroke=\"" << stroke
         << "\" stroke-width=\"1\"/>\n";
  }

  void vline(int64_t x, const std::string& stroke) {
    out_ << "<line x1=\"" << kMargin + x * spec_.cell << "\" y1=\"" << kMargin << "\" x2=\""
         << kMargin + x * spec_.cell << "\" y2=\"" << kMargin + height_px_ << "\" stroke=\""
         << stroke << "\" stroke-width=\"1\"/>\n";
  }

  void raw(const std::string& s) { out_ << s; }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

  int64_t py(int64_t y) const { return (height_ - y) * spec_.cell / spec_.height_unit; }

 private:
  static constexpr int64_t kMargin = 10;
  const RenderSpec& spec_;
  int64_t height_;
  int64_t width_px_;
  int64_t height_px_;
  std::ostringstream out_;
};

void check_spec(const RenderSpec& spec) {
  if (spec.cell < 1 || spec.height_unit < 1) throw InvalidInput("render cell and unit must be positive");
}

}  // namespace

std::string item_colour(const std::string& c, size_t index) {
  if (c == "L") return "#4e79a7";
  if (c == "T") return "#e15759";
  if (c == "V") return "#f28e2b";
  if (c == "Mv") return "#b07aa1";
  if (c == "H") return "#59a14f";
  if (c == "S") return "#edc948";
  if (c == "M") return "#9c755f";
  return kPalette[index % 10];
}

std::string render_packing(const Instance& instance, const SlicedPacking& packing,
                           const RenderSpec& spec, const std::vector<std::string>& classes,
                           const std::vector<Overlay>& overlays) {
  check_spec(spec);
  if (!classes.empty() && classes.size() != instance.size()) {
    throw InvalidInput("class list does not match the instance");
  }
  if (packing.starts.size() != instance.size() || packing.bottoms.size() != instance.size()) {
    throw InvalidInput("packing does not match the instance");
  }
  const int64_t W = instance.strip_width();
  int64_t H = packing_height(instance, packing);
  for (const auto& o : overlays) H = std::max(H, o.y + o.height);
  Canvas cv(W, H, spec);
  if (spec.grid && H > 0) {
    for (int64_t x = 1; x < W; ++x) cv.vline(x, "#eeeeee");
  }
  for (size_t i = 0; i < instance.size(); ++i) {
    const auto& it = instance.item(i);
    if (static_cast<int64_t>(packing.bottoms[i].size()) != it.width) {
      throw InvalidInput("slice count of '" + it.id + "' differs from its width");
    }
    const std::string fill = item_colour(classes.empty() ? "" : classes[i], i);
    int64_t c = 0;
    bool labelled = false;
    while (c < it.width) {
      int64_t e = c + 1;
      while (e < it.width && packing.bottoms[i][e] == packing.bottoms[i][c]) ++e;
      const int64_t x = packing.starts[i] + c, y = packing.bottoms[i][c];
      cv.rect(x, y, e - c, it.height, fill, " stroke=\"black\" stroke-width=\"1\"");
      if (!labelled) {
        cv.text(x, y, e - c, it.height, it.id);
        labelled = true;
      }
      c = e;
    }
  }
  if (spec.profile) {
    auto load = slice_column_sums(instance, packing);
    std::string path = "<polyline fill=\"none\" stroke=\"#222222\" stroke-dasharray=\"4 2\" points=\"";
    for (int64_t x = 0; x < W; ++x) {
      path += std::to_string(10 + x * spec.cell) + ',' + std::to_string(10 + cv.py(load[x])) + ' ';
      path += std::to_string(10 + (x + 1) * spec.cell) + ',' + std::to_string(10 + cv.py(load[x])) + ' ';
    }
    path += "\"/>\n";
    cv.raw(path);
  }
  if (spec.boxes) {
    for (const auto& o : overlays) {
      cv.rect(o.x, o.y, o.width, o.height, "none",
              " stroke=\"#333333\" stroke-width=\"2\" stroke-dasharray=\"6 3\"");
      if (!o.label.empty()) cv.text(o.x, o.y, o.width, o.height, o.label);
    }
  }
  return cv.finish();
}

std::string render_sp(const Instance& instance, const SpSolution& solution, const RenderSpec& spec) {
  return render_packing(instance, to_sliced(instance, solution), spec);
}

std::string render_schedule(const std::vector<Job>& jobs, const PtsSchedule& schedule, int64_t m,
                            const RenderSpec& spec) {
  check_spec(spec);
  validate_schedule(jobs, schedule, m);
  const int64_t T = makespan(jobs, schedule);
  Canvas cv(T, m, spec);
  if (spec.grid && T > 0) {
    for (int64_t k = 1; k < m; ++k) cv.hline(k, "#cccccc");
  }
  for (size_t j = 0; j < jobs.size(); ++j) {
    std::vector<int64_t> lanes = schedule.rho[j];
    std::sort(lanes.begin(), lanes.end());
    size_t a = 0;
    bool labelled = false;
    while (a < lanes.size()) {
      size_t b = a + 1;
      while (b < lanes.size() && lanes[b] == lanes[b - 1] + 1) ++b;
      const int64_t lane = lanes[a], run = static_cast<int64_t>(b - a);
      cv.rect(schedule.sigma[j], lane, jobs[j].p, run, item_colour("", j),
              " stroke=\"black\" stroke-width=\"1\"");
      if (!labelled) {
        cv.text(schedule.sigma[j], lane, jobs[j].p, run, jobs[j].id);
        labelled = true;
      }
      a = b;
    }
  }
  return cv.finish();
}

}  // namespace dspkit
