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

#include <doctest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "dspkit/bench.hpp"
#include "dspkit/generate.hpp"
#include "dspkit/io.hpp"
#include "dspkit/oracle.hpp"
#include "dspkit/render.hpp"
#include "support.hpp"

using namespace dspkit;
using namespace dspkit::testing;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(DSPKIT_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string golden(const std::string& name) { return std::string(DSPKIT_GOLDEN) + "/" + name; }

size_t count(const std::string& text, const std::string& needle) {
  size_t n = 0;
  for (size_t p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("gap generator") {
  const Instance inst = gen_gap_instance();
  CHECK(inst.strip_width() == 9);
  CHECK(inst.size() == 8);
  CHECK(inst.total_area() == 36);
  CHECK(solve_dsp_exact(inst).peak == 4);
  CHECK(solve_sp_exact(inst).height == 5);
}

TEST_CASE("random generator") {
  const Instance a = gen_random(7, 12, 10, 6);
  const Instance b = gen_random(7, 12, 10, 6);
  CHECK(dump(to_json(a)) == dump(to_json(b)));
  CHECK(dump(to_json(a)) != dump(to_json(gen_random(8, 12, 10, 6))));
  for (const auto& it : a.items()) {
    CHECK(it.width >= 1);
    CHECK(it.width <= 10);
    CHECK(it.height >= 1);
    CHECK(it.height <= 6);
  }
  CHECK(gen_random(1, 0, 5, 5).empty());
}

TEST_CASE("planted generator tiles its rectangle") {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    const PlantedInstance p = gen_planted(seed, 12, 9, 8);
    CHECK(p.instance.total_area() == 12 * p.height);
    const SlicedPacking pk = to_sliced(p.instance, p.packing);
    CHECK(validate_sliced(p.instance, pk, p.height).ok());
    CHECK(packing_height(p.instance, pk) == p.height);
  }
}

TEST_CASE("render goldens") {
  CHECK(render_packing(gap_instance(), gap_packing(), RenderSpec{}) ==
        read_file(golden("gap_packing.svg")));
  CHECK(render_packing(Instance(9, {}), SlicedPacking{}, RenderSpec{}) == read_file(golden("empty.svg")));
  CHECK(dump(to_json(gap_instance(), gap_packing())) == read_file(golden("gap_packing.json")));
}

TEST_CASE("schedule render has one lane per machine") {
  for (int64_t m : {2, 3, 5}) {
    const RandomSchedule rs = gen_random_schedule(3, 6, m, 4);
    RenderSpec spec;
    const std::string svg = render_schedule(rs.jobs, rs.schedule, m, spec);
    CHECK(count(svg, "#cccccc") == static_cast<size_t>(m - 1));
    CHECK(svg.find("height=\"" + std::to_string(m * spec.cell + 20) + "\"") != std::string::npos);
  }
}

TEST_CASE("bench counters") {
  const BenchReport rep = bench({100, 1000}, 5, 8);
  REQUIRE(rep.rows.size() == 2);
  for (const auto& row : rep.rows) {
    CHECK(row.within_limits());
    CHECK(row.to_packing.restack_events <= row.n);
    CHECK(row.to_packing.max_event_comparisons <= row.n_log_n);
    CHECK(row.to_schedule.max_event_scans <= row.n);
  }
  CHECK(bench({}, 1, 8).rows.empty());
}

TEST_CASE("cli exit codes") {
  CHECK(run("generate --kind gap").code == 0);
  CHECK(run("bogus").code == 2);
  CHECK(run("solve-exact --input " + golden("missing.json")).code == 2);
  CHECK(run("solve-exact --input " + golden("gap_packing.json")).code == 2);
  const std::string tr = "transform --dir dsp2pts --input " + golden("gap_instance.json") + " --packing " +
                         golden("gap_packing.json");
  CHECK(run(tr + " --machines 4").code == 0);
  CHECK(run(tr + " --machines 2").code == 3);
  CHECK(run("solve-exact --mode dsp --input " + golden("gap_instance.json")).code == 0);
  const int rc = std::system(("DSPKIT_LIMITS=max_states=5 " + std::string(DSPKIT_CLI) +
                              " solve-exact --mode dsp --input " + golden("gap_instance.json") +
                              " >/dev/null 2>&1")
                                 .c_str());
  CHECK(WEXITSTATUS(rc) == 4);
}

TEST_CASE("cli generate and solve") {
  const Run gen = run("generate --kind gap");
  CHECK(dump(parse_json(gen.out)) == dump(to_json(gen_gap_instance())));
  const Run dsp = run("solve-exact --mode dsp --input " + golden("gap_instance.json"));
  CHECK(parse_json(dsp.out).at("optimum") == 4);
  const Run sp = run("solve-exact --mode sp --input " + golden("gap_instance.json"));
  CHECK(parse_json(sp.out).at("optimum") == 5);
}

TEST_CASE("cli render matches golden") {
  const Run r =
      run("render --input " + golden("gap_instance.json") + " --packing " + golden("gap_packing.json"));
  CHECK(r.code == 0);
  CHECK(r.out == read_file(golden("gap_packing.svg")));
}
