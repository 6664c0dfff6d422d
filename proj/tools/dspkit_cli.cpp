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

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "dspkit/approx.hpp"
#include "dspkit/augment.hpp"
#include "dspkit/bench.hpp"
#include "dspkit/errors.hpp"
#include "dspkit/generate.hpp"
#include "dspkit/io.hpp"
#include "dspkit/oracle.hpp"
#include "dspkit/place.hpp"
#include "dspkit/render.hpp"
#include "dspkit/structure.hpp"
#include "dspkit/transform.hpp"

using namespace dspkit;

namespace {

Json load(const std::string& path) { return parse_json(read_file(path)); }

void emit(const Json& j, const std::string& path = "") {
  if (path.empty() || path == "-") {
    std::cout << dump(j);
  } else {
    write_file(path, dump(j));
  }
}

// Accepts a sliced packing, a start vector (stacked per column) or an
// unsliced placement.
SlicedPacking load_packing(const Json& j, const Instance& inst) {
  if (j.contains("bottoms")) return sliced_from_json(j, inst);
  if (j.contains("placements")) return to_sliced(inst, sp_from_json(j, inst));
  if (j.contains("starts")) return stack_columns(inst, solution_from_json(j, inst));
  throw InvalidInput("packing needs bottoms, placements or starts");
}

Json ratio_json(const Rational& r) { return to_string(r); }

struct ParamFlags {
  std::string eps = "1/4", delta = "1/16", mu = "1/64";
  int64_t height = 0;

  void add(CLI::App* app) {
    app->add_option("--eps", eps, "epsilon as p/q");
    app->add_option("--delta", delta, "delta as p/q");
    app->add_option("--mu", mu, "mu as p/q");
    app->add_option("--height", height, "height guess H' (default: exact optimum)");
  }

  EpsParams make(const Instance& inst, const OracleLimits& limits) const {
    int64_t h = height;
    if (h <= 0) h = solve_dsp_exact(inst, limits).peak;
    return make_params(parse_rational(eps), parse_rational(delta), parse_rational(mu), h);
  }
};

Json classification_json(const Instance& inst, const Classification& c) {
  Json j = Json::object();
  for (size_t i = 0; i < inst.size(); ++i) j[inst.item(i).id] = class_name(c.of_item[i]);
  return j;
}

Json box_json(const Instance& inst, const Box& b) {
  Json j;
  j["kind"] = box_kind_name(b.kind);
  j["x"] = b.x;
  j["width"] = b.width;
  j["height"] = b.height;
  if (b.y) j["y"] = *b.y;
  j["sliceable"] = b.sliceable;
  Json items = Json::array();
  for (size_t i : b.items) items.push_back(inst.item(i).id);
  j["items"] = std::move(items);
  if (!b.overlap_items.empty()) {
    Json over = Json::array();
    for (size_t i : b.overlap_items) over.push_back(inst.item(i).id);
    j["overlap_items"] = std::move(over);
  }
  return j;
}

Json partition_json(const Instance& inst, const BoxPartition& p) {
  Json j;
  for (auto [name, boxes] : {std::pair{"B_L", &p.B_L}, {"B_H", &p.B_H}, {"B_TV", &p.B_TV}}) {
    Json arr = Json::array();
    for (const auto& b : *boxes) arr.push_back(box_json(inst, b));
    j[name] = std::move(arr);
  }
  j["bound_B_H"] = ratio_json(p.bound_B_H);
  j["bound_B_TV"] = ratio_json(p.bound_B_TV);
  j["horizontal_starts"] = p.horizontal_starts;
  j["horizontal_start_bound"] = p.horizontal_start_bound;
  j["start_reduction_applied"] = p.start_reduction_applied;
  return j;
}

std::vector<std::string> class_letters(const Classification& c) {
  std::vector<std::string> out;
  for (auto k : c.of_item) out.push_back(class_name(k));
  return out;
}

Json counters_json(const SweepCounters& c) {
  Json j;
  j["events"] = c.events;
  j["restack_events"] = c.restack_events;
  j["comparisons"] = c.comparisons;
  j["max_event_comparisons"] = c.max_event_comparisons;
  j["machine_scans"] = c.machine_scans;
  j["max_event_scans"] = c.max_event_scans;
  return j;
}

Json probes_json(const std::vector<Probe>& probes) {
  Json arr = Json::array();
  for (const auto& p : probes) {
    arr.push_back(Json{{"guess", p.guess}, {"objective", p.objective}, {"accepted", p.accepted}});
  }
  return arr;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  if (path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Demand strip packing and parallel task scheduling toolkit"};
  app.require_subcommand(1);
  OracleLimits limits;

  std::string input, output, svg, packing_path, schedule_path, jobs_path;

  auto* solve = app.add_subcommand("solve-exact", "exact optimum of a small instance");
  std::string mode = "dsp";
  solve->add_option("--mode", mode)->check(CLI::IsMember({"dsp", "sp", "pts"}));
  solve->add_option("--input", input, "instance or job set JSON")->required();
  solve->add_option("--output", output, "solution JSON");

  auto* approx = app.add_subcommand("approx", "Steinberg or NFDH packing");
  std::string algo = "steinberg";
  approx->add_option("--algo", algo)->check(CLI::IsMember({"steinberg", "nfdh"}));
  approx->add_option("--input", input)->required();
  approx->add_option("--output", output);
  approx->add_option("--svg", svg);

  auto* transform = app.add_subcommand("transform", "schedule/packing conversions");
  std::string dir;
  int64_t machines = 0;
  transform->add_option("--dir", dir)->required()->check(CLI::IsMember({"pts2dsp", "dsp2pts"}));
  transform->add_option("--input", input, "job set (pts2dsp) or instance (dsp2pts)")->required();
  transform->add_option("--schedule", schedule_path, "schedule JSON (pts2dsp)");
  transform->add_option("--packing", packing_path, "packing JSON (dsp2pts)");
  transform->add_option("--machines", machines, "machine count (dsp2pts)");
  transform->add_option("--output", output);

  auto* augment = app.add_subcommand("augment", "optimum under resource augmentation");
  std::string target = "width", inner_name = "exact", rho;
  augment->add_option("--target", target)->check(CLI::IsMember({"width", "machines"}));
  augment->add_option("--inner", inner_name)->check(CLI::IsMember({"exact", "steinberg"}));
  augment->add_option("--rho", rho, "declared inner ratio p/q");
  augment->add_option("--input", input, "instance (width) or job set (machines)")->required();
  augment->add_option("--output", output);

  ParamFlags pf;
  auto* classify_cmd = app.add_subcommand("classify", "item classes for eps, delta, mu");
  pf.add(classify_cmd);
  classify_cmd->add_option("--input", input)->required();
  classify_cmd->add_option("--output", output);

  auto* partition = app.add_subcommand("partition", "rounding and box partition of a packing");
  pf.add(partition);
  partition->add_option("--input", input)->required();
  partition->add_option("--packing", packing_path)->required();
  partition->add_option("--output", output);
  partition->add_option("--svg", svg);

  auto* restructure = app.add_subcommand("restructure", "structured packing with height ledger");
  pf.add(restructure);
  std::string ledger_path;
  restructure->add_option("--input", input)->required();
  restructure->add_option("--packing", packing_path)->required();
  restructure->add_option("--output", output);
  restructure->add_option("--ledger", ledger_path);
  restructure->add_option("--svg", svg);

  auto* gap = app.add_subcommand("gap-demo", "sliced versus unsliced optimum on the gap instance");
  std::string svg_sp;
  gap->add_option("--output", output, "instance JSON");
  gap->add_option("--svg", svg, "sliced optimum SVG");
  gap->add_option("--svg-sp", svg_sp, "unsliced optimum SVG");

  auto* render = app.add_subcommand("render", "SVG of a packing or schedule");
  RenderSpec spec;
  render->add_option("--input", input, "instance or job set")->required();
  render->add_option("--packing", packing_path);
  render->add_option("--schedule", schedule_path);
  render->add_option("--cell", spec.cell);
  render->add_option("--height-unit", spec.height_unit);
  render->add_flag("--profile", spec.profile);
  render->add_option("--output", output);

  auto* bench_cmd = app.add_subcommand("bench", "transformation operation counters");
  std::vector<int64_t> sizes{100, 1000, 10000};
  uint64_t seed = 1;
  bench_cmd->add_option("--sizes", sizes)->delimiter(',');
  bench_cmd->add_option("--seed", seed);
  bench_cmd->add_option("--machines", machines);

  auto* gen = app.add_subcommand("generate", "instance generators");
  std::string kind = "random";
  size_t n = 8;
  int64_t width = 10, hmax = 8, m = 4;
  gen->add_option("--kind", kind)->check(CLI::IsMember({"gap", "random", "jobs", "planted"}));
  gen->add_option("--seed", seed);
  gen->add_option("-n,--count", n);
  gen->add_option("--width", width);
  gen->add_option("--hmax", hmax);
  gen->add_option("--machines", m);
  gen->add_option("--output", output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code(ErrorKind::kInvalidInput);
  }

  try {
    limits = limits_from_env();
    if (*solve) {
      Json in = load(input);
      Json out;
      out["mode"] = mode;
      if (mode == "pts") {
        JobSet js = jobs_from_json(in);
        auto r = solve_pts_exact(js.jobs, js.machines, limits);
        out["optimum"] = r.makespan;
        out["solution"] = to_json(js.jobs, r.schedule);
      } else {
        Instance inst = instance_from_json(in);
        if (mode == "dsp") {
          auto r = solve_dsp_exact(inst, limits);
          out["optimum"] = r.peak;
          out["nodes"] = r.nodes;
          out["solution"] = to_json(inst, stack_columns(inst, r.solution));
        } else {
          auto r = solve_sp_exact(inst, std::nullopt, limits);
          out["optimum"] = r.height;
          out["nodes"] = r.nodes;
          out["solution"] = to_json(inst, r.solution);
        }
      }
      if (!output.empty()) emit(out["solution"], output);
      out.erase("solution");
      emit(out);
    } else if (*approx) {
      Instance inst = instance_from_json(load(input));
      Json out;
      out["algo"] = algo;
      SpSolution sol;
      if (algo == "steinberg") {
        auto r = steinberg_pack(inst);
        sol = r.solution;
        out["height"] = r.height;
        out["lower_bound"] = r.bounds.lower;
        out["calls"] = r.calls;
        out["used_exact_fallback"] = r.used_exact_fallback;
      } else {
        auto r = nfdh_pack(inst.items(), inst.strip_width(), std::numeric_limits<int64_t>::max() / 4);
        for (const auto& p : r.position) sol.placements.push_back(*p);
        out["height"] = r.used_height();
        out["shelves"] = r.shelves.size();
        out["lower_bound"] = lower_bound(inst);
      }
      if (!output.empty()) emit(to_json(inst, sol), output);
      write_text(svg, render_sp(inst, sol, RenderSpec{}));
      emit(out);
    } else if (*transform) {
      if (dir == "pts2dsp") {
        if (schedule_path.empty()) throw InvalidInput("--schedule is required for pts2dsp");
        JobSet js = jobs_from_json(load(input));
        PtsSchedule s = schedule_from_json(load(schedule_path), js.jobs);
        auto r = schedule_to_packing(js.jobs, s, js.machines);
        Json out;
        out["instance"] = to_json(r.instance);
        out["packing"] = to_json(r.instance, r.packing);
        out["counters"] = counters_json(r.counters);
        emit(out, output);
      } else {
        if (packing_path.empty() || machines < 1) {
          throw InvalidInput("--packing and --machines are required for dsp2pts");
        }
        Instance inst = instance_from_json(load(input));
        SlicedPacking pk = load_packing(load(packing_path), inst);
        auto r = packing_to_schedule(inst, pk, machines);
        auto jobs = items_to_jobs(inst.items());
        Json out;
        out["jobs"] = to_json(JobSet{machines, jobs});
        out["schedule"] = to_json(jobs, r.schedule);
        out["makespan"] = makespan(jobs, r.schedule);
        out["counters"] = counters_json(r.counters);
        emit(out, output);
      }
    } else if (*augment) {
      Json out;
      out["target"] = target;
      out["inner"] = inner_name;
      if (target == "width") {
        Instance inst = instance_from_json(load(input));
        PtsInner inner = inner_name == "exact" ? exact_pts_inner(limits) : steinberg_pts_inner();
        if (!rho.empty()) inner.rho = parse_rational(rho);
        auto r = optimal_height_with_width_augmentation(inst, inner);
        out["height"] = r.height;
        out["width_used"] = r.width_used;
        out["width_cap"] = r.width_cap;
        out["lower"] = r.bounds.lower;
        out["upper"] = r.bounds.upper;
        out["probes"] = probes_json(r.probes);
        out["probe_limit"] = r.probe_limit;
        out["packing"] = to_json(r.instance, r.packing);
      } else {
        JobSet js = jobs_from_json(load(input));
        DspInner inner = inner_name == "exact" ? exact_dsp_inner(limits) : steinberg_dsp_inner();
        if (!rho.empty()) inner.rho = parse_rational(rho);
        auto r = optimal_makespan_with_machine_augmentation(js.jobs, js.machines, inner);
        out["makespan"] = r.makespan;
        out["machines_used"] = r.machines_used;
        out["machine_cap"] = r.machine_cap;
        out["lower"] = r.bounds.lower;
        out["upper"] = r.bounds.upper;
        out["probes"] = probes_json(r.probes);
        out["probe_limit"] = r.probe_limit;
        out["schedule"] = to_json(js.jobs, r.schedule);
      }
      emit(out, output);
    } else if (*classify_cmd) {
      Instance inst = instance_from_json(load(input));
      EpsParams params = pf.make(inst, limits);
      auto c = classify(inst, params);
      Json out;
      out["height_guess"] = params.H_guess;
      out["classes"] = classification_json(inst, c);
      out["medium_area"] = medium_area(inst, c);
      emit(out, output);
    } else if (*partition) {
      Instance inst = instance_from_json(load(input));
      SlicedPacking pk = load_packing(load(packing_path), inst);
      EpsParams params = pf.make(inst, limits);
      auto c = classify(inst, params);
      auto rounded = round_heights(inst, pk, params);
      auto p = partition_into_boxes(rounded, c, params);
      Json out;
      out["height_guess"] = params.H_guess;
      out["scale"] = params.scale;
      out["classes"] = classification_json(inst, c);
      out["rounded"] = to_json(rounded.instance, rounded.packing);
      out["partition"] = partition_json(rounded.instance, p);
      emit(out, output);
      if (!svg.empty()) {
        std::vector<Overlay> boxes;
        for (const auto& b : p.B_TV) boxes.push_back({b.x, 0, b.width, b.height, "TV"});
        RenderSpec rs;
        rs.height_unit = params.scale;
        write_text(svg, render_packing(rounded.instance, rounded.packing, rs, class_letters(c), boxes));
      }
    } else if (*restructure) {
      Instance inst = instance_from_json(load(input));
      SlicedPacking pk = load_packing(load(packing_path), inst);
      EpsParams params = pf.make(inst, limits);
      auto r = restructure_pipeline(inst, pk, params);
      Json out;
      out["instance"] = to_json(r.instance);
      out["packing"] = to_json(r.instance, r.packing);
      emit(out, output);
      Json ledger;
      ledger["unit"] = params.opt_scaled();
      Json entries = Json::array();
      for (const auto& e : r.ledger) {
        entries.push_back(Json{{"name", e.name},
                               {"increment", e.increment},
                               {"nominal", ratio_json(e.nominal)},
                               {"within_nominal", e.within_nominal}});
      }
      ledger["entries"] = std::move(entries);
      ledger["total"] = r.total;
      ledger["core_total"] = r.core_total;
      ledger["bound"] = ratio_json(r.bound);
      ledger["core_bound"] = ratio_json(r.core_bound);
      ledger["within_bound"] = r.within_bound();
      auto issues = audit_pipeline(inst, r);
      ledger["issues"] = issues;
      if (ledger_path.empty()) {
        std::cerr << dump(ledger);
      } else {
        emit(ledger, ledger_path);
      }
      if (!svg.empty()) {
        std::vector<Overlay> boxes;
        for (size_t k = 0; k < r.partition.B_TV.size(); ++k) {
          const auto& b = r.partition.B_TV[k];
          boxes.push_back({b.x, 0, b.width, r.reorders[k].height, r.reorders[k].procedure});
        }
        RenderSpec rs;
        rs.height_unit = params.scale;
        write_text(svg, render_packing(r.instance, r.packing, rs, class_letters(r.classification), boxes));
      }
    } else if (*gap) {
      Instance inst = gen_gap_instance();
      auto dsp = solve_dsp_exact(inst, limits);
      auto sp = solve_sp_exact(inst, std::nullopt, limits);
      Json out;
      out["dsp_optimum"] = dsp.peak;
      out["sp_optimum"] = sp.height;
      out["ratio"] = to_string(Rational(sp.height, dsp.peak));
      out["dsp_starts"] = to_json(inst, dsp.solution)["starts"];
      emit(out);
      if (!output.empty()) emit(to_json(inst), output);
      write_text(svg, render_packing(inst, stack_columns(inst, dsp.solution), RenderSpec{}));
      write_text(svg_sp, render_sp(inst, sp.solution, RenderSpec{}));
    } else if (*render) {
      Json in = load(input);
      std::string text;
      if (!schedule_path.empty()) {
        JobSet js = jobs_from_json(in);
        text = render_schedule(js.jobs, schedule_from_json(load(schedule_path), js.jobs), js.machines, spec);
      } else {
        Instance inst = instance_from_json(in);
        SlicedPacking pk = packing_path.empty() ? SlicedPacking{} : load_packing(load(packing_path), inst);
        if (packing_path.empty() && !inst.empty()) throw InvalidInput("--packing or --schedule is required");
        text = render_packing(inst, pk, spec);
      }
      write_text(output.empty() ? "-" : output, text);
    } else if (*bench_cmd) {
      auto report = bench(sizes, seed, machines > 0 ? machines : 8);
      Json rows = Json::array();
      for (const auto& row : report.rows) {
        rows.push_back(Json{{"n", row.n},
                            {"machines", row.machines},
                            {"schedule_to_packing", counters_json(row.to_packing)},
                            {"packing_to_schedule", counters_json(row.to_schedule)},
                            {"schedule_to_packing_ms", row.to_packing_ms},
                            {"packing_to_schedule_ms", row.to_schedule_ms},
                            {"n_log_n", row.n_log_n},
                            {"within_limits", row.within_limits()}});
      }
      emit(Json{{"rows", rows}});
    } else if (*gen) {
      if (kind == "gap") {
        emit(to_json(gen_gap_instance()), output);
      } else if (kind == "random") {
        emit(to_json(gen_random(seed, n, width, hmax)), output);
      } else if (kind == "jobs") {
        auto rs = gen_random_schedule(seed, n, m, hmax);
        emit(Json{{"jobs", to_json(JobSet{m, rs.jobs})}, {"schedule", to_json(rs.jobs, rs.schedule)}}, output);
      } else {
        auto pl = gen_planted(seed, width, hmax, n);
        emit(Json{{"instance", to_json(pl.instance)},
                  {"packing", to_json(pl.instance, pl.packing)},
                  {"height", pl.height}},
             output);
      }
    }
  } catch (const Error& e) {
    std::cerr << dump(Json{{"error", e.what()}, {"exit_code", exit_code(e.kind())}});
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << dump(Json{{"error", e.what()}, {"exit_code", 1}});
    return 1;
  }
  return 0;
}
