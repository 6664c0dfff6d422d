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

#include "dspkit/io.hpp"

#include <fstream>
#include <sstream>

#include "dspkit/errors.hpp"

namespace dspkit {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidInput(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

int64_t as_int(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw InvalidInput(what + " must be an integer");
  return j.get<int64_t>();
}

std::string as_id(const Json& j) {
  if (!j.is_string()) throw InvalidInput("ids must be strings");
  return j.get<std::string>();
}

const Json& keyed(const Json& map, const std::string& id, const char* what) {
  if (!map.is_object()) throw InvalidInput(std::string(what) + " must be an object keyed by id");
  auto it = map.find(id);
  if (it == map.end()) throw InvalidInput(std::string(what) + " has no entry for '" + id + "'");
  return *it;
}

void check_keys(const Json& map, size_t expected, const char* what) {
  if (map.size() != expected) {
    throw InvalidInput(std::string(what) + " has " + std::to_string(map.size()) +
                       " entries, expected " + std::to_string(expected));
  }
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Instance instance_from_json(const Json& j) {
  int64_t w = as_int(field(j, "strip_width"), "strip_width");
  const Json& arr = field(j, "items");
  if (!arr.is_array()) throw InvalidInput("items must be an array");
  std::vector<Item> items;
  items.reserve(arr.size());
  for (const auto& e : arr) {
    Item it;
    it.id = as_id(field(e, "id"));
    it.width = as_int(field(e, "w"), "w");
    it.height = as_int(field(e, "h"), "h");
    items.push_back(std::move(it));
  }
  return Instance(w, std::move(items));
}

Json to_json(const Instance& instance) {
  Json j;
  j["strip_width"] = instance.strip_width();
  Json arr = Json::array();
  for (const auto& it : instance.items()) {
    Json e;
    e["id"] = it.id;
    e["w"] = it.width;
    e["h"] = it.height;
    arr.push_back(std::move(e));
  }
  j["items"] = std::move(arr);
  return j;
}

DspSolution solution_from_json(const Json& j, const Instance& instance) {
  const Json& starts = field(j, "starts");
  check_keys(starts, instance.size(), "starts");
  DspSolution s;
  for (const auto& it : instance.items()) {
    s.starts.push_back(as_int(keyed(starts, it.id, "starts"), "start"));
  }
  return s;
}

Json to_json(const Instance& instance, const DspSolution& solution) {
  Json starts = Json::object();
  for (size_t i = 0; i < instance.size(); ++i) starts[instance.item(i).id] = solution.starts[i];
  Json j;
  j["starts"] = std::move(starts);
  return j;
}

SlicedPacking sliced_from_json(const Json& j, const Instance& instance) {
  SlicedPacking p;
  p.starts = solution_from_json(j, instance).starts;
  const Json& bottoms = field(j, "bottoms");
  check_keys(bottoms, instance.size(), "bottoms");
  for (const auto& it : instance.items()) {
    const Json& arr = keyed(bottoms, it.id, "bottoms");
    if (!arr.is_array()) throw InvalidInput("bottoms of '" + it.id + "' must be an array");
    std::vector<int64_t> b;
    for (const auto& y : arr) b.push_back(as_int(y, "bottom"));
    p.bottoms.push_back(std::move(b));
  }
  return p;
}

Json to_json(const Instance& instance, const SlicedPacking& packing) {
  Json j = to_json(instance, drop_to_solution(packing));
  Json bottoms = Json::object();
  for (size_t i = 0; i < instance.size(); ++i) {
    Json arr = Json::array();
    for (int64_t y : packing.bottoms[i]) arr.push_back(y);
    bottoms[instance.item(i).id] = std::move(arr);
  }
  j["bottoms"] = std::move(bottoms);
  return j;
}

SpSolution sp_from_json(const Json& j, const Instance& instance) {
  const Json& pl = field(j, "placements");
  check_keys(pl, instance.size(), "placements");
  SpSolution s;
  for (const auto& it : instance.items()) {
    const Json& xy = keyed(pl, it.id, "placements");
    if (!xy.is_array() || xy.size() != 2) throw InvalidInput("placement must be [x, y]");
    s.placements.push_back({as_int(xy[0], "x"), as_int(xy[1], "y")});
  }
  return s;
}

Json to_json(const Instance& instance, const SpSolution& solution) {
  Json pl = Json::object();
  for (size_t i = 0; i < instance.size(); ++i) {
    pl[instance.item(i).id] = Json::array({solution.placements[i].x, solution.placements[i].y});
  }
  Json j;
  j["placements"] = std::move(pl);
  return j;
}

JobSet jobs_from_json(const Json& j) {
  JobSet s;
  s.machines = as_int(field(j, "machines"), "machines");
  if (s.machines < 1) throw InvalidInput("machines must be positive");
  const Json& arr = field(j, "jobs");
  if (!arr.is_array()) throw InvalidInput("jobs must be an array");
  for (const auto& e : arr) {
    Job job;
    job.id = as_id(field(e, "id"));
    job.p = as_int(field(e, "p"), "p");
    job.q = as_int(field(e, "q"), "q");
    s.jobs.push_back(std::move(job));
  }
  check_jobs(s.jobs);
  return s;
}

Json to_json(const JobSet& jobs) {
  Json j;
  j["machines"] = jobs.machines;
  Json arr = Json::array();
  for (const auto& job : jobs.jobs) {
    Json e;
    e["id"] = job.id;
    e["p"] = job.p;
    e["q"] = job.q;
    arr.push_back(std::move(e));
  }
  j["jobs"] = std::move(arr);
  return j;
}

PtsSchedule schedule_from_json(const Json& j, const std::vector<Job>& jobs) {
  const Json& sigma = field(j, "sigma");
  const Json& rho = field(j, "rho");
  check_keys(sigma, jobs.size(), "sigma");
  check_keys(rho, jobs.size(), "rho");
  PtsSchedule s;
  for (const auto& job : jobs) {
    s.sigma.push_back(as_int(keyed(sigma, job.id, "sigma"), "sigma"));
    const Json& arr = keyed(rho, job.id, "rho");
    if (!arr.is_array()) throw InvalidInput("rho of '" + job.id + "' must be an array");
    std::vector<int64_t> ms;
    for (const auto& k : arr) ms.push_back(as_int(k, "machine index"));
    s.rho.push_back(std::move(ms));
  }
  return s;
}

Json to_json(const std::vector<Job>& jobs, const PtsSchedule& schedule) {
  Json sigma = Json::object(), rho = Json::object();
  for (size_t i = 0; i < jobs.size(); ++i) {
    sigma[jobs[i].id] = schedule.sigma[i];
    Json arr = Json::array();
    for (int64_t k : schedule.rho[i]) arr.push_back(k);
    rho[jobs[i].id] = std::move(arr);
  }
  Json j;
  j["sigma"] = std::move(sigma);
  j["rho"] = std::move(rho);
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
}

}  // namespace dspkit
