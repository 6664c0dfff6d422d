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

#ifndef DSPKIT_IO_HPP_
#define DSPKIT_IO_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "dspkit/core.hpp"
#include "dspkit/transform.hpp"

namespace dspkit {

using Json = nlohmann::ordered_json;

Json parse_json(const std::string& text);
// Canonical text form; parse followed by dump reproduces canonical input byte for byte.
std::string dump(const Json& j);

Instance instance_from_json(const Json& j);
Json to_json(const Instance& instance);

DspSolution solution_from_json(const Json& j, const Instance& instance);
Json to_json(const Instance& instance, const DspSolution& solution);

SlicedPacking sliced_from_json(const Json& j, const Instance& instance);
Json to_json(const Instance& instance, const SlicedPacking& packing);

SpSolution sp_from_json(const Json& j, const Instance& instance);
Json to_json(const Instance& instance, const SpSolution& solution);

struct JobSet {
  int64_t machines = 1;
  std::vector<Job> jobs;
};

JobSet jobs_from_json(const Json& j);
Json to_json(const JobSet& jobs);

PtsSchedule schedule_from_json(const Json& j, const std::vector<Job>& jobs);
Json to_json(const std::vector<Job>& jobs, const PtsSchedule& schedule);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace dspkit

#endif  // DSPKIT_IO_HPP_
