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

#ifndef DSPKIT_ERRORS_HPP_
#define DSPKIT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dspkit {

enum class ErrorKind { kInvalidInput, kInfeasible, kLimitExceeded, kPrecondition, kInternal };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct InvalidInput : Error {
  explicit InvalidInput(const std::string& w) : Error(ErrorKind::kInvalidInput, w) {}
};

struct Infeasible : Error {
  explicit Infeasible(const std::string& w) : Error(ErrorKind::kInfeasible, w) {}
};

struct LimitExceeded : Error {
  explicit LimitExceeded(const std::string& w) : Error(ErrorKind::kLimitExceeded, w) {}
};

struct PreconditionViolated : Error {
  explicit PreconditionViolated(const std::string& w) : Error(ErrorKind::kPrecondition, w) {}
};

struct InternalError : Error {
  explicit InternalError(const std::string& w) : Error(ErrorKind::kInternal, w) {}
};

// Process exit status used by the command line tool.
int exit_code(ErrorKind kind);

}  // namespace dspkit

#endif  // DSPKIT_ERRORS_HPP_
