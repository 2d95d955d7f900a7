//
// Copyright 2026 The Onestep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef ONESTEP_ERRORS_H_
#define ONESTEP_ERRORS_H_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace onestep {

// Bad shape, size or value passed by the caller.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameter outside the model's parameter space.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Operation not defined for this model (e.g. a cdf for a vector-valued model).
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An iterative estimator failed to converge. Carries the last iterate and the
// gradient norm there so callers can report or retry.
class EstimationError : public std::runtime_error {
 public:
  EstimationError(const std::string& what, std::vector<double> last_iterate,
                  double gradient_norm)
      : std::runtime_error(what),
        last_iterate_(std::move(last_iterate)),
        gradient_norm_(gradient_norm) {}

  const std::vector<double>& last_iterate() const { return last_iterate_; }
  double gradient_norm() const { return gradient_norm_; }

 private:
  std::vector<double> last_iterate_;
  double gradient_norm_;
};

}  // namespace onestep

#endif  // ONESTEP_ERRORS_H_
