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

#ifndef ONESTEP_SPECIAL_H_
#define ONESTEP_SPECIAL_H_

namespace onestep {

// psi(x) = d/dx log Gamma(x), x > 0.
double digamma(double x);

// psi'(x), x > 0.
double trigamma(double x);

// log B(a, b).
double log_beta(double a, double b);

}  // namespace onestep

#endif  // ONESTEP_SPECIAL_H_
