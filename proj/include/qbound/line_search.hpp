// Copyright 2026 The qbound Authors
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

#ifndef QBOUND_LINE_SEARCH_HPP_
#define QBOUND_LINE_SEARCH_HPP_

#include <functional>

namespace qbound {

struct LineSearchResult {
  double nu = 1.0;
  double value = 0.0;
  int evaluations = 0;
};

// Logarithmic coarse grid on [lo, hi], then Brent refinement on the bracket
// around the best grid point. Returns the best of all evaluations.
LineSearchResult LineSearch1d(const std::function<double(double)>& f, int coarse_points = 25,
                              double lo = 1e-4, double hi = 1.0);

}  // namespace qbound

#endif  // QBOUND_LINE_SEARCH_HPP_
