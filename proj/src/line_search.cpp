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

#include "qbound/line_search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "qbound/error.hpp"

namespace qbound {

LineSearchResult LineSearch1d(const std::function<double(double)>& f, int coarse_points, double lo,
                              double hi) {
  if (coarse_points < 2 || !(lo > 0.0) || !(hi > lo)) {
    throw Error(ErrorCode::kInvalidInput, "line search needs >= 2 points on 0 < lo < hi");
  }
  LineSearchResult best;
  best.value = std::numeric_limits<double>::infinity();
  best.nu = hi;
  auto eval = [&](double nu) {
    double v = f(nu);
    ++best.evaluations;
    if (!std::isfinite(v)) v = std::numeric_limits<double>::infinity();
    if (v < best.value) {
      best.value = v;
      best.nu = nu;
    }
    return v;
  };

  std::vector<double> grid(static_cast<std::size_t>(coarse_points));
  const double step = std::log(hi / lo) / (coarse_points - 1);
  for (int k = 0; k < coarse_points; ++k) grid[static_cast<std::size_t>(k)] = lo * std::exp(step * k);
  grid.back() = hi;
  std::vector<double> values(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) values[k] = eval(grid[k]);

  const auto k = static_cast<std::size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());
  if (!std::isfinite(values[k])) return best;
  const double a = grid[k == 0 ? 0 : k - 1];
  const double b = grid[std::min(k + 1, grid.size() - 1)];
  std::uintmax_t max_iter = 60;
  boost::math::tools::brent_find_minima(eval, a, b, std::numeric_limits<double>::digits / 2,
                                        max_iter);
  return best;
}

}  // namespace qbound
