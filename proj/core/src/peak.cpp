// Copyright 2026 The wgbragg Authors
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

#include "wgbragg/peak.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wgbragg/errors.hpp"

namespace wgbragg {

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::positive: return "positive";
    case Branch::negative: return "negative";
    case Branch::global: return "global";
  }
  return "unknown";
}

PeakResult find_peak(std::span<const double> grid, std::span<const double> values,
                     Branch branch) {
  if (grid.size() != values.size()) throw ValidationError("grid and values differ in length");
  if (grid.size() < 3) throw ValidationError("peak search needs at least 3 points");

  auto in_branch = [&](std::size_t i) {
    if (std::isnan(values[i])) return false;
    switch (branch) {
      case Branch::positive: return grid[i] > 0.0;
      case Branch::negative: return grid[i] < 0.0;
      case Branch::global: return true;
    }
    return false;
  };

  std::size_t best = grid.size();
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (in_branch(i) && values[i] > best_value) {
      best = i;
      best_value = values[i];
    }
  }
  if (best == grid.size()) throw ValidationError("no samples in the requested branch");

  PeakResult r;
  r.branch = branch;
  r.grid_index = best;
  r.delta_max = grid[best];
  r.rate_max = best_value;

  const bool has_left = best > 0 && in_branch(best - 1);
  const bool has_right = best + 1 < grid.size() && in_branch(best + 1);
  r.grid_step = has_right ? grid[best + 1] - grid[best]
                          : (has_left ? grid[best] - grid[best - 1] : 0.0);
  if (!has_left || !has_right) {
    r.boundary = true;
    return r;
  }

  const double x0 = grid[best - 1], x1 = grid[best], x2 = grid[best + 1];
  const double y0 = values[best - 1], y1 = values[best], y2 = values[best + 1];
  const double d10 = x1 - x0, d12 = x1 - x2;
  const double denom = d10 * (y1 - y2) - d12 * (y1 - y0);
  if (denom == 0.0) return r;
  double vertex = x1 - 0.5 * (d10 * d10 * (y1 - y2) - d12 * d12 * (y1 - y0)) / denom;
  vertex = std::clamp(vertex, x0, x2);

  // Lagrange form of the same parabola.
  const double l0 = (vertex - x1) * (vertex - x2) / ((x0 - x1) * (x0 - x2));
  const double l1 = (vertex - x0) * (vertex - x2) / ((x1 - x0) * (x1 - x2));
  const double l2 = (vertex - x0) * (vertex - x1) / ((x2 - x0) * (x2 - x1));
  r.delta_max = vertex;
  r.refinement_shift = vertex - x1;
  r.rate_max = std::max(best_value, l0 * y0 + l1 * y1 + l2 * y2);
  return r;
}

}  // namespace wgbragg
