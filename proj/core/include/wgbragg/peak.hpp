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

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace wgbragg {

enum class Branch { positive, negative, global };

std::string_view to_string(Branch branch);

struct PeakResult {
  double delta_max = 0.0;
  double rate_max = 0.0;
  double grid_step = 0.0;
  /// Offset of the refined vertex from the best grid point.
  double refinement_shift = 0.0;
  std::size_t grid_index = 0;
  Branch branch = Branch::global;
  /// Best point sits on the edge of the searched range; not refined.
  bool boundary = false;
};

/// Grid argmax within `branch` (delta > 0, delta < 0, or everything),
/// refined by the parabola through the best point and its two neighbours.
/// The shift is clamped to one grid step. NaN samples are skipped.
/// Throws ValidationError for fewer than 3 points or an empty branch.
PeakResult find_peak(std::span<const double> grid, std::span<const double> values,
                     Branch branch = Branch::global);

}  // namespace wgbragg
