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

// Parameter scans over detuning, angle and atom number.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wgbragg/model.hpp"
#include "wgbragg/peak.hpp"

namespace wgbragg {

/// closed: cascaded analytic sums (D = 1 only); linear: weak-drive matrix
/// solve; lindblad: exact master-equation steady state (N <= 6).
enum class Tier { closed, linear, lindblad };

std::string_view to_string(Tier tier);
/// Throws ValidationError for an unknown name.
Tier parse_tier(std::string_view name);

/// Right-mode scattering rate of one geometry as a function of the drive.
class RateModel {
 public:
  /// Throws ValidationError for the closed tier with D != 1 and
  /// CapabilityError for the Lindblad tier beyond its atom limit.
  RateModel(const ModelParams& params, Tier tier);
  ~RateModel();
  RateModel(RateModel&&) noexcept;
  RateModel& operator=(RateModel&&) noexcept;

  double right_rate(double theta, double delta) const;
  Tier tier() const { return tier_; }
  const ModelParams& params() const { return params_; }

 private:
  struct Impl;
  ModelParams params_;
  Tier tier_;
  std::unique_ptr<Impl> impl_;
};

struct Axis {
  std::string name;
  std::vector<double> values;
};

struct ScanResult {
  std::vector<Axis> axes;
  std::vector<std::string> observable_names;
  /// Row-major over the axes (last axis fastest).
  std::vector<std::vector<double>> observables;
  Tier tier = Tier::closed;
  RawParams params;
  std::uint64_t seed = 0;
  std::string version;
  /// Derived quantities for the metadata block (fitted exponents etc.).
  std::vector<std::pair<std::string, double>> notes;

  std::size_t size() const;
  const std::vector<double>& observable(std::string_view name) const;
};

ScanResult spectrum_scan(double theta, std::span<const double> delta_grid, Tier tier,
                         const ModelParams& params, std::size_t threads = 1);

ScanResult map_scan(std::span<const double> theta_grid, std::span<const double> delta_grid,
                    Tier tier, const ModelParams& params, std::size_t threads = 1);

struct PeakSearch {
  /// Dense grid for the closed tier, refined parabolically.
  std::size_t grid_points = 2001;
  /// Coarse grid for matrix tiers, refined by Brent's method.
  std::size_t coarse_points = 241;
  /// Detuning window [-w, w] with w = max(min_half_width, width_per_atom * beta * N).
  double min_half_width = 4.0;
  double width_per_atom = 2.0;
  Branch branch = Branch::global;

  double half_width(std::size_t n_atoms, double beta) const;
};

/// Maximizes f over the detuning window. `closed` selects the dense-grid
/// parabolic search, otherwise coarse grid + Brent. f may return NaN to
/// exclude a detuning.
PeakResult maximize_over_detuning(const std::function<double(double)>& f, double half_width,
                                  bool closed, const PeakSearch& search);

struct ScalingPolicy {
  enum class Kind { geometric_bragg, modified_bragg, fixed };
  Kind kind = Kind::modified_bragg;
  int order = 2;
  double theta = 0.0;
  double delta = 0.0;

  static ScalingPolicy at_gb(int m) { return {Kind::geometric_bragg, m, 0.0, 0.0}; }
  static ScalingPolicy at_mb(int m) { return {Kind::modified_bragg, m, 0.0, 0.0}; }
  static ScalingPolicy fixed(double theta, double delta) { return {Kind::fixed, 0, theta, delta}; }
};

/// Peak detuning and rate of a fully occupied chain for each N.
///
/// at_gb: maximize the spectrum at theta_GB(m).
/// at_mb: maximize along theta = theta_MB(delta); for the closed tier this is
///        the b = 0 envelope.
/// fixed: the rate at (theta, delta); delta_max reports delta.
///
/// Observables: delta_max, rate_max, boundary_flag (1 when the peak hit the
/// window edge).
ScanResult n_scaling(const ScalingPolicy& policy, std::span<const std::size_t> n_list, Tier tier,
                     const ModelParams& params, std::size_t threads = 1,
                     const PeakSearch& search = {});

}  // namespace wgbragg
