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

namespace wgbragg {

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
};

/// Least squares of log y against log n: y ~ prefactor * n^exponent.
/// Needs at least 4 points with n > 0 and y > 0 (ValidationError otherwise).
PowerLawFit fit_power_law(std::span<const double> n, std::span<const double> y);

struct OscillationEstimate {
  /// Dominant angular frequency folded into [0, pi].
  double frequency = 0.0;
  /// sqrt(2) times the RMS of the detrended signal.
  double amplitude = 0.0;
  /// Periodogram resolution 2 pi / (number of samples).
  double bin_width = 0.0;
  /// Decay ratio r of the fitted trend A + B r^(2N).
  double trend_ratio = 0.0;
  /// False when the detrended signal is flat (amplitude < 1e-12 |mean|).
  bool oscillating = false;
};

/// Frequency of the oscillation of `rates` over consecutive integer `n`.
///
/// The smooth part A + B r^(2N) (the envelope of a damped geometric sum) is
/// removed by least squares, with r chosen to minimize the residual, and the
/// frequency is the maximum of the periodogram of what remains. Needs at
/// least 16 consecutive integer samples.
OscillationEstimate oscillation_frequency(std::span<const double> n, std::span<const double> rates);

}  // namespace wgbragg
