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

// Analytic model for a fully chiral (cascaded) array.
//
// All functions that take ModelParams use the right-mode coupling gamma_r as
// the waveguide coupling of a single atom. For D = 1 this is the beta factor.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wgbragg/model.hpp"

namespace wgbragg::closed {

/// Amplitude transmission of guided light past one atom,
/// t = 1 - 2 i beta / (2 delta + i).
Complex transmission_coefficient(double delta, double beta);

/// Single-atom scattering rate into the guided mode, 4 Omega^2 beta / (4 delta^2 + 1).
double single_atom_guided_rate(double delta, double omega, double beta);

/// k_eff = k0 cos(theta) + k_f.
double effective_wavenumber(double theta, double n_eff);

/// Per-site phase mismatch b = arg t - k_eff a, reduced to (-pi, pi].
double phase_mismatch(double theta, double delta, const ModelParams& params);

/// Reduces an angle to (-pi, pi]; ties at +-pi go to +pi.
double wrap_phase(double phase);

/// Term-by-term sum  Gt |sum_{m<N} t^m exp(-i m k_eff a)|^2.
double rate_direct_sum(std::size_t n, double theta, double delta, const ModelParams& params);

/// Closed geometric-series form of rate_direct_sum.
double rate_geometric_sum(std::size_t n, double theta, double delta, const ModelParams& params);

/// Cascaded rate for atoms at arbitrary ascending positions (voids):
/// Gt |sum_k t^(N-1-k) exp(i k_eff z_k)|^2.
double rate_cascaded(std::span<const double> positions, double theta, double delta,
                     const ModelParams& params);

struct BraggOrder {
  int m = 0;
  double cos_theta = 0.0;
  double theta = 0.0;
};

/// cos(theta_GB) = 2 pi m / (a k0) - k_f / k0.
double geometric_bragg_cos(int m, double a, double n_eff);

/// Every order m with |cos(theta_GB)| <= 1, ascending in m.
std::vector<BraggOrder> bragg_orders(const ModelParams& params);

/// Throws DomainError when order m has no real angle.
double geometric_bragg_angle(int m, const ModelParams& params);

/// cos(theta_MB) = cos(theta_GB) + arg t / (k0 * spacing).
double modified_bragg_cos(int m, double delta, const ModelParams& params, double spacing);

/// Modified Bragg angle on the lattice of `params`. Throws DomainError when
/// |cos| > 1.
double modified_bragg_angle(int m, double delta, const ModelParams& params);

/// Modified Bragg angle for an effective spacing (a / filling for arrays
/// with voids), keeping the geometric angle of order m on the lattice a.
double modified_bragg_angle(int m, double delta, const ModelParams& params, double spacing);

struct AliasResult {
  double b_alias = 0.0;
  /// 2 pi / b_alias, +inf when b_alias == 0.
  double period = 0.0;
};

AliasResult alias_analysis(double b);

struct BraggSolution {
  int m = 0;
  double theta_gb = 0.0;
  double cos_theta_gb = 0.0;
  std::optional<double> theta_mb;
  double cos_theta_mb = 0.0;
  double b = 0.0;
  double b_alias = 0.0;
  double period = 0.0;
};

/// Bragg angles of order m and the aliasing of b at (theta, delta).
BraggSolution bragg_solution(int m, double theta, double delta, const ModelParams& params);

struct GbAsymptotics {
  /// Positive branch; the other maximum sits at -delta_max.
  double delta_max = 0.0;
  double rate_max = 0.0;
  /// Large-N limit 4 Omega^2 / beta.
  double saturation_rate = 0.0;
};

/// Peak detuning and rate of the spectrum at the geometric Bragg angle,
/// valid for delta >> 1 and large N.
GbAsymptotics gb_peak_asymptotics(std::size_t n, double beta, double omega);

/// Rate on the modified-Bragg locus (b = 0):  Gt ((1 - |t|^N) / (1 - |t|))^2.
double mb_envelope(std::size_t n, double delta, double beta, double omega);

/// Power-law exponents of the modified-Bragg optimum versus N.
inline constexpr double kMbDetuningExponent = 0.5;
inline constexpr double kMbRateExponent = 1.0;

enum class Regime { quadratic, oscillatory, saturating, linear };

std::string_view to_string(Regime regime);

/// Thresholds used by classify_regime.
struct RegimeThresholds {
  double max_n_log_t = 0.05;
  double period_fraction = 0.1;
  double saturation_level = 0.01;
  /// b counts as a multiple of 2 pi when N * b_alias stays below this.
  double locked_phase = 1e-6;
};

struct RegimeLabel {
  Regime regime = Regime::oscillatory;
  double abs_t = 0.0;
  double n_log_t = 0.0;
  double b_alias = 0.0;
  double period = 0.0;
};

/// Precedence: quadratic > linear > saturating > oscillatory.
RegimeLabel classify_regime(std::size_t n, double theta, double delta, const ModelParams& params,
                            const RegimeThresholds& thresholds = {});

}  // namespace wgbragg::closed
