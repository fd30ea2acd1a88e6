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

#include "wgbragg/closed_form.hpp"

#include <cmath>
#include <limits>

#include "wgbragg/errors.hpp"

namespace wgbragg::closed {

namespace {

// Below this the geometric-series denominator is treated as a removable
// singularity and the sum is evaluated term by term.
constexpr double kSingularDenominator = 1e-12;

// |t| and 1 - |t| without cancellation:
//   1 - |t|^2 = 4 beta (1 - beta) / (4 delta^2 + 1).
struct Attenuation {
  double abs_t;
  double one_minus_abs_t;
  double log_abs_t;
};

Attenuation attenuation(double delta, double beta) {
  const double loss = 4.0 * beta * (1.0 - beta) / (4.0 * delta * delta + 1.0);
  Attenuation a;
  a.abs_t = std::sqrt(1.0 - loss);
  a.one_minus_abs_t = loss / (1.0 + a.abs_t);
  a.log_abs_t = 0.5 * std::log1p(-loss);
  return a;
}

// (1 - |t|^N) / (1 - |t|), with the |t| -> 1 limit N.
double partial_geometric(std::size_t n, const Attenuation& att) {
  if (att.one_minus_abs_t == 0.0) return static_cast<double>(n);
  const double one_minus_power = -std::expm1(static_cast<double>(n) * att.log_abs_t);
  return one_minus_power / att.one_minus_abs_t;
}

}  // namespace

Complex transmission_coefficient(double delta, double beta) {
  const Complex i(0.0, 1.0);
  return 1.0 - 2.0 * i * beta / (2.0 * delta + i);
}

double single_atom_guided_rate(double delta, double omega, double beta) {
  return 4.0 * omega * omega * beta / (4.0 * delta * delta + 1.0);
}

double effective_wavenumber(double theta, double n_eff) {
  return kDriveWavenumber * std::cos(theta) + kDriveWavenumber * n_eff;
}

double wrap_phase(double phase) {
  double r = std::remainder(phase, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

double phase_mismatch(double theta, double delta, const ModelParams& params) {
  const Complex t = transmission_coefficient(delta, params.gamma_r());
  return wrap_phase(std::arg(t) - effective_wavenumber(theta, params.n_eff()) * params.a());
}

double rate_direct_sum(std::size_t n, double theta, double delta, const ModelParams& params) {
  const double beta = params.gamma_r();
  const Complex t = transmission_coefficient(delta, beta);
  const double phase_step = effective_wavenumber(theta, params.n_eff()) * params.a();
  // Extended-precision accumulation; the sum cancels strongly off the Bragg locus.
  using Wide = std::complex<long double>;
  const Wide step = Wide(t) * std::polar(1.0L, -static_cast<long double>(phase_step));
  Wide term(1.0L, 0.0L);
  Wide sum(0.0L, 0.0L);
  for (std::size_t m = 0; m < n; ++m) {
    sum += term;
    term *= step;
  }
  return single_atom_guided_rate(delta, params.omega(), beta) * static_cast<double>(std::norm(sum));
}

double rate_geometric_sum(std::size_t n, double theta, double delta, const ModelParams& params) {
  const double beta = params.gamma_r();
  const double single = single_atom_guided_rate(delta, params.omega(), beta);
  if (n <= 1) return n == 1 ? single : 0.0;

  const Attenuation att = attenuation(delta, beta);
  const double b = phase_mismatch(theta, delta, params);
  // 1 + |t|^2 - 2|t| cos b, written as a sum of non-negative terms.
  const double half_b = std::sin(0.5 * b);
  const double denominator =
      att.one_minus_abs_t * att.one_minus_abs_t + 4.0 * att.abs_t * half_b * half_b;
  if (denominator < kSingularDenominator) return rate_direct_sum(n, theta, delta, params);

  const double nd = static_cast<double>(n);
  const double power = std::exp(nd * att.log_abs_t);
  const double one_minus_power = -std::expm1(nd * att.log_abs_t);
  const double half_bn = std::sin(0.5 * b * nd);
  const double numerator = one_minus_power * one_minus_power + 4.0 * power * half_bn * half_bn;
  return single * numerator / denominator;
}

double rate_cascaded(std::span<const double> positions, double theta, double delta,
                     const ModelParams& params) {
  const double beta = params.gamma_r();
  const Complex t = transmission_coefficient(delta, beta);
  const double k_eff = effective_wavenumber(theta, params.n_eff());
  // Horner: each upstream emitter is attenuated once per downstream atom.
  Complex sum = 0.0;
  for (double z : positions) sum = sum * t + std::polar(1.0, k_eff * z);
  return single_atom_guided_rate(delta, params.omega(), beta) * std::norm(sum);
}

double geometric_bragg_cos(int m, double a, double n_eff) {
  return kTwoPi * m / (a * kDriveWavenumber) - n_eff;
}

std::vector<BraggOrder> bragg_orders(const ModelParams& params) {
  const double a = params.a();
  const double n_eff = params.n_eff();
  const int lo = static_cast<int>(std::ceil(a * (n_eff - 1.0))) - 1;
  const int hi = static_cast<int>(std::floor(a * (n_eff + 1.0))) + 1;
  std::vector<BraggOrder> orders;
  for (int m = lo; m <= hi; ++m) {
    const double c = geometric_bragg_cos(m, a, n_eff);
    if (std::abs(c) <= 1.0) orders.push_back({m, c, std::acos(c)});
  }
  return orders;
}

double geometric_bragg_angle(int m, const ModelParams& params) {
  const double c = geometric_bragg_cos(m, params.a(), params.n_eff());
  if (std::abs(c) > 1.0) {
    throw DomainError("Bragg order " + std::to_string(m) + " has no real angle (cos = " +
                      std::to_string(c) + ")");
  }
  return std::acos(c);
}

double modified_bragg_cos(int m, double delta, const ModelParams& params, double spacing) {
  const Complex t = transmission_coefficient(delta, params.gamma_r());
  return geometric_bragg_cos(m, params.a(), params.n_eff()) +
         wrap_phase(std::arg(t)) / (kDriveWavenumber * spacing);
}

double modified_bragg_angle(int m, double delta, const ModelParams& params) {
  return modified_bragg_angle(m, delta, params, params.a());
}

double modified_bragg_angle(int m, double delta, const ModelParams& params, double spacing) {
  const double c = modified_bragg_cos(m, delta, params, spacing);
  if (std::abs(c) > 1.0) {
    throw DomainError("modified Bragg angle out of range (cos = " + std::to_string(c) + ")");
  }
  return std::acos(c);
}

AliasResult alias_analysis(double b) {
  AliasResult r;
  r.b_alias = std::abs(wrap_phase(b));
  r.period = r.b_alias == 0.0 ? std::numeric_limits<double>::infinity() : kTwoPi / r.b_alias;
  return r;
}

BraggSolution bragg_solution(int m, double theta, double delta, const ModelParams& params) {
  BraggSolution s;
  s.m = m;
  s.cos_theta_gb = geometric_bragg_cos(m, params.a(), params.n_eff());
  s.theta_gb = geometric_bragg_angle(m, params);
  s.cos_theta_mb = modified_bragg_cos(m, delta, params, params.a());
  if (std::abs(s.cos_theta_mb) <= 1.0) s.theta_mb = std::acos(s.cos_theta_mb);
  s.b = phase_mismatch(theta, delta, params);
  const AliasResult alias = alias_analysis(s.b);
  s.b_alias = alias.b_alias;
  s.period = alias.period;
  return s;
}

GbAsymptotics gb_peak_asymptotics(std::size_t n, double beta, double omega) {
  if (!(beta > 0.0 && beta <= 1.0)) throw ValidationError("beta must lie in (0, 1]");
  if (n == 0) throw ValidationError("N must be positive");
  const double nd = static_cast<double>(n);
  GbAsymptotics g;
  g.delta_max = beta * nd / kPi;
  const double lobe = 1.0 + std::exp(-kPi * kPi * (1.0 - beta) / (2.0 * beta * nd));
  g.rate_max = omega * omega / beta * lobe * lobe;
  g.saturation_rate = 4.0 * omega * omega / beta;
  return g;
}

double mb_envelope(std::size_t n, double delta, double beta, double omega) {
  const double sum = partial_geometric(n, attenuation(delta, beta));
  return single_atom_guided_rate(delta, omega, beta) * sum * sum;
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::quadratic: return "quadratic";
    case Regime::oscillatory: return "oscillatory";
    case Regime::saturating: return "saturating";
    case Regime::linear: return "linear";
  }
  return "unknown";
}

RegimeLabel classify_regime(std::size_t n, double theta, double delta, const ModelParams& params,
                            const RegimeThresholds& thresholds) {
  const Attenuation att = attenuation(delta, params.gamma_r());
  const AliasResult alias = alias_analysis(phase_mismatch(theta, delta, params));
  const double nd = static_cast<double>(n);

  RegimeLabel label;
  label.abs_t = att.abs_t;
  label.n_log_t = nd * att.log_abs_t;
  label.b_alias = alias.b_alias;
  label.period = alias.period;

  if (std::abs(label.n_log_t) <= thresholds.max_n_log_t &&
      nd <= thresholds.period_fraction * alias.period) {
    label.regime = Regime::quadratic;
  } else if (nd * alias.b_alias <= thresholds.locked_phase && att.abs_t < 1.0) {
    label.regime = Regime::linear;
  } else if (std::exp(label.n_log_t) <= thresholds.saturation_level) {
    label.regime = Regime::saturating;
  } else {
    label.regime = Regime::oscillatory;
  }
  return label;
}

}  // namespace wgbragg::closed
