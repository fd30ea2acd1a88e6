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

#include "wgbragg/fit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "wgbragg/errors.hpp"
#include "wgbragg/model.hpp"

namespace wgbragg {

PowerLawFit fit_power_law(std::span<const double> n, std::span<const double> y) {
  if (n.size() != y.size()) throw ValidationError("power-law fit: length mismatch");
  if (n.size() < 4) throw ValidationError("power-law fit needs at least 4 points");
  const auto count = static_cast<double>(n.size());
  std::vector<double> lx(n.size()), ly(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(n[i] > 0.0) || !(y[i] > 0.0)) {
      throw ValidationError("power-law fit needs positive abscissae and values");
    }
    lx[i] = std::log(n[i]);
    ly[i] = std::log(y[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / count;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("power-law fit needs distinct abscissae");

  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.prefactor = std::exp(my - fit.exponent * mx);
  double ss_res = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (my + fit.exponent * (lx[i] - mx));
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

namespace {

struct TrendFit {
  double ssr = 0.0;
  double offset = 0.0;
  double scale = 0.0;
};

// Least squares of y against [1, ratio^(2n)].
TrendFit fit_trend(std::span<const double> n, std::span<const double> y, double ratio) {
  const double log_r2 = 2.0 * std::log(ratio);
  double s1 = 0.0, sf = 0.0, sff = 0.0, sy = 0.0, sfy = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double f = std::exp(log_r2 * n[i]);
    s1 += 1.0;
    sf += f;
    sff += f * f;
    sy += y[i];
    sfy += f * y[i];
  }
  TrendFit t;
  const double det = s1 * sff - sf * sf;
  if (std::abs(det) <= 1e-300) {
    t.offset = sy / s1;
  } else {
    t.offset = (sff * sy - sf * sfy) / det;
    t.scale = (s1 * sfy - sf * sy) / det;
  }
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double r = y[i] - t.offset - t.scale * std::exp(log_r2 * n[i]);
    t.ssr += r * r;
  }
  return t;
}

double periodogram(std::span<const double> n, std::span<const double> signal, double omega) {
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) s += signal[i] * std::polar(1.0, -omega * n[i]);
  return std::norm(s);
}

}  // namespace

OscillationEstimate oscillation_frequency(std::span<const double> n, std::span<const double> rates) {
  if (n.size() != rates.size()) throw ValidationError("oscillation: length mismatch");
  if (n.size() < 16) throw ValidationError("oscillation analysis needs at least 16 samples");
  for (std::size_t i = 1; i < n.size(); ++i) {
    if (n[i] - n[i - 1] != 1.0) {
      throw ValidationError("oscillation analysis needs consecutive integer N");
    }
  }
  const std::size_t count = n.size();
  const double mean = std::accumulate(rates.begin(), rates.end(), 0.0) / double(count);

  // Decay ratio r = exp(-kappa), scanning kappa on a log grid then refining.
  constexpr int kScan = 400;
  const double kappa_lo = std::log(1e-5), kappa_hi = std::log(5.0);
  double best_kappa = 0.0;
  double best_ssr = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kScan; ++k) {
    const double kappa = std::exp(kappa_lo + (kappa_hi - kappa_lo) * k / (kScan - 1));
    const double ssr = fit_trend(n, rates, std::exp(-kappa)).ssr;
    if (ssr < best_ssr) {
      best_ssr = ssr;
      best_kappa = kappa;
    }
  }
  const double step = (kappa_hi - kappa_lo) / (kScan - 1);
  const auto refined = boost::math::tools::brent_find_minima(
      [&](double log_kappa) { return fit_trend(n, rates, std::exp(-std::exp(log_kappa))).ssr; },
      std::log(best_kappa) - step, std::log(best_kappa) + step, 40);
  const double ratio = std::exp(-std::exp(refined.first));
  const TrendFit trend = fit_trend(n, rates, ratio);

  std::vector<double> residual(count);
  for (std::size_t i = 0; i < count; ++i) {
    residual[i] = rates[i] - trend.offset - trend.scale * std::pow(ratio, 2.0 * n[i]);
  }
  const double rmean = std::accumulate(residual.begin(), residual.end(), 0.0) / double(count);
  double power = 0.0;
  for (auto& r : residual) {
    r -= rmean;
    power += r * r;
  }

  OscillationEstimate est;
  est.bin_width = kTwoPi / double(count);
  est.trend_ratio = ratio;
  est.amplitude = std::sqrt(2.0 * power / double(count));
  est.oscillating = est.amplitude >= 1e-12 * std::abs(mean);
  if (!est.oscillating) return est;

  // Periodogram on a grid 32x finer than the natural resolution, then
  // local refinement.
  const std::size_t grid = 32 * count;
  const double dw = kPi / double(grid);
  std::size_t best = 0;
  double best_power = -1.0;
  for (std::size_t k = 0; k <= grid; ++k) {
    const double p = periodogram(n, residual, dw * double(k));
    if (p > best_power) {
      best_power = p;
      best = k;
    }
  }
  const double lo = std::max(0.0, dw * (double(best) - 1.0));
  const double hi = std::min(kPi, dw * (double(best) + 1.0));
  const auto peak = boost::math::tools::brent_find_minima(
      [&](double w) { return -periodogram(n, residual, w); }, lo, hi, 40);
  est.frequency = -peak.second >= best_power ? peak.first : dw * double(best);
  return est;
}

}  // namespace wgbragg
