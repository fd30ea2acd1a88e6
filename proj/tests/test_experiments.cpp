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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "oracles.hpp"
#include "wgbragg/closed_form.hpp"
#include "wgbragg/errors.hpp"
#include "wgbragg/fit.hpp"
#include "wgbragg/peak.hpp"
#include "wgbragg/scan.hpp"
#include "wgbragg/steady_state.hpp"
#include "wgbragg/voids.hpp"

using namespace wgbragg;

namespace {

constexpr double kBeta = 0.0707;
constexpr double kOmega = 0.01;

ModelParams chiral(std::size_t n, double beta = kBeta) {
  return make_chain(n, 1.0, 1.2, rates_from_beta(beta, 1.0), kOmega);
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return g;
}

std::vector<std::size_t> local_maxima(const std::vector<double>& y) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) idx.push_back(i);
  }
  return idx;
}

double g0(double beta = kBeta) { return closed::single_atom_guided_rate(0.0, kOmega, beta); }

}  // namespace

TEST_CASE("find_peak recovers a parabola vertex") {
  testing::Gen gen(51);
  for (int i = 0; i < 100; ++i) {
    const double x0 = gen.uniform(-3, 3);
    const double c = gen.uniform(0.5, 5);
    const auto grid = linspace(-5, 5, 101);
    std::vector<double> y;
    for (double x : grid) y.push_back(7.0 - c * (x - x0) * (x - x0));
    const PeakResult p = find_peak(grid, y);
    CHECK(p.delta_max == doctest::Approx(x0).epsilon(1e-12).scale(1.0));
    CHECK(p.rate_max == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(!p.boundary);
    CHECK(std::abs(p.refinement_shift) <= p.grid_step);
  }
}

TEST_CASE("find_peak edge cases") {
  const auto grid = linspace(-1, 1, 21);
  std::vector<double> up;
  for (double x : grid) up.push_back(x);
  const PeakResult p = find_peak(grid, up);
  CHECK(p.boundary);
  CHECK(p.delta_max == 1.0);

  std::vector<double> twin;
  for (double x : grid) twin.push_back(std::exp(-20 * (x - 0.5) * (x - 0.5)) + 2 * std::exp(-20 * (x + 0.5) * (x + 0.5)));
  CHECK(find_peak(grid, twin, Branch::positive).delta_max == doctest::Approx(0.5).epsilon(0.02));
  CHECK(find_peak(grid, twin, Branch::negative).delta_max == doctest::Approx(-0.5).epsilon(0.02));
  CHECK(find_peak(grid, twin, Branch::global).delta_max < 0.0);

  std::vector<double> holes = twin;
  holes[15] = std::nan("");
  CHECK(std::isfinite(find_peak(grid, holes).rate_max));

  const std::vector<double> g2{0.0, 1.0};
  CHECK_THROWS_AS(find_peak(g2, g2), ValidationError);
  const auto neg = linspace(-2, -1, 5);
  CHECK_THROWS_AS(find_peak(neg, neg, Branch::positive), ValidationError);
}

TEST_CASE("peak of the spectrum at the geometric angle for N=400") {
  const ModelParams p = chiral(400);
  const double gb = closed::geometric_bragg_angle(2, p);
  const double w = PeakSearch{}.half_width(400, kBeta);
  const auto grid = linspace(-w, w, 2001);
  const ScanResult s = spectrum_scan(gb, grid, Tier::closed, p);
  const PeakResult peak = find_peak(grid, s.observable("rate_r"), Branch::positive);
  const double estimate = kBeta * 400 / kPi;
  CHECK(std::abs(peak.delta_max / estimate - 1.0) <= 0.10);
}

TEST_CASE("spectrum away from Bragg angles is a single resonance") {
  const ModelParams p = chiral(20);
  const auto grid = linspace(-10, 10, 401);
  // Halfway between the orders: k_eff a = 3 pi.
  const ScanResult s = spectrum_scan(std::acos(0.3), grid, Tier::closed, p);
  const auto& y = s.observable("rate_r");
  const auto maxima = local_maxima(y);
  REQUIRE(maxima.size() == 1);
  CHECK(std::abs(grid[maxima[0]]) <= 0.05 + 1e-12);
}

TEST_CASE("spectrum at the geometric angle for N=144 matches a brute-force search") {
  const ModelParams p = chiral(144);
  const double gb = closed::geometric_bragg_angle(2, p);
  const auto grid = linspace(-10, 10, 401);
  const ScanResult s = spectrum_scan(gb, grid, Tier::closed, p);
  const PeakResult pos = find_peak(grid, s.observable("rate_r"), Branch::positive);
  const PeakResult neg = find_peak(grid, s.observable("rate_r"), Branch::negative);
  const auto best = oracle::grid_max(
      [&](double d) { return oracle::direct_rate(144, gb, d, kBeta, kOmega, 1.0, 1.2); }, 0.0, 10.0, 100001);
  CHECK(std::abs(pos.delta_max - best.x) <= 0.05);
  CHECK(std::abs(neg.delta_max + best.x) <= 0.05);
  CHECK(best.x == doctest::Approx(3.692).epsilon(1e-3));
}

TEST_CASE("single-atom spectrum is the Lorentzian") {
  const ModelParams p = chiral(1);
  const auto grid = linspace(-5, 5, 101);
  for (Tier tier : {Tier::closed, Tier::linear}) {
    const ScanResult s = spectrum_scan(0.3, grid, tier, p);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(s.observable("rate_r")[i] ==
            doctest::Approx(closed::single_atom_guided_rate(grid[i], kOmega, kBeta)).epsilon(1e-13));
    }
  }
}

TEST_CASE("tiers agree") {
  const ModelParams p = chiral(40);
  const auto grid = linspace(-6, 6, 61);
  const ScanResult a = spectrum_scan(0.7, grid, Tier::closed, p);
  const ScanResult b = spectrum_scan(0.7, grid, Tier::linear, p);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(oracle::rel(a.observable("rate_r")[i], b.observable("rate_r")[i]) <= 1e-8);
  }
  const ModelParams two = make_chain(2, 1.0, 1.2, rates_from_beta(0.3, 0.4), 1e-3);
  const auto small = linspace(-2, 2, 5);
  const ScanResult c = spectrum_scan(0.7, small, Tier::linear, two);
  const ScanResult d = spectrum_scan(0.7, small, Tier::lindblad, two);
  for (std::size_t i = 0; i < small.size(); ++i) {
    CHECK(oracle::rel(c.observable("rate_r")[i], d.observable("rate_r")[i]) <= 1e-3);
  }
  CHECK_THROWS_AS(RateModel(make_chain(3, 1.0, 1.2, rates_from_beta(0.3, 0.4)), Tier::closed), ValidationError);
  CHECK_THROWS_AS(RateModel(chiral(7), Tier::lindblad), CapabilityError);
  CHECK(parse_tier("linear") == Tier::linear);
  CHECK_THROWS_AS(parse_tier("exact"), ValidationError);
}

TEST_CASE("scan metadata and validation") {
  const ModelParams p = chiral(5);
  const std::vector<double> grid{-1.0, 0.0, 1.0};
  const ScanResult s = spectrum_scan(0.5, grid, Tier::closed, p);
  CHECK(s.size() == 3);
  CHECK(s.axes.size() == 1);
  CHECK(s.axes[0].name == "delta");
  CHECK(s.params.n_sites == 5);
  CHECK(!s.version.empty());
  CHECK_THROWS_AS(s.observable("nope"), ValidationError);
  const std::vector<double> bad{0.0, 0.0, 1.0};
  CHECK_THROWS_AS(spectrum_scan(0.5, bad, Tier::closed, p), ValidationError);
  CHECK_THROWS_AS(spectrum_scan(4.0, grid, Tier::closed, p), ValidationError);
}

TEST_CASE("map ridge follows the modified Bragg angle") {
  const ModelParams p = chiral(100);
  const double gb = closed::geometric_bragg_angle(2, p);
  const auto thetas = linspace(gb - 0.1, gb + 0.1, 401);
  const auto deltas = linspace(-6, 6, 25);
  const ScanResult m = map_scan(thetas, deltas, Tier::closed, p);
  const auto& y = m.observable("rate_r");
  REQUIRE(y.size() == thetas.size() * deltas.size());
  CHECK(*std::min_element(y.begin(), y.end()) >= 0.0);
  const double step = thetas[1] - thetas[0];
  for (std::size_t j = 0; j < deltas.size(); ++j) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      if (y[i * deltas.size() + j] > y[best * deltas.size() + j]) best = i;
    }
    CHECK(std::abs(thetas[best] - closed::modified_bragg_angle(2, deltas[j], p)) <= step);
  }
  // Row-major with the angle outermost.
  CHECK(y[7 * deltas.size() + 3] == doctest::Approx(closed::rate_geometric_sum(100, thetas[7], deltas[3], p)));
}

TEST_CASE("map is symmetric in detuning at the geometric angle") {
  const ModelParams p = chiral(144);
  const double gb = closed::geometric_bragg_angle(2, p);
  const std::vector<double> thetas{gb};
  const auto deltas = linspace(-8, 8, 321);
  const ScanResult m = map_scan(thetas, deltas, Tier::closed, p);
  const auto& y = m.observable("rate_r");
  for (std::size_t j = 0; j < deltas.size(); ++j) {
    CHECK(oracle::rel(y[j], y[deltas.size() - 1 - j]) <= 1e-10);
  }
}

TEST_CASE("saturation at the geometric angle") {
  const std::vector<std::size_t> ns{2000, 4000};
  const ScanResult s = n_scaling(ScalingPolicy::at_gb(2), ns, Tier::closed, chiral(1));
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double sat = closed::gb_peak_asymptotics(ns[i], kBeta, kOmega).saturation_rate;
    CHECK(std::abs(s.observable("rate_max")[i] / sat - 1.0) <= 0.05);
    CHECK(s.observable("boundary_flag")[i] == 0.0);
  }
}

TEST_CASE("modified Bragg peak for N=150") {
  const std::vector<std::size_t> ns{150};
  const ScanResult closed_scan = n_scaling(ScalingPolicy::at_mb(2), ns, Tier::closed, chiral(1));
  const double ratio = closed_scan.observable("rate_max")[0] / g0();
  // Brute-force maximum of the full sum along the modified Bragg angle.
  CHECK(ratio == doctest::Approx(464.906).epsilon(1e-4));
  const ScanResult linear_scan = n_scaling(ScalingPolicy::at_mb(2), ns, Tier::linear, chiral(1));
  CHECK(oracle::rel(linear_scan.observable("rate_max")[0], closed_scan.observable("rate_max")[0]) <= 1e-6);
  CHECK(std::abs(linear_scan.observable("delta_max")[0]) ==
        doctest::Approx(std::abs(closed_scan.observable("delta_max")[0])).epsilon(1e-4));
}

TEST_CASE("fixed policy off the Bragg angle oscillates in N") {
  const ModelParams p = chiral(1);
  const double gb = closed::geometric_bragg_angle(2, p);
  std::vector<std::size_t> ns;
  for (std::size_t n = 1; n <= 300; ++n) ns.push_back(n);
  const ScanResult s = n_scaling(ScalingPolicy::fixed(gb - 0.05, 1.0), ns, Tier::closed, p);
  const auto& y = s.observable("rate_max");
  CHECK(local_maxima(y).size() >= 4);
  CHECK(s.observable("delta_max")[10] == 1.0);
  std::vector<double> nd(ns.begin(), ns.end());
  const OscillationEstimate o = oscillation_frequency(nd, y);
  const double alias = closed::alias_analysis(closed::phase_mismatch(gb - 0.05, 1.0, p)).b_alias;
  CHECK(o.oscillating);
  CHECK(std::abs(o.frequency - alias) <= o.bin_width);
}

TEST_CASE("property: modified >= geometric >= off-Bragg peak rates") {
  testing::Gen gen(52);
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = gen.integer(20, 300);
    const double beta = gen.uniform(0.01, 0.5);
    const ModelParams p = chiral(1, beta);
    const std::vector<std::size_t> ns{n};
    const double mb = n_scaling(ScalingPolicy::at_mb(2), ns, Tier::closed, p).observable("rate_max")[0];
    const double gb = n_scaling(ScalingPolicy::at_gb(2), ns, Tier::closed, p).observable("rate_max")[0];
    const ModelParams chain = chiral(n, beta);
    const double w = PeakSearch{}.half_width(n, beta);
    const auto off = oracle::grid_max([&](double d) { return closed::rate_geometric_sum(n, 1.2, d, chain); },
                                      -w, w, 4001);
    CHECK(mb >= gb * (1 - 1e-12));
    CHECK(gb >= off.value);
  }
}

TEST_CASE("power-law exponents along the modified Bragg angle") {
  std::vector<std::size_t> ns;
  for (std::size_t n = 50; n <= 500; n += 10) ns.push_back(n);
  const ScanResult s = n_scaling(ScalingPolicy::at_mb(2), ns, Tier::closed, chiral(1));
  std::vector<double> nd(ns.begin(), ns.end());
  std::vector<double> d;
  for (double v : s.observable("delta_max")) d.push_back(std::abs(v));
  const PowerLawFit fd = fit_power_law(nd, d);
  const PowerLawFit fr = fit_power_law(nd, s.observable("rate_max"));
  CHECK(std::abs(fd.exponent - closed::kMbDetuningExponent) <= 0.1);
  CHECK(std::abs(fr.exponent - 1.0) <= 0.1);
}

TEST_CASE("boundary flag when the window is too narrow") {
  PeakSearch narrow;
  narrow.min_half_width = 0.2;
  narrow.width_per_atom = 0.0;
  const std::vector<std::size_t> ns{144};
  const ScanResult s = n_scaling(ScalingPolicy::at_gb(2), ns, Tier::closed, chiral(1), 1, narrow);
  CHECK(s.observable("boundary_flag")[0] == 1.0);
  CHECK_THROWS_AS(n_scaling(ScalingPolicy::at_gb(2), std::vector<std::size_t>{}, Tier::closed, chiral(1)),
                  ValidationError);
  CHECK_THROWS_AS(n_scaling(ScalingPolicy::at_gb(2), std::vector<std::size_t>{7}, Tier::lindblad, chiral(1)),
                  CapabilityError);
}

TEST_CASE("fit_power_law") {
  std::vector<double> n, y;
  for (double v = 10; v <= 100; v += 10) {
    n.push_back(v);
    y.push_back(3 * v * v);
  }
  const PowerLawFit f = fit_power_law(n, y);
  CHECK(std::abs(f.exponent - 2.0) <= 1e-12);
  CHECK(f.prefactor == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0));
  const std::vector<double> three{1, 2, 3};
  CHECK_THROWS_AS(fit_power_law(three, three), ValidationError);
  std::vector<double> bad = y;
  bad[2] = -1.0;
  CHECK_THROWS_AS(fit_power_law(n, bad), ValidationError);
}

TEST_CASE("oscillation frequency of a synthetic signal") {
  std::vector<double> n, y;
  for (int k = 1; k <= 300; ++k) {
    n.push_back(k);
    y.push_back(5.0 - 3.0 * std::pow(0.99, 2.0 * k) + 0.4 * std::cos(0.3 * k + 0.2));
  }
  const OscillationEstimate o = oscillation_frequency(n, y);
  CHECK(o.oscillating);
  CHECK(std::abs(o.frequency - 0.3) <= kTwoPi / 300.0);
  CHECK(o.amplitude == doctest::Approx(0.4).epsilon(0.1));

  const std::vector<double> flat(n.size(), 2.0);
  CHECK(!oscillation_frequency(n, flat).oscillating);
  const std::vector<double> few{1, 2, 3};
  CHECK_THROWS_AS(oscillation_frequency(few, few), ValidationError);
}

TEST_CASE("perfect-chain oscillation frequency is the alias of b") {
  const ModelParams p = chiral(1);
  const double theta = closed::geometric_bragg_angle(2, p) + 0.004;
  std::vector<double> n, y;
  for (std::size_t k = 1; k <= 400; ++k) {
    n.push_back(static_cast<double>(k));
    y.push_back(closed::rate_geometric_sum(k, theta, -2.0, p));
  }
  const OscillationEstimate o = oscillation_frequency(n, y);
  const double alias = closed::alias_analysis(closed::phase_mismatch(theta, -2.0, p)).b_alias;
  CHECK(std::abs(o.frequency - alias) <= o.bin_width);
}

TEST_CASE("occupation sampling") {
  const auto a = sample_occupation(100, 50, 7, 3);
  CHECK(std::count(a.begin(), a.end(), true) == 50);
  CHECK(a == sample_occupation(100, 50, 7, 3));
  CHECK(a != sample_occupation(100, 50, 7, 4));
  CHECK(a != sample_occupation(100, 50, 8, 3));
  std::vector<int> hits(20, 0);
  for (std::uint64_t k = 0; k < 4000; ++k) {
    const auto m = sample_occupation(20, 5, 99, k);
    for (std::size_t s = 0; s < 20; ++s) hits[s] += m[s] ? 1 : 0;
  }
  // Each site is filled with probability 1/4; binomial sd is about 27.
  for (int h : hits) CHECK(std::abs(h - 1000) < 150);
  CHECK_THROWS_AS(sample_occupation(4, 5, 1, 0), ValidationError);
}

TEST_CASE("full filling gives unit robustness") {
  const ModelParams lattice = chiral(50);
  const VoidObservable obs = modified_bragg_observable(50, 1.0, 2, lattice);
  const VoidEnsembleResult r = void_ensemble(lattice, 50, 20, 7, obs, Tier::closed);
  CHECK(r.robustness == 1.0);
  CHECK(r.std_rate == 0.0);
  CHECK(r.mean_rate == r.reference_rate);
  CHECK(r.filling == 1.0);
}

TEST_CASE("void robustness falls with stronger coupling") {
  auto robustness = [](double beta) {
    const ModelParams lattice = chiral(100, beta);
    const VoidObservable obs = modified_bragg_observable(50, 0.5, 2, lattice);
    return void_ensemble(lattice, 50, 200, 7, obs, Tier::closed);
  };
  const VoidEnsembleResult weak = robustness(0.05);
  const VoidEnsembleResult strong = robustness(0.9);
  CHECK(weak.robustness > 0.9);
  CHECK(weak.robustness - strong.robustness >= 0.2);
  CHECK(weak.std_rate > 0.0);
  CHECK(weak.n_sites == 100);
  CHECK(weak.n_configs == 200);
}

TEST_CASE("void ensembles are deterministic and thread-count independent") {
  const ModelParams lattice = chiral(100);
  const VoidObservable obs = modified_bragg_observable(50, 0.5, 2, lattice);
  const VoidEnsembleResult a = void_ensemble(lattice, 50, 300, 7, obs, Tier::closed, 1);
  const VoidEnsembleResult b = void_ensemble(lattice, 50, 300, 7, obs, Tier::closed, 1);
  const VoidEnsembleResult c = void_ensemble(lattice, 50, 300, 7, obs, Tier::closed, 3);
  CHECK(a.mean_rate == b.mean_rate);
  CHECK(a.std_rate == b.std_rate);
  CHECK(a.mean_rate == c.mean_rate);
  CHECK(a.std_rate == c.std_rate);
  const VoidEnsembleResult d = void_ensemble(lattice, 50, 300, 8, obs, Tier::closed, 1);
  CHECK(a.mean_rate != d.mean_rate);
}

TEST_CASE("void ensemble tiers agree for chiral coupling") {
  const ModelParams lattice = chiral(40);
  const VoidObservable obs = fixed_observable(0.7, -1.0);
  const VoidEnsembleResult a = void_ensemble(lattice, 25, 10, 3, obs, Tier::closed);
  const VoidEnsembleResult b = void_ensemble(lattice, 25, 10, 3, obs, Tier::linear);
  CHECK(oracle::rel(a.mean_rate, b.mean_rate) <= 1e-8);
  CHECK(oracle::rel(a.reference_rate, b.reference_rate) <= 1e-8);
  CHECK_THROWS_AS(void_ensemble(lattice, 50, 10, 3, obs, Tier::closed), ValidationError);
  CHECK_THROWS_AS(void_ensemble(lattice, 25, 0, 3, obs, Tier::closed), ValidationError);
}

TEST_CASE("scans are thread-count independent") {
  const ModelParams p = chiral(60);
  const auto grid = linspace(-5, 5, 101);
  const ScanResult a = spectrum_scan(0.66, grid, Tier::linear, p, 1);
  const ScanResult b = spectrum_scan(0.66, grid, Tier::linear, p, 4);
  CHECK(a.observable("rate_r") == b.observable("rate_r"));
}
