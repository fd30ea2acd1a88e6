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

// Acceptance suite: one pass/fail line per criterion.
//
//   wgbragg_acceptance            run every criterion
//   wgbragg_acceptance 3 7        run the listed criteria

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "wgbragg/closed_form.hpp"
#include "wgbragg/fit.hpp"
#include "wgbragg/lindblad.hpp"
#include "wgbragg/parallel.hpp"
#include "wgbragg/peak.hpp"
#include "wgbragg/scan.hpp"
#include "wgbragg/steady_state.hpp"
#include "wgbragg/voids.hpp"

using namespace wgbragg;

namespace {

constexpr double kBeta = 0.0707;
constexpr double kOmega = 0.01;

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Verdict()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

ModelParams chiral(std::size_t n, double beta = kBeta) {
  return make_chain(n, 1.0, 1.2, rates_from_beta(beta, 1.0), kOmega);
}

std::vector<std::size_t> range(std::size_t lo, std::size_t hi, std::size_t step) {
  std::vector<std::size_t> v;
  for (std::size_t n = lo; n <= hi; n += step) v.push_back(n);
  return v;
}

std::vector<double> as_double(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

std::vector<double> abs_values(const std::vector<double>& v) {
  std::vector<double> out;
  for (double x : v) out.push_back(std::abs(x));
  return out;
}

Verdict c1_sums() {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(u(rng) * 300) % 300;
    const double theta = kPi * u(rng);
    const double delta = -20.0 + 40.0 * u(rng);
    const double beta = 1.0 - u(rng);
    const ModelParams p = chiral(1, beta);
    worst = std::max(worst, rel(closed::rate_direct_sum(n, theta, delta, p),
                                closed::rate_geometric_sum(n, theta, delta, p)));
  }
  return {worst <= 1e-10, fmt("max relative difference %.2e over 10000 draws (limit 1e-10)", worst)};
}

Verdict c2_convention() {
  std::mt19937_64 rng(1002);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(u(rng) * 100) % 100;
    const double theta = kPi * u(rng);
    const double delta = -20.0 + 40.0 * u(rng);
    const double beta = 1.0 - u(rng);
    const ModelParams p = chiral(n, beta);
    const double linear = SteadyStateSolver(p).right_rate(theta, delta);
    worst = std::max(worst, rel(linear, closed::rate_direct_sum(n, theta, delta, p)));
  }
  return {worst <= 1e-8, fmt("max relative difference %.2e over 1000 draws (limit 1e-8)", worst)};
}

Verdict c3_oracle() {
  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_gap = 0.0;
  int above = 0;
  double slope_lo = 1e300;
  double slope_hi = -1e300;
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int i = 0; i < 50; ++i) {
      const double theta = kPi * u(rng);
      const double delta = -5.0 + 10.0 * u(rng);
      const double beta = 1.0 - u(rng);
      const double d = -1.0 + 2.0 * u(rng);
      const ModelParams base = make_chain(n, 1.0, 1.2, rates_from_beta(beta, d), 1e-3).with_drive(theta, delta);
      double gap[2];
      int k = 0;
      for (double omega : {1e-2, 1e-3}) {
        const ModelParams p = base.with_omega(omega);
        const double linear = SteadyStateSolver(p).right_rate(theta, delta);
        gap[k++] = std::abs(lindblad::right_rate_exact(p) - linear) / linear;
      }
      worst_gap = std::max(worst_gap, gap[1]);
      above += gap[1] > 1e-3 ? 1 : 0;
      const double slope = std::log10(gap[0] / gap[1]);
      slope_lo = std::min(slope_lo, slope);
      slope_hi = std::max(slope_hi, slope);
    }
  }
  const bool pass = worst_gap <= 1e-3 && slope_lo >= 1.8 && slope_hi <= 2.2;
  return {pass, fmt("N=1..3, 50 draws each: max gap %.2e at Omega=1e-3 (limit 1e-3, %d of 150 above), "
                    "log-log slopes in [%.3f, %.3f] (limit 2 +- 0.2)",
                    worst_gap, above, slope_lo, slope_hi)};
}

Verdict c4_gb_detuning() {
  const std::vector<std::size_t> ns{100, 200, 400, 1000};
  const ScanResult s = n_scaling(ScalingPolicy::at_gb(2), ns, Tier::closed, chiral(1));
  bool pass = true;
  std::string detail = "|Delta_max| / (beta N / pi) - 1:";
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double estimate = kBeta * static_cast<double>(ns[i]) / kPi;
    const double dev = std::abs(s.observable("delta_max")[i]) / estimate - 1.0;
    pass = pass && std::abs(dev) <= 0.10;
    detail += fmt(" N=%zu %+.3f", ns[i], dev);
  }
  return {pass, detail + " (limit 0.10)"};
}

Verdict c5_gb_rate() {
  const std::vector<std::size_t> ns{200, 300, 500, 1000, 2000, 5000, 10000};
  const ScanResult s = n_scaling(ScalingPolicy::at_gb(2), ns, Tier::closed, chiral(1));
  bool pass = true;
  double worst_peak = 0.0;
  double worst_sat = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const closed::GbAsymptotics g = closed::gb_peak_asymptotics(ns[i], kBeta, kOmega);
    const double rate = s.observable("rate_max")[i];
    const double dev = std::abs(rate / g.rate_max - 1.0);
    worst_peak = std::max(worst_peak, dev);
    pass = pass && dev <= 0.10;
    if (ns[i] >= 2000) {
      const double sat = std::abs(rate / g.saturation_rate - 1.0);
      worst_sat = std::max(worst_sat, sat);
      pass = pass && sat <= 0.05;
    }
  }
  return {pass, fmt("N=200..10000: max deviation from the peak estimate %.3f (limit 0.10), "
                    "N>=2000 from saturation %.3f (limit 0.05)",
                    worst_peak, worst_sat)};
}

Verdict c6_mb_exponents() {
  const auto ns = range(50, 500, 10);
  const ScanResult s = n_scaling(ScalingPolicy::at_mb(2), ns, Tier::closed, chiral(1));
  const PowerLawFit fd = fit_power_law(as_double(ns), abs_values(s.observable("delta_max")));
  const PowerLawFit fr = fit_power_law(as_double(ns), s.observable("rate_max"));
  const bool pass = std::abs(fd.exponent - 0.5) <= 0.1 && std::abs(fr.exponent - 1.0) <= 0.1;
  return {pass, fmt("exponents %.3f (Delta_max, 0.5 +- 0.1) and %.3f (rate_max, 1.0 +- 0.1)", fd.exponent,
                    fr.exponent)};
}

Verdict c7_headline() {
  const std::vector<std::size_t> ns{150};
  const ScanResult s = n_scaling(ScalingPolicy::at_mb(2), ns, Tier::closed, chiral(1));
  const double ratio = s.observable("rate_max")[0] / closed::single_atom_guided_rate(0.0, kOmega, kBeta);
  return {ratio >= 480.0 && ratio <= 720.0,
          fmt("N=150 peak rate / single-atom rate = %.3f at Delta = %.4f (required [480, 720])", ratio,
              s.observable("delta_max")[0])};
}

Verdict c8_directionality() {
  const auto ns = range(50, 300, 25);
  const std::size_t threads = default_thread_count();
  struct Row {
    double d;
    double exp_delta;
    double exp_rate;
    double delta_100;
  };
  std::vector<Row> rows;
  for (double d : {0.0, 0.85, 1.0}) {
    const ModelParams p = make_chain(1, 1.0, 1.2, rates_from_right(kBeta, d), kOmega);
    const ScanResult s = n_scaling(ScalingPolicy::at_mb(2), ns, Tier::linear, p, threads);
    const auto delta = abs_values(s.observable("delta_max"));
    rows.push_back({d, fit_power_law(as_double(ns), delta).exponent,
                    fit_power_law(as_double(ns), s.observable("rate_max")).exponent, delta[2]});
  }
  double spread_d = 0.0;
  double spread_r = 0.0;
  for (const auto& a : rows) {
    for (const auto& b : rows) {
      spread_d = std::max(spread_d, std::abs(a.exp_delta - b.exp_delta));
      spread_r = std::max(spread_r, std::abs(a.exp_rate - b.exp_rate));
    }
  }
  const double delta_dev = std::abs(rows[0].delta_100 / rows[2].delta_100 - 1.0);
  std::string detail;
  for (const auto& r : rows) detail += fmt("D=%.2f: %.3f/%.3f; ", r.d, r.exp_delta, r.exp_rate);
  detail += fmt("pairwise spread %.3f/%.3f (limit 0.1); Delta_max at N=100 D=0 vs D=1 differs by %.3f "
                "(limit 0.15)",
                spread_d, spread_r, delta_dev);
  return {spread_d <= 0.1 && spread_r <= 0.1 && delta_dev <= 0.15, detail};
}

Verdict c9_robustness() {
  constexpr std::size_t kAtoms = 50;
  constexpr std::uint64_t kSeed = 20201;
  auto ensemble = [&](double beta, std::size_t threads) {
    const ModelParams lattice = chiral(2 * kAtoms, beta);
    const VoidObservable obs = modified_bragg_observable(kAtoms, 0.5, 2, lattice);
    return void_ensemble(lattice, kAtoms, 1000, kSeed, obs, Tier::closed, threads);
  };
  const VoidEnsembleResult weak = ensemble(0.05, 1);
  const VoidEnsembleResult strong = ensemble(0.9, 1);
  const VoidEnsembleResult weak_again = ensemble(0.05, 1);
  const VoidEnsembleResult weak_threads = ensemble(0.05, 3);
  const bool reproducible = weak.mean_rate == weak_again.mean_rate && weak.std_rate == weak_again.std_rate &&
                            weak.mean_rate == weak_threads.mean_rate && weak.std_rate == weak_threads.std_rate;
  const bool std_ok = std::isfinite(weak.std_rate) && std::isfinite(strong.std_rate);
  const double gap = weak.robustness - strong.robustness;
  return {gap >= 0.2 && reproducible && std_ok,
          fmt("R(beta=0.05)=%.4f (std %.3e), R(beta=0.9)=%.4f (std %.3e), difference %.4f (limit >= 0.2), "
              "bit-reproducible across runs and thread counts: %s",
              weak.robustness, weak.std_rate, strong.robustness, strong.std_rate, gap,
              reproducible ? "yes" : "no")};
}

Verdict c10_oscillations() {
  constexpr double kEta = 0.5;
  constexpr double kDelta = -2.0;
  const ModelParams p = chiral(1);
  const double theta = closed::geometric_bragg_angle(2, p) + 0.004;
  const std::size_t threads = default_thread_count();
  std::vector<double> ns;
  std::vector<double> perfect;
  std::vector<double> voids;
  const VoidObservable obs = fixed_observable(theta, kDelta);
  for (std::size_t n = 1; n <= 400; ++n) {
    ns.push_back(static_cast<double>(n));
    const ModelParams lattice = chiral(2 * n);
    const VoidEnsembleResult r = void_ensemble(lattice, n, 1000, 20201, obs, Tier::closed, threads);
    voids.push_back(r.mean_rate);
    perfect.push_back(r.reference_rate);
  }
  const OscillationEstimate op = oscillation_frequency(ns, perfect);
  const OscillationEstimate ov = oscillation_frequency(ns, voids);
  const Complex t = closed::transmission_coefficient(kDelta, kBeta);
  const double k_eff = closed::effective_wavenumber(theta, p.n_eff());
  const double b = closed::phase_mismatch(theta, kDelta, p);
  const double b_voids = std::arg(t) - k_eff * p.a() / kEta;
  const double alias = closed::alias_analysis(b).b_alias;
  const double alias_voids = closed::alias_analysis(b_voids).b_alias;
  const bool pass = std::abs(op.frequency - alias) <= op.bin_width &&
                    std::abs(ov.frequency - alias_voids) <= ov.bin_width && ov.amplitude < op.amplitude;
  return {pass, fmt("perfect chain %.5f vs alias %.5f, voids %.5f vs alias %.5f (bin %.5f); "
                    "amplitude voids %.3e < perfect %.3e",
                    op.frequency, alias, ov.frequency, alias_voids, op.bin_width, ov.amplitude, op.amplitude)};
}

Verdict c11_split() {
  std::vector<double> grid;
  for (int i = -400; i <= 400; ++i) grid.push_back(0.05 * i);
  const ModelParams p = chiral(144);
  const double gb = closed::geometric_bragg_angle(2, p);
  const ScanResult s = spectrum_scan(gb, grid, Tier::closed, p);
  const auto& y = s.observable("rate_r");
  double asym = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) asym = std::max(asym, rel(y[i], y[y.size() - 1 - i]));
  std::mt19937_64 rng(1011);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(u(rng) * 400) % 400;
    const ModelParams q = chiral(n, 1.0 - u(rng));
    const double d = 20.0 * u(rng);
    asym = std::max(asym, rel(closed::rate_geometric_sum(n, gb, d, q), closed::rate_geometric_sum(n, gb, -d, q)));
  }
  std::vector<double> maxima;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] > y[i + 1] && grid[i] != 0.0) maxima.push_back(grid[i]);
  }
  std::string where;
  for (double m : maxima) where += fmt(" %.2f", m);
  return {asym <= 1e-10 && maxima.size() == 2,
          fmt("max asymmetry %.2e (limit 1e-10); N=144 off-resonance local maxima on step 0.05: %zu at", asym,
              maxima.size()) +
              where + " (required exactly 2)"};
}

Verdict c12_energy() {
  std::mt19937_64 rng(1012);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    RawParams r;
    r.n_sites = 1 + static_cast<std::size_t>(u(rng) * 100) % 100;
    r.a = 0.2 + 1.8 * u(rng);
    r.n_eff = 1.0 + 0.5 * u(rng);
    r.omega = 1e-3 + 0.1 * u(rng);
    r.delta = -20 + 40 * u(rng);
    r.theta = kPi * u(rng);
    const ChannelRates c = rates_from_beta(1.0 - u(rng), -1.0 + 2.0 * u(rng));
    r.gamma_r = c.gamma_r;
    r.gamma_l = c.gamma_l;
    r.gamma_u = c.gamma_u;
    const ModelParams p = make_params(r);
    const CouplingMatrices m = guided_coupling_matrices(p);
    const AmplitudeVector x = solve_amplitudes(assemble_system(m, p), p.omega());
    worst = std::max(worst, energy_balance_residual(x, m, p));
  }
  return {worst <= 1e-10, fmt("max residual %.2e over 1000 instances (limit 1e-10)", worst)};
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "closed-form sums agree", 5, c1_sums},
      {2, "chiral solve reproduces the closed form", 30, c2_convention},
      {3, "master equation agrees with the weak-drive model", 120, c3_oracle},
      {4, "peak detuning at the geometric angle", 10, c4_gb_detuning},
      {5, "peak rate and saturation at the geometric angle", 10, c5_gb_rate},
      {6, "modified Bragg scaling exponents", 10, c6_mb_exponents},
      {7, "modified Bragg peak rate for N=150", 5, c7_headline},
      {8, "exponents independent of directionality", 300, c8_directionality},
      {9, "robustness against voids", 60, c9_robustness},
      {10, "oscillation frequencies with voids", 120, c10_oscillations},
      {11, "symmetric split at the geometric angle", 5, c11_split},
      {12, "energy balance", 30, c12_energy},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    char* end = nullptr;
    const long id = std::strtol(argv[i], &end, 10);
    if (end == argv[i] || *end != '\0' || id < 1 || id > static_cast<long>(criteria().size())) {
      std::fprintf(stderr, "usage: %s [criterion 1-%zu ...]\n", argv[0], criteria().size());
      return 2;
    }
    selected.push_back(static_cast<int>(id));
  }
  int failures = 0;
  for (const Criterion& c : criteria()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.budget_seconds;
    const bool pass = v.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("[%s] C%-2d %s: %s; %.2f s (limit %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.title,
                v.detail.c_str(), seconds, c.budget_seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
