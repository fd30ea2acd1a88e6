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

#include "wgbragg/voids.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>
#include <random>

#include "wgbragg/closed_form.hpp"
#include "wgbragg/errors.hpp"
#include "wgbragg/parallel.hpp"

namespace wgbragg {

VoidObservable fixed_observable(double theta, double delta) {
  return {{theta, delta}, {theta, delta}};
}

VoidObservable modified_bragg_observable(std::size_t n_atoms, double filling, int order,
                                         const ModelParams& params, const PeakSearch& search) {
  if (!(filling > 0.0 && filling <= 1.0)) throw ValidationError("filling must lie in (0, 1]");
  PeakSearch positive = search;
  positive.branch = Branch::positive;
  const double beta = params.gamma_r();
  const PeakResult peak = maximize_over_detuning(
      [&](double d) { return closed::mb_envelope(n_atoms, d, beta, params.omega()); },
      search.half_width(n_atoms, params.beta()), true, positive);

  VoidObservable obs;
  obs.reference = {closed::modified_bragg_angle(order, peak.delta_max, params), peak.delta_max};
  obs.voids = {closed::modified_bragg_angle(order, peak.delta_max, params, params.a() / filling),
               peak.delta_max};
  return obs;
}

std::vector<bool> sample_occupation(std::size_t n_sites, std::size_t n_atoms, std::uint64_t seed,
                                    std::uint64_t index) {
  if (n_atoms > n_sites) throw ValidationError("more atoms than lattice sites");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 engine(seq);
  std::vector<std::size_t> sites(n_sites);
  std::iota(sites.begin(), sites.end(), std::size_t{0});
  std::vector<std::size_t> chosen;
  chosen.reserve(n_atoms);
  std::sample(sites.begin(), sites.end(), std::back_inserter(chosen), n_atoms, engine);
  std::vector<bool> mask(n_sites, false);
  for (std::size_t s : chosen) mask[s] = true;
  return mask;
}

namespace {

double rate_for(const ModelParams& geometry, Tier tier, const DrivePoint& drive) {
  if (tier == Tier::closed) {
    if (geometry.gamma_l() != 0.0) {
      throw ValidationError("closed tier requires fully directional coupling (gamma_l = 0)");
    }
    // Always the cascaded sum, so a full mask reproduces the reference bit for bit.
    const auto z = positions_from_mask(geometry);
    return closed::rate_cascaded(z, drive.theta, drive.delta, geometry);
  }
  return RateModel(geometry, tier).right_rate(drive.theta, drive.delta);
}

}  // namespace

VoidEnsembleResult void_ensemble(const ModelParams& params, std::size_t n_atoms,
                                 std::size_t n_configs, std::uint64_t seed,
                                 const VoidObservable& observable, Tier tier,
                                 std::size_t threads) {
  if (n_configs < 1) throw ValidationError("void ensemble needs at least one configuration");
  if (n_atoms < 1) throw ValidationError("void ensemble needs at least one atom");
  const std::size_t n_sites = params.n_sites();
  if (n_atoms > n_sites) throw ValidationError("more atoms than lattice sites");

  std::vector<double> rates(n_configs);
  parallel_for(n_configs, threads, [&](std::size_t k) {
    const ModelParams geometry =
        params.with_occupation(sample_occupation(n_sites, n_atoms, seed, k));
    rates[k] = rate_for(geometry, tier, observable.voids);
  });

  VoidEnsembleResult r;
  r.n_atoms = n_atoms;
  r.n_sites = n_sites;
  r.filling = static_cast<double>(n_atoms) / static_cast<double>(n_sites);
  r.n_configs = n_configs;
  r.seed = seed;
  r.tier = tier;
  r.observable = observable;

  // Shifted accumulation: identical samples give exactly their value and zero spread.
  const double pivot = rates.front();
  double shift_sum = 0.0;
  for (double v : rates) shift_sum += v - pivot;
  r.mean_rate = pivot + shift_sum / static_cast<double>(n_configs);
  double sq = 0.0;
  for (double v : rates) sq += (v - r.mean_rate) * (v - r.mean_rate);
  r.std_rate = std::sqrt(sq / static_cast<double>(n_configs));

  r.reference_rate = rate_for(params.with_chain(n_atoms), tier, observable.reference);
  r.robustness = r.reference_rate > 0.0 ? r.mean_rate / r.reference_rate : 0.0;
  return r;
}

}  // namespace wgbragg
