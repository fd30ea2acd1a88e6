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

#include "wgbragg/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "wgbragg/closed_form.hpp"
#include "wgbragg/errors.hpp"
#include "wgbragg/lindblad.hpp"
#include "wgbragg/parallel.hpp"
#include "wgbragg/steady_state.hpp"
#include "wgbragg/version.hpp"

namespace wgbragg {

std::string_view to_string(Tier tier) {
  switch (tier) {
    case Tier::closed: return "closed";
    case Tier::linear: return "linear";
    case Tier::lindblad: return "lindblad";
  }
  return "unknown";
}

Tier parse_tier(std::string_view name) {
  if (name == "closed") return Tier::closed;
  if (name == "linear") return Tier::linear;
  if (name == "lindblad") return Tier::lindblad;
  throw ValidationError("unknown tier '" + std::string(name) + "' (closed, linear, lindblad)");
}

struct RateModel::Impl {
  std::vector<double> positions;
  std::unique_ptr<SteadyStateSolver> solver;
  std::unique_ptr<CouplingMatrices> matrices;
};

RateModel::RateModel(const ModelParams& params, Tier tier)
    : params_(params), tier_(tier), impl_(std::make_unique<Impl>()) {
  switch (tier) {
    case Tier::closed:
      if (params.gamma_l() != 0.0) {
        throw ValidationError("closed tier requires fully directional coupling (gamma_l = 0)");
      }
      impl_->positions = positions_from_mask(params);
      break;
    case Tier::linear:
      impl_->solver = std::make_unique<SteadyStateSolver>(params);
      break;
    case Tier::lindblad:
      if (params.n_atoms() > lindblad::kMaxAtoms) {
        throw CapabilityError("lindblad tier is limited to " + std::to_string(lindblad::kMaxAtoms) +
                              " atoms (requested " + std::to_string(params.n_atoms()) + ")");
      }
      impl_->matrices = std::make_unique<CouplingMatrices>(guided_coupling_matrices(params));
      break;
  }
}

RateModel::~RateModel() = default;
RateModel::RateModel(RateModel&&) noexcept = default;
RateModel& RateModel::operator=(RateModel&&) noexcept = default;

double RateModel::right_rate(double theta, double delta) const {
  if (!(theta >= 0.0 && theta <= kPi)) throw ValidationError("theta must lie in [0, pi]");
  switch (tier_) {
    case Tier::closed:
      if (params_.fully_occupied()) {
        return closed::rate_geometric_sum(params_.n_atoms(), theta, delta, params_);
      }
      return closed::rate_cascaded(impl_->positions, theta, delta, params_);
    case Tier::linear:
      return impl_->solver->right_rate(theta, delta);
    case Tier::lindblad: {
      const ModelParams p = params_.with_drive(theta, delta);
      const auto state = lindblad::steady_density(lindblad::build_liouvillian(p, *impl_->matrices));
      return lindblad::guided_rate_exact(state, impl_->matrices->gamma_right);
    }
  }
  return 0.0;
}

std::size_t ScanResult::size() const {
  std::size_t n = 1;
  for (const auto& axis : axes) n *= axis.values.size();
  return n;
}

const std::vector<double>& ScanResult::observable(std::string_view name) const {
  for (std::size_t i = 0; i < observable_names.size(); ++i) {
    if (observable_names[i] == name) return observables[i];
  }
  throw ValidationError("scan has no observable '" + std::string(name) + "'");
}

namespace {

void require_grid(std::span<const double> grid, const char* name) {
  if (grid.empty()) throw ValidationError(std::string(name) + " grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw ValidationError(std::string(name) + " grid must be strictly ascending");
    }
  }
}

ScanResult make_result(Tier tier, const ModelParams& params) {
  ScanResult r;
  r.tier = tier;
  r.params = params.raw();
  r.version = kVersion;
  return r;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = lo;
    return v;
  }
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return v;
}

}  // namespace

ScanResult spectrum_scan(double theta, std::span<const double> delta_grid, Tier tier,
                         const ModelParams& params, std::size_t threads) {
  require_grid(delta_grid, "delta");
  const RateModel model(params, tier);
  ScanResult r = make_result(tier, params.with_drive(theta, params.delta()));
  r.axes.push_back({"delta", {delta_grid.begin(), delta_grid.end()}});
  r.observable_names = {"rate_r"};
  std::vector<double> rates(delta_grid.size());
  parallel_for(delta_grid.size(), threads,
               [&](std::size_t i) { rates[i] = model.right_rate(theta, delta_grid[i]); });
  r.observables.push_back(std::move(rates));
  return r;
}

ScanResult map_scan(std::span<const double> theta_grid, std::span<const double> delta_grid,
                    Tier tier, const ModelParams& params, std::size_t threads) {
  require_grid(theta_grid, "theta");
  require_grid(delta_grid, "delta");
  const RateModel model(params, tier);
  ScanResult r = make_result(tier, params);
  r.axes.push_back({"theta", {theta_grid.begin(), theta_grid.end()}});
  r.axes.push_back({"delta", {delta_grid.begin(), delta_grid.end()}});
  r.observable_names = {"rate_r"};
  const std::size_t nd = delta_grid.size();
  std::vector<double> rates(theta_grid.size() * nd);
  parallel_for(rates.size(), threads, [&](std::size_t k) {
    rates[k] = model.right_rate(theta_grid[k / nd], delta_grid[k % nd]);
  });
  r.observables.push_back(std::move(rates));
  return r;
}

double PeakSearch::half_width(std::size_t n_atoms, double beta) const {
  return std::max(min_half_width, width_per_atom * beta * static_cast<double>(n_atoms));
}

PeakResult maximize_over_detuning(const std::function<double(double)>& f, double half_width,
                                  bool closed, const PeakSearch& search) {
  const std::size_t points = closed ? search.grid_points : search.coarse_points;
  const std::vector<double> grid = linspace(-half_width, half_width, points);
  std::vector<double> values(points);
  for (std::size_t i = 0; i < points; ++i) values[i] = f(grid[i]);

  PeakResult peak = find_peak(grid, values, search.branch);
  if (peak.boundary) return peak;

  const double grid_delta = grid[peak.grid_index];
  const double grid_value = values[peak.grid_index];
  if (closed) {
    const double refined = f(peak.delta_max);
    if (refined >= grid_value) {
      peak.rate_max = refined;
    } else {
      peak.delta_max = grid_delta;
      peak.rate_max = grid_value;
      peak.refinement_shift = 0.0;
    }
    return peak;
  }

  auto negated = [&](double d) {
    const double v = f(d);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : -v;
  };
  const auto best = boost::math::tools::brent_find_minima(
      negated, grid[peak.grid_index - 1], grid[peak.grid_index + 1], 40);
  if (-best.second >= grid_value) {
    peak.delta_max = best.first;
    peak.rate_max = -best.second;
    peak.refinement_shift = best.first - grid_delta;
  } else {
    peak.delta_max = grid_delta;
    peak.rate_max = grid_value;
    peak.refinement_shift = 0.0;
  }
  return peak;
}

ScanResult n_scaling(const ScalingPolicy& policy, std::span<const std::size_t> n_list, Tier tier,
                     const ModelParams& params, std::size_t threads, const PeakSearch& search) {
  if (n_list.empty()) throw ValidationError("atom-number list is empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw ValidationError("atom numbers must be positive");
    if (i > 0 && !(n_list[i] > n_list[i - 1])) {
      throw ValidationError("atom-number list must be ascending");
    }
  }
  if (tier == Tier::lindblad && n_list.back() > lindblad::kMaxAtoms) {
    throw CapabilityError("lindblad tier is limited to " + std::to_string(lindblad::kMaxAtoms) +
                          " atoms (requested " + std::to_string(n_list.back()) + ")");
  }
  const double theta_gb = policy.kind == ScalingPolicy::Kind::geometric_bragg
                              ? closed::geometric_bragg_angle(policy.order, params)
                              : 0.0;

  const std::size_t count = n_list.size();
  std::vector<double> delta_max(count), rate_max(count), boundary(count);
  parallel_for(count, threads, [&](std::size_t i) {
    const std::size_t n = n_list[i];
    const ModelParams chain = params.with_chain(n);
    const RateModel model(chain, tier);
    const double width = search.half_width(n, params.beta());

    switch (policy.kind) {
      case ScalingPolicy::Kind::fixed:
        delta_max[i] = policy.delta;
        rate_max[i] = model.right_rate(policy.theta, policy.delta);
        boundary[i] = 0.0;
        return;
      case ScalingPolicy::Kind::geometric_bragg: {
        const PeakResult p = maximize_over_detuning(
            [&](double d) { return model.right_rate(theta_gb, d); }, width, tier == Tier::closed,
            search);
        delta_max[i] = p.delta_max;
        rate_max[i] = p.rate_max;
        boundary[i] = p.boundary ? 1.0 : 0.0;
        return;
      }
      case ScalingPolicy::Kind::modified_bragg: {
        auto along_mb = [&](double d) {
          const double c = closed::modified_bragg_cos(policy.order, d, chain, chain.a());
          if (std::abs(c) > 1.0) return std::numeric_limits<double>::quiet_NaN();
          if (tier == Tier::closed) {
            return closed::mb_envelope(n, d, chain.gamma_r(), chain.omega());
          }
          return model.right_rate(std::acos(c), d);
        };
        const PeakResult p = maximize_over_detuning(along_mb, width, tier == Tier::closed, search);
        delta_max[i] = p.delta_max;
        rate_max[i] = p.rate_max;
        boundary[i] = p.boundary ? 1.0 : 0.0;
        return;
      }
    }
  });

  ScanResult r = make_result(tier, params);
  std::vector<double> axis(count);
  std::transform(n_list.begin(), n_list.end(), axis.begin(),
                 [](std::size_t n) { return static_cast<double>(n); });
  r.axes.push_back({"n", std::move(axis)});
  r.observable_names = {"delta_max", "rate_max", "boundary_flag"};
  r.observables = {std::move(delta_max), std::move(rate_max), std::move(boundary)};
  return r;
}

}  // namespace wgbragg
