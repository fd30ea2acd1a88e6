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

#include "wgbragg/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wgbragg/errors.hpp"

namespace wgbragg {

namespace {

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw ValidationError(std::string(name) + " must be finite");
  }
}

}  // namespace

ChannelRates rates_from_beta(double beta, double directionality) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ValidationError("beta must lie in [0, 1]");
  if (!(directionality >= -1.0 && directionality <= 1.0)) {
    throw ValidationError("directionality must lie in [-1, 1]");
  }
  ChannelRates r;
  r.gamma_r = 0.5 * beta * (1.0 + directionality);
  r.gamma_l = 0.5 * beta * (1.0 - directionality);
  r.gamma_u = 1.0 - beta;
  return r;
}

ChannelRates rates_from_right(double gamma_r, double directionality) {
  if (!(directionality > -1.0 && directionality <= 1.0)) {
    throw ValidationError("directionality must lie in (-1, 1] when gamma_r is fixed");
  }
  ChannelRates r;
  r.gamma_r = gamma_r;
  r.gamma_l = gamma_r * (1.0 - directionality) / (1.0 + directionality);
  r.gamma_u = 1.0 - r.gamma_r - r.gamma_l;
  if (r.gamma_r < 0.0 || r.gamma_u < 0.0) {
    throw ValidationError("gamma_r and directionality give rates outside [0, 1]");
  }
  return r;
}

double ModelParams::directionality() const {
  const double b = beta();
  return b > 0.0 ? (raw_.gamma_r - raw_.gamma_l) / b : 0.0;
}

double ModelParams::filling() const {
  return static_cast<double>(n_atoms_) / static_cast<double>(raw_.n_sites);
}

ModelParams ModelParams::with_drive(double theta, double delta) const {
  RawParams r = raw_;
  r.theta = theta;
  r.delta = delta;
  return make_params(r);
}

ModelParams ModelParams::with_omega(double omega) const {
  RawParams r = raw_;
  r.omega = omega;
  return make_params(r);
}

ModelParams ModelParams::with_occupation(std::vector<bool> occupation) const {
  RawParams r = raw_;
  r.n_sites = occupation.size();
  r.occupation = std::move(occupation);
  return make_params(r);
}

ModelParams ModelParams::with_chain(std::size_t n_atoms) const {
  RawParams r = raw_;
  r.n_sites = n_atoms;
  r.occupation.clear();
  return make_params(r);
}

ModelParams make_params(const RawParams& raw) {
  require_finite(raw.a, "a");
  require_finite(raw.n_eff, "n_eff");
  require_finite(raw.omega, "omega");
  require_finite(raw.delta, "delta");
  require_finite(raw.theta, "theta");
  require_finite(raw.gamma_r, "gamma_r");
  require_finite(raw.gamma_l, "gamma_l");
  require_finite(raw.gamma_u, "gamma_u");

  if (raw.gamma_r < 0.0 || raw.gamma_l < 0.0 || raw.gamma_u < 0.0) {
    throw ValidationError("decay rates must be non-negative");
  }
  const double sum = raw.gamma_r + raw.gamma_l + raw.gamma_u;
  if (std::abs(sum - 1.0) > kRateSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "decay rates must sum to 1 (got " << sum << ")";
    throw ValidationError(msg.str());
  }
  if (!(raw.a > 0.0)) throw ValidationError("lattice constant a must be positive");
  if (raw.theta < 0.0 || raw.theta > kPi) throw ValidationError("theta must lie in [0, pi]");
  if (raw.n_sites < 1) throw ValidationError("n_sites must be at least 1");
  if (!raw.occupation.empty() && raw.occupation.size() != raw.n_sites) {
    throw ValidationError("occupation mask length must equal n_sites");
  }

  ModelParams p;
  p.raw_ = raw;
  if (p.raw_.occupation.empty()) p.raw_.occupation.assign(raw.n_sites, true);
  p.n_atoms_ = static_cast<std::size_t>(
      std::count(p.raw_.occupation.begin(), p.raw_.occupation.end(), true));
  if (p.n_atoms_ == 0) throw ValidationError("occupation mask has no atoms");
  return p;
}

ModelParams make_chain(std::size_t n_atoms, double a, double n_eff, ChannelRates rates,
                       double omega) {
  RawParams r;
  r.n_sites = n_atoms;
  r.a = a;
  r.n_eff = n_eff;
  r.omega = omega;
  r.gamma_r = rates.gamma_r;
  r.gamma_l = rates.gamma_l;
  r.gamma_u = rates.gamma_u;
  return make_params(r);
}

std::vector<double> positions_from_mask(const ModelParams& params) {
  std::vector<double> z;
  z.reserve(params.n_atoms());
  const auto& mask = params.occupation();
  for (std::size_t site = 0; site < mask.size(); ++site) {
    if (mask[site]) z.push_back(params.a() * static_cast<double>(site));
  }
  return z;
}

CMatrix CouplingMatrices::total() const {
  return gamma_right + gamma_left + gamma_unguided;
}

CouplingMatrices guided_coupling_matrices(const ModelParams& params) {
  const auto z = positions_from_mask(params);
  return guided_coupling_matrices(params, z);
}

CouplingMatrices guided_coupling_matrices(const ModelParams& params,
                                          std::span<const double> positions) {
  const auto n = static_cast<Eigen::Index>(positions.size());
  const double kf = params.guided_wavenumber();
  const double gr = params.gamma_r();
  const double gl = params.gamma_l();
  const Complex half_i(0.0, 0.5);

  CouplingMatrices m;
  m.positions.assign(positions.begin(), positions.end());
  m.gamma_right.resize(n, n);
  m.gamma_left.resize(n, n);
  m.v_coherent.resize(n, n);
  m.gamma_unguided = params.gamma_u() * CMatrix::Identity(n, n);

  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < n; ++l) {
      const double dz = positions[j] - positions[l];
      const Complex right = std::polar(1.0, -kf * dz);
      const Complex left = std::conj(right);
      m.gamma_right(j, l) = gr * right;
      m.gamma_left(j, l) = gl * left;
      if (j == l) {
        m.v_coherent(j, l) = 0.0;
      } else {
        const double sgn = dz > 0.0 ? 1.0 : (dz < 0.0 ? -1.0 : 0.0);
        m.v_coherent(j, l) = sgn * (-half_i * gr * right + half_i * gl * left);
      }
    }
  }
  return m;
}

Eigen::VectorXd collective_rates(const CouplingMatrices& matrices) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrices.total(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigen-decomposition failed");
  Eigen::VectorXd values = solver.eigenvalues().reverse();
  for (auto& v : values) {
    if (v < -1e-12) throw NumericalError("dissipation matrix is not positive semidefinite");
    v = std::max(v, 0.0);
  }
  return values;
}

}  // namespace wgbragg
