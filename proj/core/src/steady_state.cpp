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

#include "wgbragg/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wgbragg/errors.hpp"

namespace wgbragg {

namespace {

constexpr double kMinReciprocalCondition = 1e-12;

Eigen::VectorXd drive_phases(std::span<const double> positions, double theta) {
  Eigen::VectorXd phi(static_cast<Eigen::Index>(positions.size()));
  const double c = kDriveWavenumber * std::cos(theta);
  for (std::size_t j = 0; j < positions.size(); ++j) {
    phi[static_cast<Eigen::Index>(j)] = c * positions[j];
  }
  return phi;
}

CVector unit_phasors(const Eigen::VectorXd& phases) {
  CVector v(phases.size());
  for (Eigen::Index j = 0; j < phases.size(); ++j) v[j] = std::polar(1.0, phases[j]);
  return v;
}

}  // namespace

LinearSystem assemble_system(const CouplingMatrices& matrices, const ModelParams& params) {
  const Complex i(0.0, 1.0);
  LinearSystem sys;
  sys.matrix = 0.5 * matrices.total() + i * matrices.v_coherent;
  sys.matrix.diagonal().array() -= i * params.delta();
  sys.drive = unit_phasors(drive_phases(matrices.positions, params.theta()));
  return sys;
}

AmplitudeVector solve_amplitudes(const LinearSystem& system, double omega) {
  const Complex i(0.0, 1.0);
  Eigen::PartialPivLU<CMatrix> lu(system.matrix);
  const double rcond = lu.rcond();
  if (!(rcond >= kMinReciprocalCondition)) {
    std::ostringstream msg;
    msg << "steady-state matrix is singular or ill-conditioned (N = " << system.matrix.rows()
        << ", rcond = " << rcond << ")";
    throw NumericalError(msg.str());
  }
  const CVector rhs = -i * omega * system.drive;
  AmplitudeVector out;
  out.x = lu.solve(rhs);
  // One step of iterative refinement.
  const CVector residual = rhs - system.matrix * out.x;
  if (residual.norm() > 1e-14 * rhs.norm()) out.x += lu.solve(residual);

  out.drive_phases.resize(system.drive.size());
  for (Eigen::Index j = 0; j < system.drive.size(); ++j) {
    out.drive_phases[j] = std::arg(system.drive[j]);
  }
  return out;
}

double guided_rate(const AmplitudeVector& amplitudes, const CMatrix& gamma) {
  const double q = amplitudes.x.dot(gamma * amplitudes.x).real();
  return std::max(q, 0.0);
}

double energy_balance_residual(const AmplitudeVector& amplitudes, const CouplingMatrices& matrices,
                               const ModelParams& params) {
  const CVector& x = amplitudes.x;
  const double emitted = x.dot(matrices.total() * x).real();
  if (emitted == 0.0) return 0.0;
  const CVector v = unit_phasors(drive_phases(matrices.positions, params.theta()));
  const double absorbed = 2.0 * params.omega() * x.dot(v).imag();
  return std::abs(emitted - absorbed) / emitted;
}

SteadyStateSolver::SteadyStateSolver(const ModelParams& params)
    : params_(params), matrices_(guided_coupling_matrices(params)) {
  const double kf = params_.guided_wavenumber();
  right_mode_.resize(static_cast<Eigen::Index>(matrices_.size()));
  for (std::size_t j = 0; j < matrices_.size(); ++j) {
    right_mode_(static_cast<Eigen::Index>(j)) = std::polar(1.0, -kf * matrices_.positions[j]);
  }
}

AmplitudeVector SteadyStateSolver::amplitudes(double theta, double delta) const {
  const ModelParams p = params_.with_drive(theta, delta);
  return solve_amplitudes(assemble_system(matrices_, p), p.omega());
}

// The guided matrices are rank one, gamma u u^dag, so x^dag Gamma x = gamma |u^dag x|^2.
ChannelScattering SteadyStateSolver::rates(double theta, double delta) const {
  const CVector& x = amplitudes(theta, delta).x;
  return {params_.gamma_r() * std::norm(right_mode_.dot(x)),
          params_.gamma_l() * std::norm(right_mode_.conjugate().dot(x)),
          params_.gamma_u() * x.squaredNorm()};
}

double SteadyStateSolver::right_rate(double theta, double delta) const {
  return params_.gamma_r() * std::norm(right_mode_.dot(amplitudes(theta, delta).x));
}

}  // namespace wgbragg
