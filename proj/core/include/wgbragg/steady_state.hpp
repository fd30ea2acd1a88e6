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

// Weak-drive steady state of the array.
//
// To lowest order in Omega the coherences x_j = <sigma_j> obey
//
//   A x = -i Omega v,   A_jl = -i delta delta_jl + Gamma_jl / 2 + i V_jl,
//   v_j = exp(i k0 z_j cos(theta)),
//
// with delta = omega_laser - omega_atom (drive Hamiltonian -delta sigma^dag sigma).
// Pair correlations factorize, <sigma_j^dag sigma_l> = conj(x_j) x_l.

#include <Eigen/LU>

#include "wgbragg/model.hpp"

namespace wgbragg {

struct LinearSystem {
  CMatrix matrix;
  CVector drive;
};

/// A and v for the drive (theta, delta) stored in `params`.
LinearSystem assemble_system(const CouplingMatrices& matrices, const ModelParams& params);

struct AmplitudeVector {
  CVector x;
  /// phi_j = k0 z_j cos(theta), wrapped to (-pi, pi]
  Eigen::VectorXd drive_phases;
};

/// Dense LU solve of A x = -i Omega v. Throws NumericalError when the
/// reciprocal condition estimate drops below 1e-12.
AmplitudeVector solve_amplitudes(const LinearSystem& system, double omega);

/// x^dag Gamma x for one channel matrix (right, left or unguided).
double guided_rate(const AmplitudeVector& amplitudes, const CMatrix& gamma);

/// |x^dag Gamma x - 2 Omega Im(sum_j conj(x_j) v_j)| / x^dag Gamma x.
/// Total emission equals absorbed drive power at stationarity, so this
/// vanishes up to round-off for an exact solve. Returns 0 when nothing is
/// scattered.
double energy_balance_residual(const AmplitudeVector& amplitudes, const CouplingMatrices& matrices,
                               const ModelParams& params);

struct ChannelScattering {
  double right = 0.0;
  double left = 0.0;
  double unguided = 0.0;
};

/// Caches the coupling matrices of one geometry for repeated solves over
/// (theta, delta).
class SteadyStateSolver {
 public:
  explicit SteadyStateSolver(const ModelParams& params);

  const CouplingMatrices& matrices() const { return matrices_; }
  const ModelParams& params() const { return params_; }

  AmplitudeVector amplitudes(double theta, double delta) const;
  ChannelScattering rates(double theta, double delta) const;
  double right_rate(double theta, double delta) const;

 private:
  ModelParams params_;
  CouplingMatrices matrices_;
  /// u_j = exp(-i k_f z_j); the right-mode matrix is gamma_r u u^dag.
  CVector right_mode_;
};

}  // namespace wgbragg
