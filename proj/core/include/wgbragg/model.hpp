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

// Physical model of a driven emitter array next to a waveguide.
//
// Natural units throughout: the single-atom decay rate is 1 (all rates in
// units of Gamma), lengths are in units of the drive wavelength (so the drive
// wavenumber is 2*pi), and angles are in radians.

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace wgbragg {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kDriveWavenumber = kTwoPi;

/// Tolerance on gamma_r + gamma_l + gamma_u == 1.
inline constexpr double kRateSumTolerance = 1e-12;

/// Unvalidated model input. An empty occupation mask means all n_sites
/// are occupied.
struct RawParams {
  std::size_t n_sites = 1;
  std::vector<bool> occupation;
  double a = 1.0;
  double n_eff = 1.2;
  double omega = 0.01;
  double delta = 0.0;
  double theta = 0.0;
  double gamma_r = 0.0;
  double gamma_l = 0.0;
  double gamma_u = 1.0;
};

/// Decay rates split between the right, left and unguided channels.
struct ChannelRates {
  double gamma_r = 0.0;
  double gamma_l = 0.0;
  double gamma_u = 1.0;
};

/// Rates from the beta factor and directionality D = (gR - gL) / (gR + gL).
ChannelRates rates_from_beta(double beta, double directionality);

/// Rates with gamma_r held fixed and gamma_l chosen to give directionality D.
ChannelRates rates_from_right(double gamma_r, double directionality);

class ModelParams {
 public:
  const std::vector<bool>& occupation() const { return raw_.occupation; }
  std::size_t n_sites() const { return raw_.n_sites; }
  std::size_t n_atoms() const { return n_atoms_; }
  double a() const { return raw_.a; }
  double n_eff() const { return raw_.n_eff; }
  double omega() const { return raw_.omega; }
  double delta() const { return raw_.delta; }
  double theta() const { return raw_.theta; }
  double gamma_r() const { return raw_.gamma_r; }
  double gamma_l() const { return raw_.gamma_l; }
  double gamma_u() const { return raw_.gamma_u; }

  double beta() const { return raw_.gamma_r + raw_.gamma_l; }
  /// Directionality D; 0 when beta == 0.
  double directionality() const;
  /// Filling factor N / n_sites.
  double filling() const;
  /// Guided-mode propagation constant k_f = n_eff * k0.
  double guided_wavenumber() const { return raw_.n_eff * kDriveWavenumber; }
  bool fully_occupied() const { return n_atoms_ == raw_.n_sites; }

  const RawParams& raw() const { return raw_; }

  ModelParams with_drive(double theta, double delta) const;
  ModelParams with_omega(double omega) const;
  ModelParams with_occupation(std::vector<bool> occupation) const;
  ModelParams with_chain(std::size_t n_atoms) const;

 private:
  friend ModelParams make_params(const RawParams& raw);
  ModelParams() = default;

  RawParams raw_;
  std::size_t n_atoms_ = 0;
};

/// Validates raw input. Throws ValidationError on non-finite values,
/// negative rates, rates not summing to 1, a <= 0, theta outside [0, pi],
/// a mask of the wrong length or an empty array.
ModelParams make_params(const RawParams& raw);

/// Fully occupied chain of n atoms.
ModelParams make_chain(std::size_t n_atoms, double a, double n_eff, ChannelRates rates,
                       double omega = 0.01);

/// z_j = a * site index for each occupied site, ascending.
std::vector<double> positions_from_mask(const ModelParams& params);

struct CouplingMatrices {
  CMatrix gamma_right;
  CMatrix gamma_left;
  CMatrix gamma_unguided;
  /// Coherent exchange V_jl, zero diagonal.
  CMatrix v_coherent;
  std::vector<double> positions;

  std::size_t size() const { return positions.size(); }
  /// Gamma^R + Gamma^L + Gamma^u.
  CMatrix total() const;
};

/// Guided-mode dissipation and exchange for the occupied sites of `params`.
///
///   Gamma^R_jl = gR exp(-i kf (z_j - z_l))
///   Gamma^L_jl = gL exp(+i kf (z_j - z_l))
///   V_jl = -(i/2) gR sgn(z_j - z_l) exp(-i kf (z_j - z_l))
///          +(i/2) gL sgn(z_j - z_l) exp(+i kf (z_j - z_l)),   j != l
///   Gamma^u = gu * identity
///
/// With gL = 0 the combination V - (i/2) Gamma^R vanishes for z_j < z_l:
/// emission only feeds atoms downstream (to the right).
CouplingMatrices guided_coupling_matrices(const ModelParams& params);

/// Same, for an explicit list of positions (any order).
CouplingMatrices guided_coupling_matrices(const ModelParams& params,
                                          std::span<const double> positions);

/// Eigenvalues of the total dissipation matrix, descending, clipped at 0.
Eigen::VectorXd collective_rates(const CouplingMatrices& matrices);

}  // namespace wgbragg
