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

#include "wgbragg/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "wgbragg/errors.hpp"

namespace wgbragg::lindblad {

namespace {

// Largest superoperator solved through a full SVD; larger ones use a
// trace-constrained LU solve.
constexpr Eigen::Index kSvdMaxDimension = 256;
constexpr double kDegenerateNullSpace = 1e-9;

std::size_t atoms_for_dimension(Eigen::Index dim) {
  std::size_t n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) throw ValidationError("dimension is not a power of two");
  return n;
}

// out += kron(a, b), skipping zero entries of a.
void add_kron(CMatrix& out, const CMatrix& a, const CMatrix& b) {
  const Eigen::Index br = b.rows();
  const Eigen::Index bc = b.cols();
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const Complex c = a(i, j);
      if (c == Complex(0.0)) continue;
      out.block(i * br, j * bc, br, bc) += c * b;
    }
  }
}

DensityMatrix unvectorize(const CVector& v, Eigen::Index dim) {
  DensityMatrix s;
  s.n_atoms = atoms_for_dimension(dim);
  s.rho = Eigen::Map<const CMatrix>(v.data(), dim, dim);
  const Complex tr = s.rho.trace();
  if (std::abs(tr) == 0.0) throw NumericalError("steady state has zero trace");
  s.rho /= tr;
  s.rho = (0.5 * (s.rho + s.rho.adjoint())).eval();
  return s;
}

Eigen::Index density_dimension(const CMatrix& liouvillian) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(liouvillian.rows()))));
  if (d * d != liouvillian.rows() || liouvillian.rows() != liouvillian.cols()) {
    throw ValidationError("Liouvillian must be square with a square-number dimension");
  }
  return d;
}

}  // namespace

CMatrix lowering_operator(std::size_t site, std::size_t n_atoms) {
  const Eigen::Index dim = Eigen::Index{1} << n_atoms;
  const Eigen::Index bit = Eigen::Index{1} << (n_atoms - 1 - site);
  CMatrix s = CMatrix::Zero(dim, dim);
  for (Eigen::Index state = 0; state < dim; ++state) {
    if (state & bit) s(state & ~bit, state) = 1.0;
  }
  return s;
}

CMatrix build_liouvillian(const ModelParams& params, const CouplingMatrices& matrices) {
  const std::size_t n = matrices.size();
  if (n > kMaxAtoms) {
    throw CapabilityError("Lindblad oracle is limited to " + std::to_string(kMaxAtoms) +
                          " atoms (requested " + std::to_string(n) + ")");
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  const Complex i(0.0, 1.0);
  const CMatrix gamma = matrices.total();

  std::vector<CMatrix> sigma;
  sigma.reserve(n);
  for (std::size_t j = 0; j < n; ++j) sigma.push_back(lowering_operator(j, n));

  // Non-Hermitian effective Hamiltonian H - (i/2) sum_jl Gamma_jl sigma_j^dag sigma_l.
  const double kcos = kDriveWavenumber * std::cos(params.theta());
  CMatrix h_eff = CMatrix::Zero(dim, dim);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex drive = params.omega() * std::polar(1.0, kcos * matrices.positions[j]);
    h_eff += drive * sigma[j].adjoint() + std::conj(drive) * sigma[j];
    h_eff -= params.delta() * sigma[j].adjoint() * sigma[j];
    for (std::size_t l = 0; l < n; ++l) {
      const auto jj = static_cast<Eigen::Index>(j);
      const auto ll = static_cast<Eigen::Index>(l);
      const Complex coupling = matrices.v_coherent(jj, ll) - 0.5 * i * gamma(jj, ll);
      if (coupling != Complex(0.0)) h_eff += coupling * sigma[j].adjoint() * sigma[l];
    }
  }

  const CMatrix identity = CMatrix::Identity(dim, dim);
  CMatrix liouvillian = CMatrix::Zero(dim * dim, dim * dim);
  add_kron(liouvillian, identity, -i * h_eff);
  add_kron(liouvillian, i * h_eff.conjugate(), identity);

  // Recycling term through the jump operators of the diagonalized Gamma:
  // sum_jl Gamma_jl sigma_l rho sigma_j^dag = sum_k lambda_k C_k rho C_k^dag,
  // C_k = sum_l conj(U_lk) sigma_l.
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gamma);
  for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
    const double lambda = eig.eigenvalues()[k];
    if (lambda == 0.0) continue;
    CMatrix jump = CMatrix::Zero(dim, dim);
    for (std::size_t l = 0; l < n; ++l) {
      jump += std::conj(eig.eigenvectors()(static_cast<Eigen::Index>(l), k)) * sigma[l];
    }
    add_kron(liouvillian, (lambda * jump.conjugate()).eval(), jump);
  }
  return liouvillian;
}

DensityMatrix steady_density(const CMatrix& liouvillian) {
  const Eigen::Index dim = density_dimension(liouvillian);
  const Eigen::Index size = liouvillian.rows();

  if (size <= kSvdMaxDimension) {
    Eigen::BDCSVD<CMatrix> svd(liouvillian, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (size > 1 && sv[size - 2] <= kDegenerateNullSpace * sv[0]) {
      std::ostringstream msg;
      msg << "steady state is not unique (second-smallest singular value " << sv[size - 2]
          << ", largest " << sv[0] << ")";
      throw NumericalError(msg.str());
    }
    return unvectorize(svd.matrixV().col(size - 1), dim);
  }

  // Replace one equation by the trace condition.
  CMatrix constrained = liouvillian;
  constrained.row(0).setZero();
  for (Eigen::Index k = 0; k < dim; ++k) constrained(0, k + dim * k) = 1.0;
  CVector rhs = CVector::Zero(size);
  rhs[0] = 1.0;
  Eigen::PartialPivLU<CMatrix> lu(constrained);
  CVector v = lu.solve(rhs);
  if (!((liouvillian * v).norm() <= 1e-8 * liouvillian.norm() * v.norm())) {
    return integrate_to_steady_state(liouvillian);
  }
  return unvectorize(v, dim);
}

DensityMatrix integrate_to_steady_state(const CMatrix& liouvillian,
                                        const IntegrationOptions& options) {
  const Eigen::Index dim = density_dimension(liouvillian);
  // Well inside the RK4 stability region for any eigenvalue of L.
  const double norm_bound = liouvillian.cwiseAbs().rowwise().sum().maxCoeff();
  const double h = 1.0 / std::max(norm_bound, 1.0);

  CVector rho = CVector::Zero(liouvillian.rows());
  rho[0] = 1.0;  // all atoms in |g>
  double time = 0.0;
  CVector k1 = liouvillian * rho;
  while (k1.norm() >= options.tolerance) {
    if (time > options.max_time) {
      throw NumericalError("time integration did not reach a steady state");
    }
    const CVector k2 = liouvillian * (rho + 0.5 * h * k1);
    const CVector k3 = liouvillian * (rho + 0.5 * h * k2);
    const CVector k4 = liouvillian * (rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    time += h;
    k1 = liouvillian * rho;
  }
  return unvectorize(rho, dim);
}

double guided_rate_exact(const DensityMatrix& state, const CMatrix& gamma) {
  const std::size_t n = state.n_atoms;
  const Eigen::Index dim = state.rho.rows();
  CMatrix observable = CMatrix::Zero(dim, dim);
  for (std::size_t j = 0; j < n; ++j) {
    const CMatrix raise = lowering_operator(j, n).adjoint();
    for (std::size_t l = 0; l < n; ++l) {
      const Complex g = gamma(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l));
      if (g != Complex(0.0)) observable += g * raise * lowering_operator(l, n);
    }
  }
  return std::max((state.rho * observable).trace().real(), 0.0);
}

double right_rate_exact(const ModelParams& params) {
  const CouplingMatrices m = guided_coupling_matrices(params);
  return guided_rate_exact(steady_density(build_liouvillian(params, m)), m.gamma_right);
}

}  // namespace wgbragg::lindblad
