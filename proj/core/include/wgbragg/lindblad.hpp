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

// Exact steady state of the full master equation on the 2^N-dimensional
// Hilbert space, for small arrays.
//
//   d rho/dt = -i [H, rho] + sum_jl Gamma_jl (sigma_l rho sigma_j^dag - {sigma_j^dag sigma_l, rho} / 2)
//   H = sum_j [Omega (exp(i phi_j) sigma_j^dag + h.c.) - delta sigma_j^dag sigma_j]
//       + sum_{j != l} V_jl sigma_j^dag sigma_l
//
// Basis states are tensor products in site order with site 0 as the most
// significant bit, |g> = 0 and |e> = 1. Superoperators act on column-stacked
// density matrices: vec(rho)[i + dim * j] = rho(i, j).

#include <cstddef>

#include "wgbragg/model.hpp"

namespace wgbragg::lindblad {

inline constexpr std::size_t kMaxAtoms = 6;

struct DensityMatrix {
  CMatrix rho;
  std::size_t n_atoms = 0;

  double trace() const { return rho.trace().real(); }
};

/// sigma_j = |g_j><e_j| on the full 2^N space.
CMatrix lowering_operator(std::size_t site, std::size_t n_atoms);

/// Generator L with vec(d rho/dt) = L vec(rho). Throws CapabilityError for
/// more than kMaxAtoms atoms.
CMatrix build_liouvillian(const ModelParams& params, const CouplingMatrices& matrices);

/// Null vector of L, normalized to unit trace and hermitized. Throws
/// NumericalError when the null space is degenerate.
DensityMatrix steady_density(const CMatrix& liouvillian);

struct IntegrationOptions {
  double tolerance = 1e-12;
  double max_time = 1e6;
};

/// Fixed-step RK4 from the all-ground state until ||L rho|| < tolerance.
DensityMatrix integrate_to_steady_state(const CMatrix& liouvillian,
                                        const IntegrationOptions& options = {});

/// sum_jl Gamma_jl Tr(rho sigma_j^dag sigma_l).
double guided_rate_exact(const DensityMatrix& state, const CMatrix& gamma);

/// Convenience: build, solve and return the right-mode rate for `params`.
double right_rate_exact(const ModelParams& params);

}  // namespace wgbragg::lindblad
