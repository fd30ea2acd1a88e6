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

// Monte-Carlo ensembles over random void configurations.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wgbragg/model.hpp"
#include "wgbragg/scan.hpp"

namespace wgbragg {

struct DrivePoint {
  double theta = 0.0;
  double delta = 0.0;
};

/// Where the arrays with voids and the perfect reference chain are driven.
struct VoidObservable {
  DrivePoint voids;
  DrivePoint reference;
};

/// Both arrays at the same (theta, delta).
VoidObservable fixed_observable(double theta, double delta);

/// Drive at the modified-Bragg optimum: delta_max is the positive peak of
/// the b = 0 envelope of n_atoms; the reference chain is driven at
/// theta_MB(a) and the arrays with voids at theta_MB(a / filling), both
/// built on the geometric angle of order m of lattice a.
VoidObservable modified_bragg_observable(std::size_t n_atoms, double filling, int order,
                                         const ModelParams& params,
                                         const PeakSearch& search = {});

/// Occupation mask with exactly n_atoms of n_sites filled, uniformly over
/// all such masks. Deterministic in (seed, index).
std::vector<bool> sample_occupation(std::size_t n_sites, std::size_t n_atoms, std::uint64_t seed,
                                    std::uint64_t index);

struct VoidEnsembleResult {
  double filling = 0.0;
  std::size_t n_atoms = 0;
  std::size_t n_sites = 0;
  std::size_t n_configs = 0;
  std::uint64_t seed = 0;
  Tier tier = Tier::closed;
  VoidObservable observable;
  double mean_rate = 0.0;
  /// Population standard deviation over configurations.
  double std_rate = 0.0;
  /// Perfect chain of n_atoms at spacing a.
  double reference_rate = 0.0;
  /// mean_rate / reference_rate.
  double robustness = 0.0;
};

/// Guided rate averaged over n_configs random placements of n_atoms on the
/// params.n_sites() lattice sites. Only the lattice, couplings and drive
/// strength of `params` are used (its own mask is ignored).
VoidEnsembleResult void_ensemble(const ModelParams& params, std::size_t n_atoms,
                                 std::size_t n_configs, std::uint64_t seed,
                                 const VoidObservable& observable, Tier tier,
                                 std::size_t threads = 1);

}  // namespace wgbragg
