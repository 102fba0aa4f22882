// Copyright 2026 The udesign Authors
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

#include <cmath>
#include <numbers>
#include <cstdint>

#include "udesign/linalg.hpp"
#include "udesign/rng.hpp"

namespace udesign::testing {

inline double gaussian(Rng& rng) {
  // Box-Muller; only used to build probe matrices.
  const double u1 = 1.0 - rng.uniform_unit();
  const double u2 = rng.uniform_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline Operator random_matrix(std::size_t side, Rng& rng) {
  Operator a(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side));
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      a(r, c) = Complex(gaussian(rng), gaussian(rng));
  return a;
}

inline Operator random_hermitian(std::size_t side, Rng& rng) {
  const Operator a = random_matrix(side, rng);
  return 0.5 * (a + a.adjoint());
}

/// Random full-rank density matrix (Ginibre construction).
inline Operator random_density(std::size_t side, Rng& rng) {
  const Operator a = random_matrix(side, rng);
  Operator rho = a * a.adjoint();
  return rho / rho.trace().real();
}

}  // namespace udesign::testing
