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
#include <optional>
#include <utility>
#include <vector>

#include "udesign/coefficients.hpp"
#include "udesign/linalg.hpp"
#include "udesign/moment_map.hpp"
#include "udesign/parallel.hpp"

namespace udesign {

/// Rounded analytic bounds on the design error of ell repetitions:
///   (2/d^l)(1 - 1/(d-1))  <=  eps  <=  (2/d^l)(1 + 2/(d-1)).
inline std::pair<Rational, Rational> design_error_bounds_exact(Dim dim, int ell) {
  detail::require_positive_ell(ell, "design_error_bounds");
  const Rational d = static_cast<long long>(dim.d());
  const Rational scale = 2 / rational_pow(d, ell);
  return {scale * (1 - 1 / (d - 1)), scale * (1 + 2 / (d - 1))};
}

inline std::pair<double, double> design_error_bounds(Dim dim, int ell) {
  const auto [lo, hi] = design_error_bounds_exact(dim, ell);
  return {to_double(lo), to_double(hi)};
}

/// Exact trace distance of R^ell and the Haar twirl on one phi+ input:
///   2/d^l - 2 (d^{l+1} + d^l - 2) / (d^{2l} (d^2 - 1)).
inline Rational certificate_value_exact(Dim dim, int ell) {
  detail::require_positive_ell(ell, "certificate_value");
  const Rational d = static_cast<long long>(dim.d());
  const Rational dl = rational_pow(d, ell);
  return 2 / dl - 2 * (dl * d + dl - 2) / (dl * dl * (d * d - 1));
}

/// Design-error interval for ell repetitions. The certified interval is
/// [lower_exact, upper_proof]; the theorem values are its rounded
/// enclosure.
struct DesignErrorBracket {
  std::size_t d;
  int ell;
  double lower_theorem;
  double upper_theorem;
  double lower_exact;
  double upper_proof;  // 2 p_ell

  bool chain_holds() const {
    return lower_theorem <= lower_exact && lower_exact <= upper_proof &&
           upper_proof <= upper_theorem;
  }
};

inline DesignErrorBracket proof_bracket(Dim dim, int ell) {
  const auto [lo, hi] = design_error_bounds(dim, ell);
  return {dim.d(), ell, lo, hi, to_double(certificate_value_exact(dim, ell)),
          to_double(2 * p_ell_exact(dim, ell))};
}

/// Trace-norm lower bound on ||map - G_H||_diamond obtained from the single
/// input |phi+_{i0 j0}><phi+_{i0 j0}|, i0 > j0.
inline double lower_certificate(const MomentMap& map, Dim dim,
                                std::size_t i0 = 1, std::size_t j0 = 0) {
  if (map.dim() != dim) {
    throw DimensionError("lower_certificate: map dimension mismatch");
  }
  if (!(i0 > j0) || i0 >= dim.d()) {
    throw DomainError("lower_certificate: probe pair must satisfy d > i0 > j0");
  }
  const PairBasisTransform transform(dim);
  const std::size_t p = PairBasisIndex::sym(i0, j0).ordinal(dim.d());
  const Operator probe = transform.unit(p, p);
  const Operator out = map.apply(probe);
  const double drift = std::abs(out.trace() - Complex(1.0, 0.0));
  if (drift > 1e-10) {
    throw ContractError("lower_certificate: " + map.label() +
                        " is not trace preserving on the probe (drift " +
                        std::to_string(drift) + ")");
  }
  return trace_norm(out - g_haar(dim).apply(probe));
}

/// tr(M^dagger M) for the moment matrix M of the map, accumulated column by
/// column. Equals E|tr(U^dagger V)|^4 when the map is an ensemble twirl;
/// 2 exactly for the Haar twirl.
inline double frame_potential(const MomentMap& map, unsigned threads = 1) {
  detail::require_matrix_envelope(map.dim(), "frame_potential");
  const std::size_t side = map.dim().d2();
  std::vector<double> column(side * side, 0.0);
  detail::for_each_unit(map, UnitBasis::computational, threads,
                        [&](std::size_t c, const Operator& y) {
                          column[c] = y.squaredNorm();
                        });
  double total = 0.0;
  for (double v : column) total += v;
  return total;
}

/// frame_potential(map) - 2 evaluated as frame_potential(map - G_H). The
/// two agree whenever G_H o map = map o G_H = G_H, as for every twirl of a
/// unitary ensemble.
inline double frame_potential_excess(const MomentMap& map, unsigned threads = 1) {
  const MomentMap residual = linear_combination(
      {{1.0, map}, {-1.0, g_haar(map.dim())}}, map.label() + "-G_H");
  return frame_potential(residual, threads);
}

struct ConvergenceRow {
  int ell;
  double lower_theorem;
  double lower_exact;
  double upper_proof;
  double upper_theorem;
  /// frame_potential_excess(R^ell); absent above the matrix envelope.
  std::optional<double> frame_potential_excess;
};

inline std::vector<ConvergenceRow> convergence_table(int n_qubits, int ell_max,
                                                     unsigned threads = 1) {
  if (ell_max < 1) throw DomainError("convergence_table: ell_max must be >= 1");
  const Dim dim(n_qubits);
  const bool with_fp = dim.d() <= kMaxMatrixDimension;
  std::vector<ConvergenceRow> rows;
  rows.reserve(static_cast<std::size_t>(ell_max));
  for (int ell = 1; ell <= ell_max; ++ell) {
    const DesignErrorBracket b = proof_bracket(dim, ell);
    ConvergenceRow row{ell, b.lower_theorem, b.lower_exact, b.upper_proof,
                       b.upper_theorem, std::nullopt};
    if (with_fp) {
      row.frame_potential_excess =
          frame_potential_excess(r_pow_closed(dim, ell), threads);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace udesign
