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

// Second-moment superoperators X -> E[(U (x) U) X (U (x) U)^dagger] on the
// two-copy space, the composite map R = G_Z o G_X o G_Z, its closed-form
// powers, and the Choi / moment-matrix views used to test them.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "udesign/coefficients.hpp"
#include "udesign/errors.hpp"
#include "udesign/linalg.hpp"
#include "udesign/parallel.hpp"

namespace udesign {

/// Largest local dimension for which maps are constructed (two-copy side
/// 4096).
inline constexpr std::size_t kMaxMapDimension = 64;
/// Largest local dimension for d^4 x d^4 moment and Choi matrices.
inline constexpr std::size_t kMaxMatrixDimension = 8;

/// Linear map on operators of H (x) H.
///
/// The action is a closure over precomputed constants, so applying a map
/// never needs its d^4 x d^4 matrix.
class MomentMap {
 public:
  using ApplyFn = std::function<Operator(const Operator&)>;

  MomentMap(Dim dim, std::string label, ApplyFn apply)
      : dim_(dim), label_(std::move(label)), apply_(std::move(apply)) {}

  Dim dim() const { return dim_; }
  const std::string& label() const { return label_; }

  Operator apply(const Operator& x) const {
    const auto side = static_cast<Eigen::Index>(dim_.d2());
    if (x.rows() != side || x.cols() != side) {
      throw DimensionError(label_ + ": expected a " + std::to_string(side) +
                           "x" + std::to_string(side) + " operator, got " +
                           std::to_string(x.rows()) + "x" +
                           std::to_string(x.cols()));
    }
    return apply_(x);
  }

  Operator operator()(const Operator& x) const { return apply(x); }

 private:
  Dim dim_;
  std::string label_;
  ApplyFn apply_;
};

namespace detail {

inline void require_map_envelope(Dim dim, const char* where) {
  if (dim.d() > kMaxMapDimension) {
    throw SizeError(std::string(where) + ": d = " + std::to_string(dim.d()) +
                    " exceeds map envelope d <= " +
                    std::to_string(kMaxMapDimension));
  }
}

inline void require_matrix_envelope(Dim dim, const char* where) {
  if (dim.d() > kMaxMatrixDimension) {
    throw SizeError(std::string(where) + ": d = " + std::to_string(dim.d()) +
                    " exceeds matrix envelope d <= " +
                    std::to_string(kMaxMatrixDimension));
  }
}

inline void require_same_dim(const MomentMap& a, const MomentMap& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("maps act on different dimensions: " + a.label() +
                         ", " + b.label());
  }
}

}  // namespace detail

inline MomentMap identity_map(Dim dim) {
  return MomentMap(dim, "id", [](const Operator& x) { return x; });
}

/// outer o inner.
inline MomentMap compose(const MomentMap& outer, const MomentMap& inner) {
  detail::require_same_dim(outer, inner);
  return MomentMap(outer.dim(), outer.label() + "*" + inner.label(),
                   [outer, inner](const Operator& x) {
                     return outer.apply(inner.apply(x));
                   });
}

/// ell-fold composition of `map` with itself.
inline MomentMap power(const MomentMap& map, int ell) {
  detail::require_positive_ell(ell, "power");
  return MomentMap(map.dim(), map.label() + "^" + std::to_string(ell),
                   [map, ell](const Operator& x) {
                     Operator y = map.apply(x);
                     for (int k = 1; k < ell; ++k) y = map.apply(y);
                     return y;
                   });
}

/// sum_k weight_k * map_k.
inline MomentMap linear_combination(
    std::vector<std::pair<double, MomentMap>> terms, std::string label) {
  if (terms.empty()) {
    throw DomainError("linear_combination: no terms");
  }
  for (const auto& t : terms) detail::require_same_dim(terms.front().second, t.second);
  const Dim dim = terms.front().second.dim();
  return MomentMap(dim, std::move(label), [terms](const Operator& x) {
    Operator out = terms.front().first * terms.front().second.apply(x);
    for (std::size_t k = 1; k < terms.size(); ++k)
      out += terms[k].first * terms[k].second.apply(x);
    return out;
  });
}

/// X -> (U (x) U) X (U (x) U)^dagger for a fixed d x d unitary U.
inline MomentMap conjugation_map(Dim dim, const Operator& u,
                                 std::string label = "Ad") {
  if (static_cast<std::size_t>(u.rows()) != dim.d() || u.rows() != u.cols()) {
    throw DimensionError("conjugation_map: unitary side != d");
  }
  auto uu = std::make_shared<const Operator>(tensor_product(u, u));
  return MomentMap(dim, std::move(label), [uu](const Operator& x) {
    return Operator((*uu) * x * uu->adjoint());
  });
}

/// Uniform average of conjugations over a finite list of d x d unitaries.
inline MomentMap unitary_twirl(Dim dim, const std::vector<Operator>& unitaries,
                               std::string label = "twirl") {
  if (unitaries.empty()) {
    throw DomainError("unitary_twirl: empty ensemble");
  }
  auto doubled = std::make_shared<std::vector<Operator>>();
  doubled->reserve(unitaries.size());
  for (const auto& u : unitaries) {
    if (static_cast<std::size_t>(u.rows()) != dim.d() || u.rows() != u.cols()) {
      throw DimensionError("unitary_twirl: unitary side != d");
    }
    doubled->push_back(tensor_product(u, u));
  }
  return MomentMap(dim, std::move(label), [doubled](const Operator& x) {
    Operator acc = Operator::Zero(x.rows(), x.cols());
    for (const auto& uu : *doubled) acc += uu * x * uu.adjoint();
    return Operator(acc / static_cast<double>(doubled->size()));
  });
}

// ---------------------------------------------------------------------------
// Exact twirls.

/// Random Z-diagonal unitary: |ij><kl| survives iff {i, j} == {k, l} as
/// multisets, every other matrix unit is annihilated.
inline MomentMap g_z_exact(Dim dim) {
  detail::require_map_envelope(dim, "g_z_exact");
  const std::size_t d = dim.d();
  return MomentMap(dim, "G_Z", [d](const Operator& x) {
    Operator out = Operator::Zero(x.rows(), x.cols());
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const auto r = static_cast<Eigen::Index>(i * d + j);
        const auto same = r;
        const auto swapped = static_cast<Eigen::Index>(j * d + i);
        out(r, same) = x(r, same);
        out(r, swapped) = x(r, swapped);
      }
    }
    return out;
  });
}

/// Random X-diagonal unitary: G_Z conjugated by the Hadamard transform on
/// both copies.
inline MomentMap g_x_exact(Dim dim) {
  detail::require_map_envelope(dim, "g_x_exact");
  const MomentMap gz = g_z_exact(dim);
  return MomentMap(dim, "G_X", [gz](const Operator& x) {
    Operator y = x;
    hadamard_conjugate_inplace(y);
    y = gz.apply(y);
    hadamard_conjugate_inplace(y);
    return y;
  });
}

/// Haar twirl: tr(P_sym X) Pi_sym + tr(P_anti X) Pi_anti.
inline MomentMap g_haar(Dim dim) {
  detail::require_map_envelope(dim, "g_haar");
  const std::size_t d = dim.d();
  return MomentMap(dim, "G_H", [d](const Operator& x) {
    const double dd = static_cast<double>(d);
    Complex trace = 0.0;
    Complex swap_trace = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        trace += x(static_cast<Eigen::Index>(i * d + j),
                   static_cast<Eigen::Index>(i * d + j));
        swap_trace += x(static_cast<Eigen::Index>(j * d + i),
                        static_cast<Eigen::Index>(i * d + j));
      }
    }
    const Complex sym_weight = 0.5 * (trace + swap_trace);
    const Complex anti_weight = 0.5 * (trace - swap_trace);
    // Pi_sym = (I + F) / (d (d + 1)), Pi_anti = (I - F) / (d (d - 1)).
    const Complex s = sym_weight / (dd * (dd + 1.0));
    const Complex a = anti_weight / (dd * (dd - 1.0));
    Operator out = Operator::Zero(x.rows(), x.cols());
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const auto r = static_cast<Eigen::Index>(i * d + j);
        out(r, r) += s + a;
        out(r, static_cast<Eigen::Index>(j * d + i)) += s - a;
      }
    }
    return out;
  });
}

/// R = G_Z o G_X o G_Z.
inline MomentMap r_map(Dim dim) {
  const MomentMap gz = g_z_exact(dim);
  MomentMap composed = compose(gz, compose(g_x_exact(dim), gz));
  return MomentMap(dim, "R", [composed](const Operator& x) {
    return composed.apply(x);
  });
}

namespace detail {

// Constants shared by the closed-form maps.
struct PairMapData {
  PairMapData(Dim dim_in, FCoefficientTable table)
      : dim(dim_in), transform(dim_in), f(std::move(table)) {}
  Dim dim;
  PairBasisTransform transform;
  FCoefficientTable f;
};

}  // namespace detail

/// R^ell in closed form. Off-diagonal pair-basis units are annihilated and
///   |ii><ii|        -> (1 - d^{-2l}) Pi_sym + d^{-2l} Lam0
///   |phi+><phi+|_ij -> (1 - p_l) Pi_sym + q_l Lam0
///                      + d^{-l} sum_kl f^{ij}_kl |phi+_kl><phi+_kl|
///   |phi-><phi-|_ij -> (1 - d^{-l}) Pi_anti
///                      + d^{-l} sum_kl f^{ij}_kl |phi-_kl><phi-_kl|
inline MomentMap r_pow_closed(Dim dim, int ell) {
  detail::require_positive_ell(ell, "r_pow_closed");
  detail::require_map_envelope(dim, "r_pow_closed");
  auto data = std::make_shared<const detail::PairMapData>(dim, f_coeff(dim));
  const double d = static_cast<double>(dim.d());
  const double d_ell = std::pow(d, -ell);
  const double d_2ell = std::pow(d, -2 * ell);
  const double p = p_ell(dim, ell);
  const double q = q_ell(dim, ell);
  return MomentMap(
      dim, "R^" + std::to_string(ell),
      [data, d, d_ell, d_2ell, p, q](const Operator& x) {
        const std::size_t nd = data->dim.d();
        const std::size_t np = data->dim.pairs();
        const Eigen::VectorXcd in = data->transform.pair_diagonal(x);
        Complex w_diag = 0.0;
        Complex w_sym = 0.0;
        Complex w_anti = 0.0;
        for (std::size_t k = 0; k < nd; ++k) w_diag += in(static_cast<Eigen::Index>(k));
        for (std::size_t k = 0; k < np; ++k) {
          w_sym += in(static_cast<Eigen::Index>(nd + k));
          w_anti += in(static_cast<Eigen::Index>(nd + np + k));
        }
        const double pi_sym = 2.0 / (d * (d + 1.0));
        const double pi_anti = 2.0 / (d * (d - 1.0));
        const Complex sym_part = ((1.0 - d_2ell) * w_diag + (1.0 - p) * w_sym) * pi_sym;
        const Complex lam_part = (d_2ell * w_diag + q * w_sym) / d;
        const Complex anti_part = (1.0 - d_ell) * w_anti * pi_anti;

        Eigen::VectorXcd out(in.size());
        for (std::size_t k = 0; k < nd; ++k)
          out(static_cast<Eigen::Index>(k)) = sym_part + lam_part;
        for (std::size_t k = 0; k < np; ++k) {
          out(static_cast<Eigen::Index>(nd + k)) = sym_part;
          out(static_cast<Eigen::Index>(nd + np + k)) = anti_part;
        }
        for (std::size_t r = 0; r < np; ++r) {
          const Complex ws = in(static_cast<Eigen::Index>(nd + r));
          const Complex wa = in(static_cast<Eigen::Index>(nd + np + r));
          for (std::size_t c : data->f.support(r)) {
            const double fv = d_ell * data->f.value(r, c);
            out(static_cast<Eigen::Index>(nd + c)) += fv * ws;
            out(static_cast<Eigen::Index>(nd + np + c)) += fv * wa;
          }
        }
        return data->transform.from_pair_diagonal(out);
      });
}

/// The residual channel C^(ell) in R^ell = (1 - p_ell) G_H + p_ell C^(ell):
///
///   C(rho) = [ ((2 d^l + d - 3) rho0 + 2 (d^l - 1) rho1) Lam0
///              + 2 (d^l - 1) rho0 Lam1 + 2 (d^l - 1) rho2 Pi_anti
///              + d^l (d - 1) sum_{ij,kl} f^{ij}_kl sum_{a=+-}
///                  <phi^a_ij|rho|phi^a_ij> |phi^a_kl><phi^a_kl| ]
///            / (d^{l+1} + d^l - 2)
///
/// with rho0 = tr rho L0, rho1 = tr rho L1, rho2 = tr rho P_anti.
inline MomentMap c_ell_map(Dim dim, int ell) {
  detail::require_positive_ell(ell, "c_ell_map");
  detail::require_map_envelope(dim, "c_ell_map");
  auto data = std::make_shared<const detail::PairMapData>(dim, f_coeff(dim));
  const double d = static_cast<double>(dim.d());
  const double dl = std::pow(d, ell);
  const double norm = d * dl + dl - 2.0;
  return MomentMap(
      dim, "C^" + std::to_string(ell),
      [data, d, dl, norm](const Operator& x) {
        const std::size_t nd = data->dim.d();
        const std::size_t np = data->dim.pairs();
        const Eigen::VectorXcd in = data->transform.pair_diagonal(x);
        Complex rho0 = 0.0;
        Complex rho1 = 0.0;
        Complex rho2 = 0.0;
        for (std::size_t k = 0; k < nd; ++k) rho0 += in(static_cast<Eigen::Index>(k));
        for (std::size_t k = 0; k < np; ++k) {
          rho1 += in(static_cast<Eigen::Index>(nd + k));
          rho2 += in(static_cast<Eigen::Index>(nd + np + k));
        }
        // Pair-basis diagonals of Lam0 (1/d on |ii>), Lam1 (1/d on phi+)
        // and Pi_anti (2/(d(d-1)) on phi-).
        const Complex lam0 = ((2.0 * dl + d - 3.0) * rho0 + 2.0 * (dl - 1.0) * rho1) / d;
        const Complex lam1 = 2.0 * (dl - 1.0) * rho0 / d;
        const Complex anti = 2.0 * (dl - 1.0) * rho2 * 2.0 / (d * (d - 1.0));
        Eigen::VectorXcd out(in.size());
        for (std::size_t k = 0; k < nd; ++k) out(static_cast<Eigen::Index>(k)) = lam0;
        for (std::size_t k = 0; k < np; ++k) {
          out(static_cast<Eigen::Index>(nd + k)) = lam1;
          out(static_cast<Eigen::Index>(nd + np + k)) = anti;
        }
        const double weight = dl * (d - 1.0);
        for (std::size_t r = 0; r < np; ++r) {
          const Complex ws = in(static_cast<Eigen::Index>(nd + r));
          const Complex wa = in(static_cast<Eigen::Index>(nd + np + r));
          for (std::size_t c : data->f.support(r)) {
            const double fv = weight * data->f.value(r, c);
            out(static_cast<Eigen::Index>(nd + c)) += fv * ws;
            out(static_cast<Eigen::Index>(nd + np + c)) += fv * wa;
          }
        }
        out /= norm;
        return data->transform.from_pair_diagonal(out);
      });
}

// ---------------------------------------------------------------------------
// Matrix views.

/// Basis of matrix units used to index moment matrices.
enum class UnitBasis { pair, computational };

namespace detail {

// Calls fn(column, output) for every matrix unit |p><q| of the chosen basis,
// where column = p * d^2 + q and `output` is map(|p><q|) expressed in the
// same basis. Outputs for different columns are independent.
template <typename Fn>
void for_each_unit(const MomentMap& map, UnitBasis basis, unsigned threads,
                   Fn&& fn) {
  const Dim dim = map.dim();
  const std::size_t side = dim.d2();
  const PairBasisTransform transform(dim);
  parallel_for(side * side, threads, [&](std::size_t column) {
    const std::size_t p = column / side;
    const std::size_t q = column % side;
    if (basis == UnitBasis::pair) {
      fn(column, transform.to_pair(map.apply(transform.unit(p, q))));
    } else {
      fn(column, map.apply(matrix_unit(side, p, q)));
    }
  });
}

}  // namespace detail

/// Matrix of the superoperator: column p * d^2 + q holds map(|p><q|)
/// vectorised row-major in the same unit basis. d^4 x d^4, so d <= 8.
inline Operator moment_matrix(const MomentMap& map,
                              UnitBasis basis = UnitBasis::pair,
                              unsigned threads = 1) {
  detail::require_matrix_envelope(map.dim(), "moment_matrix");
  const auto n = static_cast<Eigen::Index>(map.dim().d2() * map.dim().d2());
  Operator out(n, n);
  detail::for_each_unit(map, basis, threads,
                        [&](std::size_t column, const Operator& y) {
                          const auto c = static_cast<Eigen::Index>(column);
                          for (Eigen::Index r = 0; r < y.rows(); ++r)
                            for (Eigen::Index s = 0; s < y.cols(); ++s)
                              out(r * y.cols() + s, c) = y(r, s);
                        });
  return out;
}

/// max over all matrix units |p><q| of max |a(|p><q|) - b(|p><q|)|, both
/// outputs expressed in `basis`. Equals the max-abs difference of the two
/// moment matrices without materialising them.
inline double max_map_deviation(const MomentMap& a, const MomentMap& b,
                                UnitBasis basis = UnitBasis::pair,
                                unsigned threads = 1) {
  detail::require_same_dim(a, b);
  const Dim dim = a.dim();
  const std::size_t side = dim.d2();
  std::vector<double> column_max(side * side, 0.0);
  const MomentMap diff = linear_combination({{1.0, a}, {-1.0, b}}, "diff");
  detail::for_each_unit(diff, basis, threads,
                        [&](std::size_t column, const Operator& y) {
                          column_max[column] = max_abs(y);
                        });
  return *std::max_element(column_max.begin(), column_max.end());
}

/// Same as max_map_deviation, restricted to the listed units (p, q).
inline double max_map_deviation_on(
    const MomentMap& a, const MomentMap& b,
    const std::vector<std::pair<std::size_t, std::size_t>>& units,
    UnitBasis basis = UnitBasis::pair, unsigned threads = 1) {
  detail::require_same_dim(a, b);
  const Dim dim = a.dim();
  const std::size_t side = dim.d2();
  const PairBasisTransform transform(dim);
  const MomentMap diff = linear_combination({{1.0, a}, {-1.0, b}}, "diff");
  std::vector<double> unit_max(units.size(), 0.0);
  parallel_for(units.size(), threads, [&](std::size_t k) {
    const auto [p, q] = units[k];
    if (p >= side || q >= side) {
      throw DimensionError("max_map_deviation_on: unit index out of range");
    }
    unit_max[k] = basis == UnitBasis::pair
                      ? max_abs(transform.to_pair(diff.apply(transform.unit(p, q))))
                      : max_abs(diff.apply(matrix_unit(side, p, q)));
  });
  double worst = 0.0;
  for (double v : unit_max) worst = std::max(worst, v);
  return worst;
}

/// Choi matrix (map (x) id)(|Phi><Phi|) with |Phi> maximally entangled on
/// (H (x) H) (x) (H (x) H). The map output is the first factor.
inline Operator choi(const MomentMap& map) {
  detail::require_matrix_envelope(map.dim(), "choi");
  const std::size_t side = map.dim().d2();
  const auto n = static_cast<Eigen::Index>(side);
  Operator out = Operator::Zero(n * n, n * n);
  const double norm = 1.0 / static_cast<double>(side);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const Operator y = map.apply(matrix_unit(side, static_cast<std::size_t>(a),
                                               static_cast<std::size_t>(b)));
      for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
          out(r * n + a, c * n + b) = norm * y(r, c);
    }
  }
  return out;
}

}  // namespace udesign
