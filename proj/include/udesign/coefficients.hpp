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

// Exact scalar algebra behind the repeated Z/X twirl: the overlap table f,
// the mixing weights p_ell and q_ell, and the Pauli-pair recurrence.

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "udesign/errors.hpp"
#include "udesign/linalg.hpp"

namespace udesign {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rational_pow(const Rational& base, int exponent) {
  Rational out = 1;
  for (int k = 0; k < exponent; ++k) out *= base;
  return out;
}

namespace detail {

inline void require_positive_ell(int ell, const char* where) {
  if (ell < 1) {
    throw DomainError(std::string(where) + ": ell must be >= 1, got " +
                      std::to_string(ell));
  }
}

}  // namespace detail

/// Table f^{ij}_{kl} = (2/d^3) (sum_alpha alpha_i alpha_j alpha_k alpha_l)^2
/// over pairs i > j, k > l, both indexed by pair_index().
///
/// Only the integer alpha-sums are stored; exact and floating values are
/// derived on demand. The nonzero pattern of a row is the class of pairs
/// sharing the same Hadamard sign product.
class FCoefficientTable {
 public:
  FCoefficientTable(Dim dim, std::vector<std::int64_t> alpha_sums)
      : dim_(dim), alpha_sums_(std::move(alpha_sums)) {
    const std::size_t n = dim.pairs();
    if (alpha_sums_.size() != n * n) {
      throw DimensionError("FCoefficientTable: table size != pairs^2");
    }
    support_.resize(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (alpha_sums_[r * n + c] != 0) support_[r].push_back(c);
  }

  Dim dim() const { return dim_; }
  std::size_t pairs() const { return dim_.pairs(); }

  std::int64_t alpha_sum(std::size_t row, std::size_t col) const {
    return alpha_sums_[row * pairs() + col];
  }

  Rational exact(std::size_t row, std::size_t col) const {
    const std::int64_t s = alpha_sum(row, col);
    const auto d = static_cast<std::int64_t>(dim_.d());
    return Rational(2 * s * s) / Rational(d * d * d);
  }

  double value(std::size_t row, std::size_t col) const {
    const auto s = static_cast<double>(alpha_sum(row, col));
    const auto d = static_cast<double>(dim_.d());
    return 2.0 * s * s / (d * d * d);
  }

  /// f^{ij}_{kl} addressed by the pair members.
  double operator()(std::size_t i, std::size_t j, std::size_t k,
                    std::size_t l) const {
    return value(pair_index(i, j), pair_index(k, l));
  }

  /// Columns with nonzero entries in the given row.
  const std::vector<std::size_t>& support(std::size_t row) const {
    return support_[row];
  }

  friend bool operator==(const FCoefficientTable& a,
                         const FCoefficientTable& b) {
    return a.dim_ == b.dim_ && a.alpha_sums_ == b.alpha_sums_;
  }

 private:
  Dim dim_;
  std::vector<std::int64_t> alpha_sums_;
  std::vector<std::vector<std::size_t>> support_;
};

/// Literal alpha-sum, reading the signs alpha_i = sqrt(d) <i|alpha> off the
/// Walsh-Hadamard matrix.
inline FCoefficientTable f_coeff_literal(Dim dim) {
  const std::size_t d = dim.d();
  const Operator w = walsh_hadamard(dim);
  const double root_d = std::sqrt(static_cast<double>(d));
  std::vector<int> sign(d * d);  // sign[i * d + alpha]
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t a = 0; a < d; ++a) {
      const double s = root_d * w(static_cast<Eigen::Index>(i),
                                  static_cast<Eigen::Index>(a)).real();
      sign[i * d + a] = s > 0 ? 1 : -1;
    }
  }
  const std::size_t n = dim.pairs();
  std::vector<std::int64_t> sums(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto [i, j] = pair_from_index(r);
    for (std::size_t c = 0; c < n; ++c) {
      const auto [k, l] = pair_from_index(c);
      std::int64_t acc = 0;
      for (std::size_t a = 0; a < d; ++a) {
        acc += sign[i * d + a] * sign[j * d + a] * sign[k * d + a] *
               sign[l * d + a];
      }
      sums[r * n + c] = acc;
    }
  }
  return FCoefficientTable(dim, std::move(sums));
}

/// Shortcut: the alpha-sum equals d when i^j == k^l and vanishes otherwise.
inline FCoefficientTable f_coeff_xor(Dim dim) {
  const std::size_t n = dim.pairs();
  const auto d = static_cast<std::int64_t>(dim.d());
  std::vector<std::int64_t> sums(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto [i, j] = pair_from_index(r);
    for (std::size_t c = 0; c < n; ++c) {
      const auto [k, l] = pair_from_index(c);
      sums[r * n + c] = ((i ^ j) == (k ^ l)) ? d : 0;
    }
  }
  return FCoefficientTable(dim, std::move(sums));
}

/// The f table, computed by the literal sum and cross-checked against the
/// XOR-class shortcut. Squares are compared, so a sign flip in the alpha-sum
/// is not a disagreement.
inline FCoefficientTable f_coeff(Dim dim) {
  FCoefficientTable literal = f_coeff_literal(dim);
  const FCoefficientTable shortcut = f_coeff_xor(dim);
  const std::size_t n = dim.pairs();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const std::int64_t a = literal.alpha_sum(r, c);
      const std::int64_t b = shortcut.alpha_sum(r, c);
      if (a * a != b * b) {
        throw ConsistencyError("f_coeff: literal and XOR-class routes disagree");
      }
    }
  }
  return literal;
}

// ---------------------------------------------------------------------------

/// p_ell = (d^{ell+1} + d^ell - 2) / (d^{2 ell} (d - 1)).
inline Rational p_ell_exact(Dim dim, int ell) {
  detail::require_positive_ell(ell, "p_ell");
  const Rational d = static_cast<long long>(dim.d());
  const Rational dl = rational_pow(d, ell);
  return (dl * d + dl - 2) / (dl * dl * (d - 1));
}

/// q_ell = 2 (d^ell - 1) / (d^{2 ell} (d - 1)).
inline Rational q_ell_exact(Dim dim, int ell) {
  detail::require_positive_ell(ell, "q_ell");
  const Rational d = static_cast<long long>(dim.d());
  const Rational dl = rational_pow(d, ell);
  return 2 * (dl - 1) / (dl * dl * (d - 1));
}

inline double p_ell(Dim dim, int ell) { return to_double(p_ell_exact(dim, ell)); }
inline double q_ell(Dim dim, int ell) { return to_double(q_ell_exact(dim, ell)); }

/// Coefficients of
///   R^ell(|phi+><phi+|) = a+ (I + F) + b+ L0 + c+ sum_kl f |phi+_kl><phi+_kl|
///   R^ell(|phi-><phi-|) = a- (I - F) + c- sum_kl f |phi-_kl><phi-_kl|
template <typename Scalar>
struct BasicRecurrenceCoefficients {
  Scalar a_plus;
  Scalar b_plus;
  Scalar c_plus;
  Scalar a_minus;
  Scalar c_minus;
};

using RecurrenceCoefficients = BasicRecurrenceCoefficients<double>;
using ExactRecurrenceCoefficients = BasicRecurrenceCoefficients<Rational>;

/// Iterates the one-step recurrence from the ell = 1 seeds.
inline ExactRecurrenceCoefficients recurrence_iterated(Dim dim, int ell) {
  detail::require_positive_ell(ell, "recurrence_iterated");
  const Rational d = static_cast<long long>(dim.d());
  ExactRecurrenceCoefficients c{(1 - 2 / d) / (d * d), 2 / (d * d * d), 1 / d,
                                1 / (d * d), 1 / d};
  for (int step = 1; step < ell; ++step) {
    ExactRecurrenceCoefficients next;
    next.a_plus = c.a_plus + (1 - 1 / d) * c.b_plus / d +
                  (1 - 2 / d) * c.c_plus / (d * d);
    next.b_plus = c.b_plus / (d * d) + 2 * c.c_plus / (d * d * d);
    next.c_plus = c.c_plus / d;
    next.a_minus = c.a_minus + c.c_minus / (d * d);
    next.c_minus = c.c_minus / d;
    c = next;
  }
  return c;
}

/// Closed-form solution of the same recurrence.
inline ExactRecurrenceCoefficients recurrence_closed_form(Dim dim, int ell) {
  detail::require_positive_ell(ell, "recurrence_closed_form");
  const Rational d = static_cast<long long>(dim.d());
  const Rational dl = rational_pow(d, ell);
  ExactRecurrenceCoefficients c;
  c.a_plus = 1 / (d * (d + 1)) - (dl * d + dl - 2) / (dl * dl * d * (d * d - 1));
  c.b_plus = 2 * (dl - 1) / (dl * dl * d * (d - 1));
  c.c_plus = 1 / dl;
  c.a_minus = (1 - 1 / dl) / (d * (d - 1));
  c.c_minus = 1 / dl;
  return c;
}

/// Closed-form coefficients, after asserting that the iterated recurrence
/// reproduces them to 1e-13 in double precision.
inline RecurrenceCoefficients recurrence_coeffs(Dim dim, int ell) {
  const auto iterated = recurrence_iterated(dim, ell);
  const auto closed = recurrence_closed_form(dim, ell);
  const RecurrenceCoefficients out{
      to_double(closed.a_plus), to_double(closed.b_plus),
      to_double(closed.c_plus), to_double(closed.a_minus),
      to_double(closed.c_minus)};
  const double diffs[] = {
      std::abs(to_double(iterated.a_plus) - out.a_plus),
      std::abs(to_double(iterated.b_plus) - out.b_plus),
      std::abs(to_double(iterated.c_plus) - out.c_plus),
      std::abs(to_double(iterated.a_minus) - out.a_minus),
      std::abs(to_double(iterated.c_minus) - out.c_minus)};
  for (double diff : diffs) {
    if (!(diff <= 1e-13)) {
      throw ConsistencyError(
          "recurrence_coeffs: iterated and closed forms disagree by " +
          std::to_string(diff));
    }
  }
  return out;
}

}  // namespace udesign
