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

#include <Eigen/Dense>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "udesign/errors.hpp"

namespace udesign {

using Complex = std::complex<double>;

/// Dense complex matrix used for states, projectors and Choi matrices.
/// Entry (r, c) of a two-copy operator refers to |r><c| with
/// r = i * d + j for the product state |i>|j>.
using Operator =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using StateVector = Eigen::VectorXcd;

inline constexpr std::size_t kMaxOperatorSide = std::size_t{1} << 16;

/// Number of qubits N together with the Hilbert-space dimension d = 2^N.
class Dim {
 public:
  static constexpr int kMaxQubits = 15;

  explicit Dim(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
      throw DomainError(
          "Dim: qubit count must lie in [1, " + std::to_string(kMaxQubits) +
          "], got " + std::to_string(n_qubits));
    }
  }

  static Dim from_dimension(std::size_t d) {
    if (d < 2 || !std::has_single_bit(d)) {
      throw DomainError(
          "Dim: dimension must be a power of two >= 2, got " +
          std::to_string(d));
    }
    return Dim(std::countr_zero(d));
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t d() const { return std::size_t{1} << n_qubits_; }
  /// Side length of operators on the two-copy space.
  std::size_t d2() const { return d() * d(); }
  /// Number of unordered pairs i > j.
  std::size_t pairs() const { return d() * (d() - 1) / 2; }

  friend bool operator==(Dim, Dim) = default;

 private:
  int n_qubits_;
};

inline Operator identity(std::size_t side) {
  return Operator::Identity(static_cast<Eigen::Index>(side),
                            static_cast<Eigen::Index>(side));
}

/// |r><c| on a space of the given side length.
inline Operator matrix_unit(std::size_t side, std::size_t r, std::size_t c) {
  Operator out = Operator::Zero(static_cast<Eigen::Index>(side),
                                static_cast<Eigen::Index>(side));
  out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = 1.0;
  return out;
}

inline Operator projector(const StateVector& v) { return v * v.adjoint(); }

inline double max_abs(const Operator& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const Operator& a, const Operator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shape mismatch");
  }
  return max_abs(a - b);
}

/// max |A - A^dagger| entrywise.
inline double hermiticity_defect(const Operator& a) {
  return max_abs(a - a.adjoint());
}

inline bool is_hermitian(const Operator& a, double tol = 1e-12) {
  return a.rows() == a.cols() && hermiticity_defect(a) <= tol;
}

inline bool all_finite(const Operator& a) {
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      if (!std::isfinite(a(r, c).real()) || !std::isfinite(a(r, c).imag())) {
        return false;
      }
    }
  }
  return true;
}

/// Kronecker product; entry (i*b.rows()+k, j*b.cols()+l) = a(i,j) * b(k,l).
inline Operator tensor_product(const Operator& a, const Operator& b,
                               std::size_t max_side = kMaxOperatorSide) {
  const auto rows = static_cast<std::size_t>(a.rows() * b.rows());
  const auto cols = static_cast<std::size_t>(a.cols() * b.cols());
  if (rows > max_side || cols > max_side) {
    throw SizeError("tensor_product: result side " + std::to_string(rows) +
                    " exceeds limit " + std::to_string(max_side));
  }
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Sum of singular values.
///
/// Hermitian input (defect <= 1e-10) goes through a self-adjoint eigensolve
/// on the Hermitian part; anything else falls back to an SVD.
inline double trace_norm(const Operator& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("trace_norm: operator is not square");
  }
  if (!all_finite(a)) {
    throw NumericError("trace_norm: non-finite entries");
  }
  if (a.size() == 0) return 0.0;
  if (hermiticity_defect(a) <= 1e-10) {
    const Eigen::MatrixXcd herm = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().sum();
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues().sum();
}

/// Smallest eigenvalue of the Hermitian part.
inline double min_eigenvalue(const Operator& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("min_eigenvalue: operator is not square");
  }
  const Eigen::MatrixXcd herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

/// Trace out one factor of a bipartite operator on C^da (x) C^db.
/// `keep_first == true` returns tr_B, otherwise tr_A.
inline Operator partial_trace(const Operator& x, std::size_t da, std::size_t db,
                              bool keep_first) {
  if (static_cast<std::size_t>(x.rows()) != da * db ||
      static_cast<std::size_t>(x.cols()) != da * db) {
    throw DimensionError("partial_trace: operator side != da * db");
  }
  const auto a_dim = static_cast<Eigen::Index>(da);
  const auto b_dim = static_cast<Eigen::Index>(db);
  if (keep_first) {
    Operator out = Operator::Zero(a_dim, a_dim);
    for (Eigen::Index i = 0; i < a_dim; ++i)
      for (Eigen::Index j = 0; j < a_dim; ++j)
        for (Eigen::Index k = 0; k < b_dim; ++k)
          out(i, j) += x(i * b_dim + k, j * b_dim + k);
    return out;
  }
  Operator out = Operator::Zero(b_dim, b_dim);
  for (Eigen::Index k = 0; k < b_dim; ++k)
    for (Eigen::Index l = 0; l < b_dim; ++l)
      for (Eigen::Index i = 0; i < a_dim; ++i)
        out(k, l) += x(i * b_dim + k, i * b_dim + l);
  return out;
}

/// Sign (-1)^{popcount(i & alpha)} of the Hadamard-basis overlap
/// sqrt(d) <i|alpha>.
inline int hadamard_sign(std::size_t i, std::size_t alpha) {
  return (std::popcount(i & alpha) & 1) ? -1 : 1;
}

/// H^{(x)N}: real, symmetric and involutory.
inline Operator walsh_hadamard(Dim dim) {
  const std::size_t d = dim.d();
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  Operator out(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t a = 0; a < d; ++a) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) =
          scale * hadamard_sign(i, a);
    }
  }
  return out;
}

namespace detail {

// Unnormalised in-place Walsh-Hadamard butterfly over `n` strided elements.
inline void fwht_strided(Complex* data, std::size_t n, std::size_t stride) {
  for (std::size_t half = 1; half < n; half <<= 1) {
    for (std::size_t start = 0; start < n; start += 2 * half) {
      for (std::size_t k = start; k < start + half; ++k) {
        const Complex u = data[k * stride];
        const Complex v = data[(k + half) * stride];
        data[k * stride] = u + v;
        data[(k + half) * stride] = u - v;
      }
    }
  }
}

}  // namespace detail

/// x <- W x W with W the normalised Walsh-Hadamard matrix of side x.rows().
/// On the two-copy space W = H^{(x)N} (x) H^{(x)N}, so this is conjugation by
/// the Hadamard transform on both copies. O(D^2 log D).
inline void hadamard_conjugate_inplace(Operator& x) {
  const auto side = static_cast<std::size_t>(x.rows());
  if (x.rows() != x.cols() || !std::has_single_bit(side)) {
    throw DimensionError(
        "hadamard_conjugate: side must be a power of two and square");
  }
  Complex* data = x.data();
  for (std::size_t r = 0; r < side; ++r) {
    detail::fwht_strided(data + r * side, side, 1);
  }
  for (std::size_t c = 0; c < side; ++c) {
    detail::fwht_strided(data + c, side, side);
  }
  x /= static_cast<double>(side);
}

// ---------------------------------------------------------------------------
// Pair basis {|ii>} u {|phi+_ij>} u {|phi-_ij>} of H (x) H.

/// Position of the pair (i, j), i > j, in lexicographic order.
inline std::size_t pair_index(std::size_t i, std::size_t j) {
  return i * (i - 1) / 2 + j;
}

/// Inverse of pair_index.
inline std::array<std::size_t, 2> pair_from_index(std::size_t index) {
  std::size_t i = 1;
  while ((i + 1) * i / 2 <= index) ++i;
  return {i, index - i * (i - 1) / 2};
}

struct PairBasisIndex {
  enum class Kind { diag, sym, anti };

  Kind kind;
  std::size_t i;
  std::size_t j;  // equals i for Kind::diag

  static PairBasisIndex diag(std::size_t i) { return {Kind::diag, i, i}; }
  static PairBasisIndex sym(std::size_t i, std::size_t j) {
    return {Kind::sym, i, j};
  }
  static PairBasisIndex anti(std::size_t i, std::size_t j) {
    return {Kind::anti, i, j};
  }

  /// Position in the frozen order: diagonals, then phi+, then phi-.
  std::size_t ordinal(std::size_t d) const {
    switch (kind) {
      case Kind::diag:
        return i;
      case Kind::sym:
        return d + pair_index(i, j);
      case Kind::anti:
        break;
    }
    return d + d * (d - 1) / 2 + pair_index(i, j);
  }

  static PairBasisIndex from_ordinal(std::size_t ordinal, std::size_t d) {
    const std::size_t pairs = d * (d - 1) / 2;
    if (ordinal < d) return diag(ordinal);
    if (ordinal < d + pairs) {
      const auto [i, j] = pair_from_index(ordinal - d);
      return sym(i, j);
    }
    const auto [i, j] = pair_from_index(ordinal - d - pairs);
    return anti(i, j);
  }

  friend bool operator==(const PairBasisIndex&,
                         const PairBasisIndex&) = default;
};

struct PairBasisElement {
  PairBasisIndex index;
  StateVector state;
};

/// The d^2 orthonormal pair-basis vectors in frozen order.
inline std::vector<PairBasisElement> pair_basis(Dim dim) {
  const std::size_t d = dim.d();
  const auto side = static_cast<Eigen::Index>(dim.d2());
  const double r2 = 1.0 / std::sqrt(2.0);
  std::vector<PairBasisElement> out;
  out.reserve(dim.d2());
  for (std::size_t i = 0; i < d; ++i) {
    StateVector v = StateVector::Zero(side);
    v(static_cast<Eigen::Index>(i * d + i)) = 1.0;
    out.push_back({PairBasisIndex::diag(i), std::move(v)});
  }
  for (int sign : {+1, -1}) {
    for (std::size_t i = 1; i < d; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        StateVector v = StateVector::Zero(side);
        v(static_cast<Eigen::Index>(i * d + j)) = r2;
        v(static_cast<Eigen::Index>(j * d + i)) = sign * r2;
        out.push_back({sign > 0 ? PairBasisIndex::sym(i, j)
                                : PairBasisIndex::anti(i, j),
                       std::move(v)});
      }
    }
  }
  return out;
}

/// Change of basis between the computational product basis and the pair
/// basis, exploiting that every pair-basis vector has at most two nonzero
/// amplitudes. With B the real orthogonal matrix whose columns are the
/// pair-basis vectors, to_pair(X) = B^T X B and from_pair(Y) = B Y B^T.
class PairBasisTransform {
 public:
  explicit PairBasisTransform(Dim dim) : dim_(dim) {
    const std::size_t d = dim.d();
    const std::size_t side = dim.d2();
    const double r2 = 1.0 / std::sqrt(2.0);
    columns_.resize(side);
    rows_.resize(side);
    auto add = [&](std::size_t ordinal, std::size_t position, double value) {
      columns_[ordinal].push_back({position, value});
      rows_[position].push_back({ordinal, value});
    };
    for (std::size_t i = 0; i < d; ++i) add(i, i * d + i, 1.0);
    for (std::size_t i = 1; i < d; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        const std::size_t sym = PairBasisIndex::sym(i, j).ordinal(d);
        const std::size_t anti = PairBasisIndex::anti(i, j).ordinal(d);
        add(sym, i * d + j, r2);
        add(sym, j * d + i, r2);
        add(anti, i * d + j, r2);
        add(anti, j * d + i, -r2);
      }
    }
  }

  Dim dim() const { return dim_; }

  /// Matrix elements <p| X |q> for p, q in the pair basis.
  Operator to_pair(const Operator& x) const {
    check(x);
    const auto side = static_cast<Eigen::Index>(dim_.d2());
    Operator tmp = Operator::Zero(side, side);
    for (Eigen::Index a = 0; a < side; ++a) {
      for (std::size_t q = 0; q < columns_.size(); ++q) {
        Complex acc = 0.0;
        for (const auto& e : columns_[q])
          acc += x(a, static_cast<Eigen::Index>(e.index)) * e.value;
        tmp(a, static_cast<Eigen::Index>(q)) = acc;
      }
    }
    Operator out = Operator::Zero(side, side);
    for (std::size_t p = 0; p < columns_.size(); ++p) {
      for (const auto& e : columns_[p]) {
        out.row(static_cast<Eigen::Index>(p)) +=
            e.value * tmp.row(static_cast<Eigen::Index>(e.index));
      }
    }
    return out;
  }

  /// Inverse of to_pair.
  Operator from_pair(const Operator& y) const {
    check(y);
    const auto side = static_cast<Eigen::Index>(dim_.d2());
    Operator tmp = Operator::Zero(side, side);
    for (Eigen::Index p = 0; p < side; ++p) {
      for (std::size_t b = 0; b < rows_.size(); ++b) {
        Complex acc = 0.0;
        for (const auto& e : rows_[b])
          acc += y(p, static_cast<Eigen::Index>(e.index)) * e.value;
        tmp(p, static_cast<Eigen::Index>(b)) = acc;
      }
    }
    Operator out = Operator::Zero(side, side);
    for (std::size_t a = 0; a < rows_.size(); ++a) {
      for (const auto& e : rows_[a]) {
        out.row(static_cast<Eigen::Index>(a)) +=
            e.value * tmp.row(static_cast<Eigen::Index>(e.index));
      }
    }
    return out;
  }

  /// Computational-basis operator B diag(v) B^T for a pair-basis diagonal v.
  Operator from_pair_diagonal(const Eigen::VectorXcd& v) const {
    const auto side = static_cast<Eigen::Index>(dim_.d2());
    if (v.size() != side) {
      throw DimensionError("from_pair_diagonal: vector length != d^2");
    }
    Operator out = Operator::Zero(side, side);
    for (std::size_t p = 0; p < columns_.size(); ++p) {
      const Complex w = v(static_cast<Eigen::Index>(p));
      if (w == 0.0) continue;
      for (const auto& a : columns_[p])
        for (const auto& b : columns_[p])
          out(static_cast<Eigen::Index>(a.index),
              static_cast<Eigen::Index>(b.index)) += w * a.value * b.value;
    }
    return out;
  }

  /// Diagonal <p|X|p> in the pair basis.
  Eigen::VectorXcd pair_diagonal(const Operator& x) const {
    check(x);
    Eigen::VectorXcd out(static_cast<Eigen::Index>(columns_.size()));
    for (std::size_t p = 0; p < columns_.size(); ++p) {
      Complex acc = 0.0;
      for (const auto& a : columns_[p])
        for (const auto& b : columns_[p])
          acc += a.value * b.value *
                 x(static_cast<Eigen::Index>(a.index),
                   static_cast<Eigen::Index>(b.index));
      out(static_cast<Eigen::Index>(p)) = acc;
    }
    return out;
  }

  /// |p><q| for pair-basis ordinals p, q, in the computational basis.
  Operator unit(std::size_t p, std::size_t q) const {
    const auto side = static_cast<Eigen::Index>(dim_.d2());
    Operator out = Operator::Zero(side, side);
    for (const auto& a : columns_[p])
      for (const auto& b : columns_[q])
        out(static_cast<Eigen::Index>(a.index),
            static_cast<Eigen::Index>(b.index)) += a.value * b.value;
    return out;
  }

 private:
  struct Entry {
    std::size_t index;
    double value;
  };

  void check(const Operator& x) const {
    const auto side = static_cast<Eigen::Index>(dim_.d2());
    if (x.rows() != side || x.cols() != side) {
      throw DimensionError("PairBasisTransform: operator side != d^2");
    }
  }

  Dim dim_;
  std::vector<std::vector<Entry>> columns_;  // nonzeros of column p of B
  std::vector<std::vector<Entry>> rows_;     // nonzeros of row a of B
};

// ---------------------------------------------------------------------------

/// Operators on H (x) H that the moment formulas are written in.
struct CanonicalOps {
  Operator identity2;  // I
  Operator swap;       // F = sum |ij><ji|
  Operator L0;         // sum_i |ii><ii|
  Operator L1;         // sum_{i>j} |phi+_ij><phi+_ij|
  Operator Psym;       // (I + F) / 2
  Operator Panti;      // (I - F) / 2
  Operator PIsym;      // 2 Psym / (d (d + 1))
  Operator PIanti;     // 2 Panti / (d (d - 1))
  Operator Lam0;       // L0 / d
  Operator Lam1;       // L1 / d
};

inline CanonicalOps canonical_ops(Dim dim) {
  const std::size_t d = dim.d();
  const auto side = static_cast<Eigen::Index>(dim.d2());
  const double dd = static_cast<double>(d);
  CanonicalOps ops;
  ops.identity2 = identity(dim.d2());
  ops.swap = Operator::Zero(side, side);
  ops.L0 = Operator::Zero(side, side);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      ops.swap(static_cast<Eigen::Index>(i * d + j),
               static_cast<Eigen::Index>(j * d + i)) = 1.0;
    }
    ops.L0(static_cast<Eigen::Index>(i * d + i),
           static_cast<Eigen::Index>(i * d + i)) = 1.0;
  }
  ops.L1 = Operator::Zero(side, side);
  for (const auto& element : pair_basis(dim)) {
    if (element.index.kind == PairBasisIndex::Kind::sym) {
      ops.L1 += projector(element.state);
    }
  }
  ops.Psym = 0.5 * (ops.identity2 + ops.swap);
  ops.Panti = 0.5 * (ops.identity2 - ops.swap);
  ops.PIsym = ops.Psym * (2.0 / (dd * (dd + 1.0)));
  ops.PIanti = ops.Panti * (2.0 / (dd * (dd - 1.0)));
  ops.Lam0 = ops.L0 / dd;
  ops.Lam1 = ops.L1 / dd;
  return ops;
}

}  // namespace udesign
