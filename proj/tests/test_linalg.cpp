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

#include "udesign/linalg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "test_util.hpp"

namespace udesign {
namespace {

// Naive Kronecker product used as an index-arithmetic oracle.
Operator kron_oracle(const Operator& a, const Operator& b) {
  Operator out = Operator::Zero(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

TEST(Dim, PowersOfTwo) {
  for (int n = 1; n <= 6; ++n) {
    const Dim dim(n);
    EXPECT_EQ(dim.d(), std::size_t{1} << n);
    EXPECT_EQ(dim.d2(), dim.d() * dim.d());
    EXPECT_EQ(Dim::from_dimension(dim.d()), dim);
  }
  EXPECT_THROW(Dim(0), DomainError);
  EXPECT_THROW(Dim::from_dimension(6), DomainError);
  EXPECT_THROW(Dim::from_dimension(1), DomainError);
}

TEST(TensorProduct, IdentityAndDiagonal) {
  EXPECT_EQ(tensor_product(identity(2), identity(2)), identity(4));

  Operator z = Operator::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  const Operator zz = tensor_product(z, z);
  Operator expected = Operator::Zero(4, 4);
  expected.diagonal() << 1.0, -1.0, -1.0, 1.0;
  EXPECT_EQ(zz, expected);
}

TEST(TensorProduct, ProjectorIndexMatchesOracle) {
  const Operator p0 = matrix_unit(2, 0, 0);
  const Operator p1 = matrix_unit(2, 1, 1);
  const Operator got = tensor_product(p0, p1);
  EXPECT_EQ(got, kron_oracle(p0, p1));
  EXPECT_EQ(got(1, 1), Complex(1.0));
  EXPECT_EQ((got.array() != Complex(0.0)).count(), 1);
}

TEST(TensorProduct, RandomRectangularMatchesOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Operator a = testing::random_matrix(3, rng);
    const Operator b = testing::random_matrix(4, rng).topRows(2);
    EXPECT_EQ(tensor_product(a, b), kron_oracle(a, b));
  }
}

TEST(TensorProduct, SizeLimit) {
  EXPECT_THROW(tensor_product(identity(8), identity(8), 32), SizeError);
  EXPECT_NO_THROW(tensor_product(identity(8), identity(4), 32));
}

TEST(TraceNorm, Basics) {
  EXPECT_NEAR(trace_norm(identity(4)), 4.0, 1e-14);
  const CanonicalOps ops = canonical_ops(Dim(1));
  EXPECT_NEAR(trace_norm(ops.PIsym - ops.PIanti), 2.0, 1e-14);

  // Nilpotent, non-Hermitian: single singular value 1.
  EXPECT_NEAR(trace_norm(matrix_unit(2, 0, 1)), 1.0, 1e-14);
}

TEST(TraceNorm, Errors) {
  EXPECT_THROW(trace_norm(Operator::Zero(2, 3)), DimensionError);
  Operator bad = identity(2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(trace_norm(bad), NumericError);
}

TEST(TraceNorm, DominatesAbsTrace) {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const Operator h = testing::random_hermitian(1 + trial % 9, rng);
    EXPECT_GE(trace_norm(h) + 1e-12, std::abs(h.trace()));
  }
}

TEST(TraceNorm, SvdRouteAgreesWithEigenRouteOnNormalMatrix) {
  // A unitary multiple has every singular value equal to |scale|.
  const Operator u = walsh_hadamard(Dim(3)) * Complex(0.0, 2.0);
  EXPECT_NEAR(trace_norm(u), 16.0, 1e-12);
}

TEST(WalshHadamard, SingleQubit) {
  const Operator h = walsh_hadamard(Dim(1));
  const double s = 1.0 / std::sqrt(2.0);
  Operator expected(2, 2);
  expected << s, s, s, -s;
  EXPECT_LE(max_abs_diff(h, expected), 1e-16);
}

TEST(WalshHadamard, RealSymmetricInvolution) {
  for (int n = 1; n <= 4; ++n) {
    const Operator w = walsh_hadamard(Dim(n));
    EXPECT_LE(max_abs_diff(w * w, identity(w.rows())), 1e-14) << n;
    EXPECT_LE(max_abs_diff(w, w.transpose()), 0.0);
    EXPECT_EQ(w.imag().cwiseAbs().maxCoeff(), 0.0);
  }
  const Operator w2 = walsh_hadamard(Dim(2));
  EXPECT_LE((w2.cwiseAbs().array() - 0.5).abs().maxCoeff(), 1e-16);
}

TEST(WalshHadamard, TensorPowerOfSingleQubit) {
  const Operator h = walsh_hadamard(Dim(1));
  const Operator h3 = tensor_product(tensor_product(h, h), h);
  EXPECT_LE(max_abs_diff(h3, walsh_hadamard(Dim(3))), 1e-15);
}

TEST(WalshHadamard, SignCoefficients) {
  const Dim dim(3);
  const Operator w = walsh_hadamard(dim);
  const double root_d = std::sqrt(8.0);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t a = 0; a < 8; ++a) {
      const double alpha_i = root_d * w(static_cast<Eigen::Index>(i),
                                        static_cast<Eigen::Index>(a)).real();
      EXPECT_NEAR(std::abs(alpha_i), 1.0, 1e-14);
      EXPECT_EQ(alpha_i > 0 ? 1 : -1, hadamard_sign(i, a));
    }
  }
}

TEST(WalshHadamard, FastConjugationMatchesDense) {
  Rng rng(5);
  for (int n = 1; n <= 3; ++n) {
    const Dim dim(n);
    const Operator h = walsh_hadamard(dim);
    const Operator hh = tensor_product(h, h);
    const Operator x = testing::random_matrix(dim.d2(), rng);
    Operator fast = x;
    hadamard_conjugate_inplace(fast);
    EXPECT_LE(max_abs_diff(fast, hh * x * hh), 1e-13) << n;
  }
}

TEST(PairBasis, TwoDimensional) {
  const auto basis = pair_basis(Dim(1));
  ASSERT_EQ(basis.size(), 4u);
  const double s = 1.0 / std::sqrt(2.0);
  StateVector e(4);
  e << 1, 0, 0, 0;
  EXPECT_LE((basis[0].state - e).cwiseAbs().maxCoeff(), 0.0);
  e << 0, 0, 0, 1;
  EXPECT_LE((basis[1].state - e).cwiseAbs().maxCoeff(), 0.0);
  e << 0, s, s, 0;  // (|10> + |01>)/sqrt2
  EXPECT_LE((basis[2].state - e).cwiseAbs().maxCoeff(), 1e-16);
  e << 0, -s, s, 0;  // (|10> - |01>)/sqrt2
  EXPECT_LE((basis[3].state - e).cwiseAbs().maxCoeff(), 1e-16);
  EXPECT_EQ(basis[2].index, PairBasisIndex::sym(1, 0));
  EXPECT_EQ(basis[3].index, PairBasisIndex::anti(1, 0));
}

TEST(PairBasis, CountsAndOrder) {
  const Dim dim(2);
  const auto basis = pair_basis(dim);
  ASSERT_EQ(basis.size(), 16u);
  int diag = 0, sym = 0, anti = 0;
  for (std::size_t p = 0; p < basis.size(); ++p) {
    EXPECT_EQ(basis[p].index.ordinal(4), p);
    EXPECT_EQ(PairBasisIndex::from_ordinal(p, 4), basis[p].index);
    switch (basis[p].index.kind) {
      case PairBasisIndex::Kind::diag: ++diag; break;
      case PairBasisIndex::Kind::sym: ++sym; break;
      case PairBasisIndex::Kind::anti: ++anti; break;
    }
  }
  EXPECT_EQ(diag, 4);
  EXPECT_EQ(sym, 6);
  EXPECT_EQ(anti, 6);
  // Lexicographic (i, j), i > j.
  EXPECT_EQ(basis[4].index, PairBasisIndex::sym(1, 0));
  EXPECT_EQ(basis[5].index, PairBasisIndex::sym(2, 0));
  EXPECT_EQ(basis[6].index, PairBasisIndex::sym(2, 1));
  EXPECT_EQ(basis[9].index, PairBasisIndex::sym(3, 2));
}

TEST(PairBasis, SymAntiOrthogonal) {
  const auto basis = pair_basis(Dim(2));
  for (const auto& a : basis) {
    if (a.index.kind != PairBasisIndex::Kind::sym) continue;
    for (const auto& b : basis) {
      if (b.index.kind != PairBasisIndex::Kind::anti) continue;
      EXPECT_EQ(std::abs(a.state.dot(b.state)), 0.0);
    }
  }
}

TEST(PairBasis, OrthonormalResolutionOfIdentity) {
  for (int n = 1; n <= 3; ++n) {
    const Dim dim(n);
    const auto basis = pair_basis(dim);
    Eigen::MatrixXcd b(dim.d2(), dim.d2());
    Operator resolution = Operator::Zero(dim.d2(), dim.d2());
    for (std::size_t p = 0; p < basis.size(); ++p) {
      b.col(static_cast<Eigen::Index>(p)) = basis[p].state;
      resolution += projector(basis[p].state);
    }
    const Eigen::MatrixXcd gram = b.adjoint() * b;
    EXPECT_LE((gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols()))
                  .cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE(max_abs_diff(resolution, identity(dim.d2())), 1e-13);
  }
}

TEST(PairBasisTransform, MatchesDenseChangeOfBasis) {
  Rng rng(77);
  for (int n = 1; n <= 3; ++n) {
    const Dim dim(n);
    const auto basis = pair_basis(dim);
    Operator b(dim.d2(), dim.d2());
    for (std::size_t p = 0; p < basis.size(); ++p)
      b.col(static_cast<Eigen::Index>(p)) = basis[p].state;
    const PairBasisTransform t(dim);
    const Operator x = testing::random_matrix(dim.d2(), rng);
    const Operator y = t.to_pair(x);
    EXPECT_LE(max_abs_diff(y, b.adjoint() * x * b), 1e-13);
    EXPECT_LE(max_abs_diff(t.from_pair(y), x), 1e-13);
    const Eigen::VectorXcd diag = t.pair_diagonal(x);
    EXPECT_LE((diag - y.diagonal()).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LE(max_abs_diff(t.from_pair_diagonal(diag),
                           b * Operator(diag.asDiagonal()) * b.adjoint()),
              1e-13);
    EXPECT_LE(max_abs_diff(t.unit(3, 1),
                           basis[3].state * basis[1].state.adjoint()),
              1e-15);
  }
}

TEST(CanonicalOps, Traces) {
  const CanonicalOps two = canonical_ops(Dim(1));
  EXPECT_NEAR(two.Psym.trace().real(), 3.0, 1e-14);
  EXPECT_NEAR(two.Panti.trace().real(), 1.0, 1e-14);

  const CanonicalOps four = canonical_ops(Dim(2));
  EXPECT_NEAR(four.PIsym.trace().real(), 1.0, 1e-14);
  EXPECT_NEAR(four.PIanti.trace().real(), 1.0, 1e-14);
  EXPECT_NEAR(four.Lam0.trace().real(), 1.0, 1e-14);
}

TEST(CanonicalOps, SymmetricProjectorSplitsIntoL0AndL1) {
  const CanonicalOps ops = canonical_ops(Dim(3));
  EXPECT_LE(trace_norm(ops.Psym - (ops.L0 + ops.L1)), 1e-13);
}

TEST(CanonicalOps, ProjectorAlgebra) {
  for (int n = 1; n <= 3; ++n) {
    const CanonicalOps ops = canonical_ops(Dim(n));
    const Operator& id = ops.identity2;
    EXPECT_LE(max_abs_diff(ops.swap * ops.swap, id), 1e-13);
    EXPECT_LE(max_abs_diff(ops.Psym * ops.Psym, ops.Psym), 1e-13);
    EXPECT_LE(max_abs_diff(ops.Panti * ops.Panti, ops.Panti), 1e-13);
    EXPECT_LE(max_abs(ops.Psym * ops.Panti), 1e-13);
    EXPECT_LE(max_abs_diff(ops.Psym, ops.L0 + ops.L1), 1e-14);
  }
}

TEST(PartialTrace, ProductOperator) {
  Rng rng(3);
  const Operator a = testing::random_matrix(2, rng);
  const Operator b = testing::random_matrix(3, rng);
  const Operator ab = tensor_product(a, b);
  EXPECT_LE(max_abs_diff(partial_trace(ab, 2, 3, true), a * b.trace()), 1e-13);
  EXPECT_LE(max_abs_diff(partial_trace(ab, 2, 3, false), b * a.trace()), 1e-13);
  EXPECT_THROW(partial_trace(ab, 2, 2, true), DimensionError);
}

}  // namespace
}  // namespace udesign
