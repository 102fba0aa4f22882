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

// Physical realisations of the alternating Z/X construction: the commuting
// phase-gate circuit, the piecewise-constant disordered Hamiltonian, and
// their exact or sampled second-moment twirls.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "udesign/errors.hpp"
#include "udesign/linalg.hpp"
#include "udesign/moment_map.hpp"
#include "udesign/parallel.hpp"
#include "udesign/rng.hpp"

namespace udesign {

inline std::size_t qubit_pair_count(int n_qubits) {
  return static_cast<std::size_t>(n_qubits) * (n_qubits - 1) / 2;
}

/// Bit of basis index n belonging to qubit k; qubit 0 is the leftmost
/// tensor factor.
inline int qubit_bit(std::size_t n, int k, int n_qubits) {
  return static_cast<int>((n >> (n_qubits - 1 - k)) & 1u);
}

/// One commuting layer: a phase gate diag(1, e^{i phi_k}) on every qubit and
/// a controlled phase diag(1, 1, 1, e^{i theta_kl}) on every pair k < l.
///
/// Angles are stored as integer codes: phi_k = 2 pi c / 3 with c in {0,1,2},
/// theta_kl = pi c with c in {0,1}. Pairs are ordered lexicographically.
struct ZLayerAssignment {
  int n_qubits = 1;
  std::vector<std::uint8_t> single_codes;
  std::vector<std::uint8_t> pair_codes;

  double single_phase(std::size_t k) const {
    return 2.0 * std::numbers::pi * single_codes.at(k) / 3.0;
  }
  double pair_phase(std::size_t pair) const {
    return std::numbers::pi * pair_codes.at(pair);
  }

  friend bool operator==(const ZLayerAssignment&,
                         const ZLayerAssignment&) = default;
};

inline ZLayerAssignment zero_layer(int n_qubits) {
  return {n_qubits, std::vector<std::uint8_t>(static_cast<std::size_t>(n_qubits), 0),
          std::vector<std::uint8_t>(qubit_pair_count(n_qubits), 0)};
}

inline ZLayerAssignment sample_z_layer(int n_qubits, Rng& rng) {
  if (n_qubits < 1) throw DomainError("sample_z_layer: n_qubits < 1");
  ZLayerAssignment out = zero_layer(n_qubits);
  for (auto& c : out.single_codes) c = static_cast<std::uint8_t>(rng.uniform_below(3));
  for (auto& c : out.pair_codes) c = static_cast<std::uint8_t>(rng.uniform_below(2));
  return out;
}

inline constexpr std::size_t kMaxEnumeration = 1'000'000;

/// 3^N * 2^{N(N-1)/2}.
inline std::size_t z_layer_count(int n_qubits) {
  double count = std::pow(3.0, n_qubits) *
                 std::pow(2.0, static_cast<double>(qubit_pair_count(n_qubits)));
  if (count > static_cast<double>(kMaxEnumeration)) {
    throw SizeError("z-layer enumeration for N = " + std::to_string(n_qubits) +
                    " has " + std::to_string(count) + " elements (limit " +
                    std::to_string(kMaxEnumeration) + ")");
  }
  return static_cast<std::size_t>(count);
}

/// Every assignment exactly once, in mixed-radix order (first single code
/// varies slowest).
inline std::vector<ZLayerAssignment> enumerate_z_layers(int n_qubits) {
  if (n_qubits < 1) throw DomainError("enumerate_z_layers: n_qubits < 1");
  const std::size_t count = z_layer_count(n_qubits);
  std::vector<ZLayerAssignment> out;
  out.reserve(count);
  for (std::size_t index = 0; index < count; ++index) {
    ZLayerAssignment layer = zero_layer(n_qubits);
    std::size_t rest = index;
    for (std::size_t p = layer.pair_codes.size(); p-- > 0;) {
      layer.pair_codes[p] = static_cast<std::uint8_t>(rest % 2);
      rest /= 2;
    }
    for (std::size_t k = layer.single_codes.size(); k-- > 0;) {
      layer.single_codes[k] = static_cast<std::uint8_t>(rest % 3);
      rest /= 3;
    }
    out.push_back(std::move(layer));
  }
  return out;
}

/// Diagonal of the layer unitary. All phases are multiples of pi/3, so the
/// entries are taken from an exact table of sixth roots of unity.
inline Eigen::VectorXcd layer_phases(const ZLayerAssignment& layer) {
  const int n = layer.n_qubits;
  const std::size_t d = std::size_t{1} << n;
  static const std::array<Complex, 6> roots = {
      Complex(1.0, 0.0),
      Complex(0.5, std::numbers::sqrt3 / 2.0),
      Complex(-0.5, std::numbers::sqrt3 / 2.0),
      Complex(-1.0, 0.0),
      Complex(-0.5, -std::numbers::sqrt3 / 2.0),
      Complex(0.5, -std::numbers::sqrt3 / 2.0)};
  Eigen::VectorXcd out(static_cast<Eigen::Index>(d));
  for (std::size_t basis = 0; basis < d; ++basis) {
    // Phase in units of pi/3: 2 per single code, 3 per pair code.
    int units = 0;
    std::size_t pair = 0;
    for (int k = 0; k < n; ++k) {
      const int bk = qubit_bit(basis, k, n);
      units += 2 * layer.single_codes[static_cast<std::size_t>(k)] * bk;
      for (int l = k + 1; l < n; ++l, ++pair) {
        units += 3 * layer.pair_codes[pair] * bk * qubit_bit(basis, l, n);
      }
    }
    out(static_cast<Eigen::Index>(basis)) = roots[static_cast<std::size_t>(units % 6)];
  }
  return out;
}

inline Operator layer_unitary(const ZLayerAssignment& layer) {
  return layer_phases(layer).asDiagonal();
}

/// H L_m ... H L_2 H L_1 for layers L_1..L_m (m = 2 ell + 1), i.e. the
/// Hadamard step follows every phase layer.
inline Operator circuit_unitary(int n_qubits,
                                const std::vector<ZLayerAssignment>& layers) {
  if (layers.empty() || layers.size() % 2 == 0) {
    throw DomainError("circuit_unitary: need an odd number (2 ell + 1) of layers");
  }
  const Dim dim(n_qubits);
  const Operator h = walsh_hadamard(dim);
  Operator u = identity(dim.d());
  for (const auto& layer : layers) {
    if (layer.n_qubits != n_qubits) {
      throw DimensionError("circuit_unitary: layer qubit count mismatch");
    }
    u = h * layer_phases(layer).asDiagonal() * u;
  }
  return u;
}

/// L_m H L_{m-1} ... H L_1: the same layers without the trailing Hadamard.
inline Operator alternating_unitary(int n_qubits,
                                    const std::vector<ZLayerAssignment>& layers) {
  if (layers.empty() || layers.size() % 2 == 0) {
    throw DomainError("alternating_unitary: need an odd number of layers");
  }
  const Dim dim(n_qubits);
  const Operator h = walsh_hadamard(dim);
  Operator u = layer_unitary(layers.front());
  for (std::size_t k = 1; k < layers.size(); ++k) {
    u = layer_phases(layers[k]).asDiagonal() * (h * u);
  }
  return u;
}

/// |tr(U^dagger V)|; equals d iff U and V agree up to a global phase.
inline double phase_insensitive_overlap(const Operator& u, const Operator& v) {
  return std::abs((u.adjoint() * v).trace());
}

// ---------------------------------------------------------------------------
// Diagonal twirls.

/// Twirl of an ensemble of Z-diagonal unitaries with phases v. It acts
/// entrywise: |ij><kl| -> E[v_i v_j conj(v_k v_l)] |ij><kl|.
class DiagonalTwirl {
 public:
  explicit DiagonalTwirl(Dim dim)
      : dim_(dim),
        multiplier_(Operator::Zero(static_cast<Eigen::Index>(dim.d2()),
                                   static_cast<Eigen::Index>(dim.d2()))) {}

  DiagonalTwirl(Dim dim, Operator multiplier)
      : dim_(dim), multiplier_(std::move(multiplier)) {
    const auto side = static_cast<Eigen::Index>(dim.d2());
    if (multiplier_.rows() != side || multiplier_.cols() != side) {
      throw DimensionError("DiagonalTwirl: multiplier side != d^2");
    }
  }

  Dim dim() const { return dim_; }
  const Operator& multiplier() const { return multiplier_; }

  /// Per-element multiplier v_i v_j conj(v_k v_l).
  static Operator element(const Eigen::VectorXcd& phases) {
    const Eigen::Index d = phases.size();
    Eigen::VectorXcd pair(d * d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) pair(i * d + j) = phases(i) * phases(j);
    return pair * pair.adjoint();
  }

  MomentMap as_map(std::string label) const {
    auto m = std::make_shared<const Operator>(multiplier_);
    return MomentMap(dim_, std::move(label), [m](const Operator& x) {
      return Operator(m->cwiseProduct(x));
    });
  }

 private:
  Dim dim_;
  Operator multiplier_;
};

/// Diagonal twirls store only d^4 multipliers, so they reach one size
/// further than full moment matrices.
inline constexpr std::size_t kMaxTwirlDimension = 16;

namespace detail {

inline void require_twirl_envelope(Dim dim, const char* where) {
  if (dim.d() > kMaxTwirlDimension) {
    throw SizeError(std::string(where) + ": d = " + std::to_string(dim.d()) +
                    " exceeds twirl envelope d <= " +
                    std::to_string(kMaxTwirlDimension));
  }
}

}  // namespace detail

/// 0/1 multiplier of the exact random-phase twirl (the multiset rule).
inline DiagonalTwirl g_z_multiplier(Dim dim) {
  const std::size_t d = dim.d();
  Operator m = Operator::Zero(static_cast<Eigen::Index>(dim.d2()),
                              static_cast<Eigen::Index>(dim.d2()));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const auto r = static_cast<Eigen::Index>(i * d + j);
      m(r, r) = 1.0;
      m(r, static_cast<Eigen::Index>(j * d + i)) = 1.0;
    }
  }
  return DiagonalTwirl(dim, std::move(m));
}

/// Exact twirl of a single circuit layer, averaged over all
/// 3^N 2^{N(N-1)/2} assignments.
inline DiagonalTwirl layer_twirl_exact(int n_qubits) {
  const Dim dim(n_qubits);
  detail::require_twirl_envelope(dim, "layer_twirl_exact");
  const auto layers = enumerate_z_layers(n_qubits);
  Operator acc = Operator::Zero(static_cast<Eigen::Index>(dim.d2()),
                                static_cast<Eigen::Index>(dim.d2()));
  for (const auto& layer : layers) acc += DiagonalTwirl::element(layer_phases(layer));
  return DiagonalTwirl(dim, acc / static_cast<double>(layers.size()));
}

/// Moment map of one circuit layer, computed by exhaustive enumeration.
inline MomentMap ensemble_moment_exact(int n_qubits) {
  return layer_twirl_exact(n_qubits).as_map("layer");
}

// ---------------------------------------------------------------------------
// Disordered Hamiltonian segments.

enum class SegmentBasis { z, x };

inline constexpr double kDefaultCouplingValue = 0.25;

/// Piecewise-constant Hamiltonian slice of duration pi:
///   -sum_i B_i W_i - sum_{k<l} J_kl W_k W_l,  W = Z or X,
/// with B_i in {0, +1/3, -1/3} and J_kl in {0, j_star}.
struct HamiltonianSegment {
  SegmentBasis basis = SegmentBasis::z;
  int n_qubits = 1;
  std::vector<double> fields;
  std::vector<double> couplings;
};

inline HamiltonianSegment sample_segment(int n_qubits, SegmentBasis basis,
                                         double j_star, Rng& rng) {
  static constexpr double kFieldValues[] = {0.0, 1.0 / 3.0, -1.0 / 3.0};
  HamiltonianSegment seg{basis, n_qubits, {}, {}};
  seg.fields.resize(static_cast<std::size_t>(n_qubits));
  seg.couplings.resize(qubit_pair_count(n_qubits));
  for (auto& b : seg.fields) b = kFieldValues[rng.uniform_below(3)];
  for (auto& j : seg.couplings) j = rng.uniform_below(2) ? j_star : 0.0;
  return seg;
}

/// Every Z-basis segment for the given coupling value, in mixed-radix order.
inline std::vector<HamiltonianSegment> enumerate_segments(int n_qubits,
                                                          double j_star) {
  static constexpr double kFieldValues[] = {0.0, 1.0 / 3.0, -1.0 / 3.0};
  const std::size_t count = z_layer_count(n_qubits);
  std::vector<HamiltonianSegment> out;
  out.reserve(count);
  for (std::size_t index = 0; index < count; ++index) {
    HamiltonianSegment seg{SegmentBasis::z, n_qubits, {}, {}};
    seg.fields.resize(static_cast<std::size_t>(n_qubits));
    seg.couplings.resize(qubit_pair_count(n_qubits));
    std::size_t rest = index;
    for (std::size_t p = seg.couplings.size(); p-- > 0;) {
      seg.couplings[p] = (rest % 2) ? j_star : 0.0;
      rest /= 2;
    }
    for (std::size_t k = seg.fields.size(); k-- > 0;) {
      seg.fields[k] = kFieldValues[rest % 3];
      rest /= 3;
    }
    out.push_back(std::move(seg));
  }
  return out;
}

/// Eigenphases of exp(-i pi H) for the Z-basis form of the segment:
/// pi (sum_i B_i z_i + sum_{k<l} J_kl z_k z_l) with z = 1 - 2 n.
inline Eigen::VectorXcd segment_phases(const HamiltonianSegment& seg) {
  const int n = seg.n_qubits;
  const std::size_t d = std::size_t{1} << n;
  Eigen::VectorXcd out(static_cast<Eigen::Index>(d));
  for (std::size_t basis = 0; basis < d; ++basis) {
    double energy = 0.0;
    std::size_t pair = 0;
    for (int k = 0; k < n; ++k) {
      const int zk = 1 - 2 * qubit_bit(basis, k, n);
      energy += seg.fields[static_cast<std::size_t>(k)] * zk;
      for (int l = k + 1; l < n; ++l, ++pair) {
        energy += seg.couplings[pair] * zk * (1 - 2 * qubit_bit(basis, l, n));
      }
    }
    out(static_cast<Eigen::Index>(basis)) = std::polar(1.0, std::numbers::pi * energy);
  }
  return out;
}

/// exp(-i pi H) for one segment. All terms commute, so the Z form is
/// diagonal; the X form is its Hadamard conjugate.
inline Operator hamiltonian_segment(const HamiltonianSegment& seg) {
  if (seg.fields.size() != static_cast<std::size_t>(seg.n_qubits) ||
      seg.couplings.size() != qubit_pair_count(seg.n_qubits)) {
    throw DimensionError("hamiltonian_segment: field/coupling count mismatch");
  }
  Operator u = segment_phases(seg).asDiagonal();
  if (seg.basis == SegmentBasis::x) {
    const Operator h = walsh_hadamard(Dim(seg.n_qubits));
    u = h * u * h;
  }
  return u;
}

/// Exact twirl of a single Z-basis segment over all field/coupling draws.
inline DiagonalTwirl segment_twirl_exact(int n_qubits, double j_star) {
  const Dim dim(n_qubits);
  detail::require_twirl_envelope(dim, "segment_twirl_exact");
  const auto segments = enumerate_segments(n_qubits, j_star);
  Operator acc = Operator::Zero(static_cast<Eigen::Index>(dim.d2()),
                                static_cast<Eigen::Index>(dim.d2()));
  for (const auto& seg : segments) acc += DiagonalTwirl::element(segment_phases(seg));
  return DiagonalTwirl(dim, acc / static_cast<double>(segments.size()));
}

/// Segment bookkeeping for ell repetitions: Z and X segments alternate,
/// starting and ending with Z, so 2 ell + 1 slices of duration pi.
struct SegmentSchedule {
  int z_segments;
  int x_segments;
  double duration;  // in units where hbar = 1

  int total() const { return z_segments + x_segments; }
};

inline SegmentSchedule segment_schedule(int ell) {
  detail::require_positive_ell(ell, "segment_schedule");
  return {ell + 1, ell, (2.0 * ell + 1.0) * std::numbers::pi};
}

// ---------------------------------------------------------------------------
// Ensemble specification and sampling.

enum class EnsembleKind { circuit, hamiltonian, continuous };

inline const char* to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::circuit:
      return "circuit";
    case EnsembleKind::hamiltonian:
      return "hamiltonian";
    case EnsembleKind::continuous:
      break;
  }
  return "continuous";
}

struct EnsembleSpec {
  int n_qubits = 2;
  int ell = 1;
  EnsembleKind kind = EnsembleKind::circuit;
  std::uint64_t seed = 0;
  std::size_t samples = 100000;
  double j_star = kDefaultCouplingValue;
};

/// Product of alternating Z and X segments with fresh draws per segment,
/// ordered left to right as Z_{ell+1} X_ell Z_ell ... X_1 Z_1.
inline Operator hamiltonian_unitary(const EnsembleSpec& spec, Rng& rng) {
  if (spec.kind != EnsembleKind::hamiltonian) {
    throw DomainError("hamiltonian_unitary: spec.kind must be hamiltonian");
  }
  const SegmentSchedule schedule = segment_schedule(spec.ell);
  const Dim dim(spec.n_qubits);
  Operator u = identity(dim.d());
  for (int slot = 0; slot < schedule.total(); ++slot) {
    const SegmentBasis basis = (slot % 2 == 0) ? SegmentBasis::z : SegmentBasis::x;
    u = hamiltonian_segment(sample_segment(spec.n_qubits, basis, spec.j_star, rng)) * u;
  }
  return u;
}

/// Phases of one diagonal draw of the given kind: a circuit layer, a Z-basis
/// Hamiltonian segment, or independent uniform phases in [0, 2 pi).
inline Eigen::VectorXcd sample_diagonal_phases(const EnsembleSpec& spec, Rng& rng) {
  switch (spec.kind) {
    case EnsembleKind::circuit:
      return layer_phases(sample_z_layer(spec.n_qubits, rng));
    case EnsembleKind::hamiltonian:
      return segment_phases(
          sample_segment(spec.n_qubits, SegmentBasis::z, spec.j_star, rng));
    case EnsembleKind::continuous:
      break;
  }
  const std::size_t d = std::size_t{1} << spec.n_qubits;
  Eigen::VectorXcd out(static_cast<Eigen::Index>(d));
  for (auto& v : out) v = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform_unit());
  return out;
}

inline constexpr std::size_t kReductionBlock = 1024;

struct MonteCarloTwirl {
  DiagonalTwirl twirl;
  /// max over entries of the standard error of the sample mean.
  double std_error;
  std::size_t samples;
};

/// Sample mean of the diagonal twirl over spec.samples draws. Draw k uses
/// Rng::for_draw(spec.seed, k); draws are summed in fixed blocks and the
/// blocks are reduced in index order, so the result is bitwise identical
/// for any thread count.
inline MonteCarloTwirl ensemble_moment_mc(const EnsembleSpec& spec,
                                          unsigned threads = 1) {
  if (spec.samples < 100) {
    throw DomainError("ensemble_moment_mc: need at least 100 samples");
  }
  const Dim dim(spec.n_qubits);
  detail::require_twirl_envelope(dim, "ensemble_moment_mc");
  const auto side = static_cast<Eigen::Index>(dim.d2());
  const std::size_t blocks = (spec.samples + kReductionBlock - 1) / kReductionBlock;
  std::vector<Operator> sums(blocks);
  std::vector<Eigen::MatrixXd> squares(blocks);
  parallel_for(blocks, threads, [&](std::size_t b) {
    Operator sum = Operator::Zero(side, side);
    Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(side, side);
    const std::size_t end = std::min(spec.samples, (b + 1) * kReductionBlock);
    for (std::size_t k = b * kReductionBlock; k < end; ++k) {
      Rng rng = Rng::for_draw(spec.seed, k);
      const Operator e = DiagonalTwirl::element(sample_diagonal_phases(spec, rng));
      sum += e;
      sq += e.cwiseAbs2();
    }
    sums[b] = std::move(sum);
    squares[b] = std::move(sq);
  });
  Operator total = Operator::Zero(side, side);
  Eigen::MatrixXd total_sq = Eigen::MatrixXd::Zero(side, side);
  for (std::size_t b = 0; b < blocks; ++b) {
    total += sums[b];
    total_sq += squares[b];
  }
  const auto m = static_cast<double>(spec.samples);
  const Operator mean = total / m;
  double worst = 0.0;
  for (Eigen::Index r = 0; r < side; ++r) {
    for (Eigen::Index c = 0; c < side; ++c) {
      const double var = std::max(0.0, (total_sq(r, c) - m * std::norm(mean(r, c))) / (m - 1.0));
      worst = std::max(worst, std::sqrt(var / m));
    }
  }
  return {DiagonalTwirl(dim, mean), worst, spec.samples};
}

// ---------------------------------------------------------------------------
// Full circuit.

/// Twirl of the whole (2 ell + 1)-layer circuit assembled from independent
/// layers: (Ad_H o G_layer)^{2 ell + 1}, where G_layer is the single-layer
/// twirl and Ad_H conjugation by the Hadamard transform.
inline MomentMap circuit_moment_factorized(int n_qubits, int ell) {
  detail::require_positive_ell(ell, "circuit_moment_factorized");
  const Dim dim(n_qubits);
  const MomentMap layer = ensemble_moment_exact(n_qubits);
  const MomentMap block =
      compose(conjugation_map(dim, walsh_hadamard(dim), "Ad_H"), layer);
  return power(block, 2 * ell + 1);
}

/// Monte-Carlo estimate of the whole-circuit moment matrix in the
/// computational unit basis, E[(U (x) U) (x) conj(U (x) U)].
inline Operator circuit_moment_matrix_mc(int n_qubits, int ell,
                                         std::uint64_t seed,
                                         std::size_t samples,
                                         unsigned threads = 1) {
  detail::require_positive_ell(ell, "circuit_moment_matrix_mc");
  const Dim dim(n_qubits);
  if (dim.d() > 4) {
    throw SizeError("circuit_moment_matrix_mc: limited to d <= 4");
  }
  if (samples < 1) throw DomainError("circuit_moment_matrix_mc: samples < 1");
  const auto n = static_cast<Eigen::Index>(dim.d2() * dim.d2());
  const std::size_t blocks = (samples + kReductionBlock - 1) / kReductionBlock;
  std::vector<Operator> sums(blocks);
  const std::size_t layers = static_cast<std::size_t>(2 * ell + 1);
  parallel_for(blocks, threads, [&](std::size_t b) {
    Operator sum = Operator::Zero(n, n);
    const std::size_t end = std::min(samples, (b + 1) * kReductionBlock);
    for (std::size_t k = b * kReductionBlock; k < end; ++k) {
      Rng rng = Rng::for_draw(seed, k);
      std::vector<ZLayerAssignment> circuit;
      circuit.reserve(layers);
      for (std::size_t i = 0; i < layers; ++i) circuit.push_back(sample_z_layer(n_qubits, rng));
      const Operator u = circuit_unitary(n_qubits, circuit);
      const Operator uu = tensor_product(u, u);
      const Operator uu_conj = uu.conjugate();
      sum += tensor_product(uu, uu_conj);
    }
    sums[b] = std::move(sum);
  });
  Operator total = Operator::Zero(n, n);
  for (const auto& s : sums) total += s;
  return total / static_cast<double>(samples);
}

// ---------------------------------------------------------------------------
// Resource counts.

struct EllChoice {
  int ell;
  /// (2 ell + 1) (2 N + N (N - 1) / 2): phase gates, controlled phases and
  /// Hadamards per repetition.
  std::uint64_t gate_count;
  SegmentSchedule schedule;
  /// Upper design-error bound (2/d^ell)(1 + 2/(d-1)) at the chosen ell.
  double upper_bound;
};

inline std::uint64_t circuit_gate_count(int n_qubits, int ell) {
  const auto n = static_cast<std::uint64_t>(n_qubits);
  return static_cast<std::uint64_t>(2 * ell + 1) * (2 * n + n * (n - 1) / 2);
}

/// Smallest ell with (2/d^ell)(1 + 2/(d-1)) <= epsilon. Epsilon values
/// already met at ell = 1 return 1.
inline EllChoice ell_for_epsilon(int n_qubits, double epsilon) {
  if (n_qubits < 1) throw DomainError("ell_for_epsilon: n_qubits < 1");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw DomainError("ell_for_epsilon: epsilon must be positive and finite");
  }
  const double d = std::ldexp(1.0, n_qubits);
  const double factor = 2.0 * (1.0 + 2.0 / (d - 1.0));
  int ell = 1;
  double bound = factor / d;
  while (bound > epsilon) {
    ++ell;
    bound = factor * std::pow(d, -ell);
  }
  return {ell, circuit_gate_count(n_qubits, ell), segment_schedule(ell), bound};
}

}  // namespace udesign
