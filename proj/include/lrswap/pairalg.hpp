#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "check.hpp"
#include "errors.hpp"
#include "pair_matrix.hpp"
#include "scalar.hpp"
#include "tensor_operator.hpp"
#include "words.hpp"

namespace lrswap {

/// n-particle calculus generated by the embedded pair matrices B_i, B'_i.
///
/// Index conventions follow the master equations: sites are 1-based,
/// B_0 = B'_0 = identity, and products written B_a ... B_b run from a to b
/// in the stated direction (leftmost factor first).
class PairAlgebra {
 public:
  PairAlgebra(int particles, int species, RuleType rule)
      : space_(species, particles), pairs_(build_pair_matrices(species, rule)) {
    require(particles >= 2, ErrorKind::InvalidParameter, "the pair algebra needs n >= 2");
    space_.require_within_cap();
    jumps_.push_back(BasisMap::identity(space_.size()));
    exchanges_.push_back(BasisMap::identity(space_.size()));
    for (int i = 1; i < particles; ++i) {
      jumps_.push_back(embed(pairs_.jump, i, particles));
      exchanges_.push_back(embed(pairs_.exchange, i, particles));
    }
  }

  int particles() const { return space_.length(); }
  int species() const { return space_.species(); }
  RuleType rule() const { return pairs_.rule; }
  const WordSpace& space() const { return space_; }
  const PairMatrices& pair_matrices() const { return pairs_; }
  std::size_t dim() const { return space_.size(); }

  BasisMap identity() const { return BasisMap::identity(dim()); }

  const BasisMap& jump(int i) const {
    require(i >= 0 && i < particles(), ErrorKind::InvalidParameter, "B_i index out of range");
    return jumps_[static_cast<std::size_t>(i)];
  }
  const BasisMap& exchange(int i) const {
    require(i >= 0 && i < particles(), ErrorKind::InvalidParameter, "B'_i index out of range");
    return exchanges_[static_cast<std::size_t>(i)];
  }

  /// B_from B_{from+-1} ... B_to (inclusive, stepping toward `to`).
  BasisMap jumps(int from, int to) const { return chain(jumps_, from, to); }
  /// B'_from ... B'_to (inclusive, stepping toward `to`).
  BasisMap exchanges(int from, int to) const { return chain(exchanges_, from, to); }

  /// B_hi ... B_lo, identity when hi < lo.
  BasisMap jumps_down(int hi, int lo) const { return hi < lo ? identity() : jumps(hi, lo); }
  /// B'_lo ... B'_hi, identity when hi < lo.
  BasisMap exchanges_up(int lo, int hi) const { return hi < lo ? identity() : exchanges(lo, hi); }

  /// M_ij = B_{j-1} ... B_{i+1} B'_i B'_{i+1} ... B'_{j-1}: exchange of the
  /// i-th and j-th leftmost particles on a packed block.
  BasisMap swap_matrix(int i, int j) const {
    require(1 <= i && i < j && j <= particles(), ErrorKind::InvalidParameter,
            "swap matrix needs 1 <= i < j <= n (got " + std::to_string(i) + "," + std::to_string(j) + ")");
    return jumps_down(j - 1, i + 1) * exchanges_up(i, j - 1);
  }

  /// M_i = B_{i-1} ... B_1: arrival of the leftmost particle of a block of
  /// size i from one site to the left of the block.
  BasisMap arrival_matrix(int i) const {
    require(1 <= i && i <= particles(), ErrorKind::InvalidParameter, "arrival index out of range");
    return jumps_down(i - 1, 1);
  }

  /// M_0 = sum_{i<j} M_ij.
  TensorOperator<Rational> same_shape_matrix() const {
    TensorOperator<Rational> sum(dim());
    for (int i = 1; i < particles(); ++i)
      for (int j = i + 1; j <= particles(); ++j) sum = sum + op(swap_matrix(i, j));
    return sum;
  }

  /// Frak-A_k via the closed form A_k = I + B_{k+1} A_{k-1} B'_k, A_0 = I.
  TensorOperator<Rational> frak_A(int k) const {
    require(0 <= k && k <= particles() - 2, ErrorKind::InvalidParameter,
            "frak_A index must lie in 0..n-2 (got " + std::to_string(k) + ")");
    auto a = TensorOperator<Rational>::identity(dim());
    for (int level = 1; level <= k; ++level) a = TensorOperator<Rational>::identity(dim()) + frak_step(a, level);
    return a;
  }

  /// B_{k+1} X B'_k.
  TensorOperator<Rational> frak_step(const TensorOperator<Rational>& x, int k) const {
    return op(jump(k + 1)) * x * op(exchange(k));
  }

  /// A_k = B_{k+1}(I + A_{k-1})B'_k with A_0 = I (nilpotent of order 2).
  TensorOperator<Rational> nilpotent_A(int k) const {
    require(0 <= k && k <= particles() - 2, ErrorKind::InvalidParameter, "A_k index must lie in 0..n-2");
    auto a = TensorOperator<Rational>::identity(dim());
    for (int level = 1; level <= k; ++level)
      a = frak_step(TensorOperator<Rational>::identity(dim()) + a, level);
    return a;
  }

  static TensorOperator<Rational> op(const BasisMap& m) { return TensorOperator<Rational>::from_basis_map(m); }

 private:
  BasisMap chain(const std::vector<BasisMap>& factors, int from, int to) const {
    const int n = particles();
    require(from >= 1 && from <= n - 1 && to >= 1 && to <= n - 1, ErrorKind::InvalidParameter,
            "chain index out of range");
    BasisMap out = factors[static_cast<std::size_t>(from)];
    const int step = to >= from ? 1 : -1;
    for (int i = from + step; i != to + step; i += step) out = out * factors[static_cast<std::size_t>(i)];
    return out;
  }

  WordSpace space_;
  PairMatrices pairs_;
  std::vector<BasisMap> jumps_;
  std::vector<BasisMap> exchanges_;
};

/// Free-function entry points mirroring the operator catalogue.
inline BasisMap swap_matrix(int i, int j, int particles, int species, RuleType rule) {
  return PairAlgebra(particles, species, rule).swap_matrix(i, j);
}

inline TensorOperator<Rational> frak_A(int k, int particles, int species, RuleType rule) {
  return PairAlgebra(particles, species, rule).frak_A(k);
}

namespace detail {

inline std::string idx(int a) { return std::to_string(a); }
inline std::string idx(int a, int b) { return std::to_string(a) + "," + std::to_string(b); }

inline CheckResult map_equal(std::string name, const std::string& category, const BasisMap& lhs,
                             const BasisMap& rhs, const WordSpace& space) {
  CheckResult r{std::move(name), category, true, std::nullopt, std::nullopt, std::nullopt};
  if (auto w = lhs.first_difference(rhs)) {
    r.pass = false;
    r.witness = space.word(*w);
  }
  return r;
}

inline CheckResult map_zero(std::string name, const std::string& category, const BasisMap& m,
                            const WordSpace& space) {
  CheckResult r{std::move(name), category, true, std::nullopt, std::nullopt, std::nullopt};
  if (auto w = m.first_nonzero_column()) {
    r.pass = false;
    r.witness = space.word(*w);
  }
  return r;
}

inline CheckResult op_equal(std::string name, const std::string& category, const TensorOperator<Rational>& lhs,
                            const TensorOperator<Rational>& rhs, const WordSpace& space) {
  CheckResult r{std::move(name), category, true, std::nullopt, std::nullopt, std::nullopt};
  if (auto w = lhs.first_difference(rhs)) {
    r.pass = false;
    r.witness = space.word(*w);
  }
  return r;
}

inline CheckResult op_zero(std::string name, const std::string& category, const TensorOperator<Rational>& m,
                           const WordSpace& space) {
  CheckResult r{std::move(name), category, true, std::nullopt, std::nullopt, std::nullopt};
  if (auto w = m.first_nonzero_column()) {
    r.pass = false;
    r.witness = space.word(*w);
  }
  return r;
}

}  // namespace detail

/// Pair-level structure: every column of B + B' has exactly one unit entry.
inline CheckResult check_unique_outcome(const PairMatrices& pm) {
  WordSpace pairs(pm.species(), 2);
  CheckResult r{"unique_outcome", "structure", true, std::nullopt, std::nullopt, std::nullopt};
  for (std::size_t col = 0; col < pairs.size(); ++col) {
    const int count = (pm.jump.map().apply(col) ? 1 : 0) + (pm.exchange.map().apply(col) ? 1 : 0);
    if (count != 1) {
      r.pass = false;
      r.witness = pairs.word(col);
      break;
    }
  }
  return r;
}

/// Exhaustive exact verification of the reducibility identities for n
/// particles and N species. Failures are recorded, never thrown.
inline IdentityReport verify_identities(int particles, int species, RuleType rule) {
  require(particles >= 2, ErrorKind::InvalidParameter, "identity suite needs n >= 2");
  require(species >= 1, ErrorKind::InvalidParameter, "identity suite needs N >= 1");
  WordSpace(species, particles).require_within_cap();

  const PairAlgebra alg(particles, species, rule);
  const auto& sp = alg.space();
  const int n = particles;
  using detail::idx;
  using Op = TensorOperator<Rational>;
  const auto I = Op::identity(alg.dim());

  IdentityReport report{rule, particles, species, {}};
  auto& out = report.checks;

  out.push_back(check_unique_outcome(alg.pair_matrices()));

  // Embedded operators at non-adjacent sites commute.
  for (int i = 1; i <= n - 1; ++i)
    for (int j = i + 2; j <= n - 1; ++j) {
      const auto& bi = alg.jump(i);
      const auto& bj = alg.jump(j);
      const auto& ei = alg.exchange(i);
      const auto& ej = alg.exchange(j);
      const std::string name = "commute(" + idx(i, j) + ")";
      auto r = detail::map_equal(name, "structure", bi * bj, bj * bi, sp);
      if (r.pass) r = detail::map_equal(name, "structure", bi * ej, ej * bi, sp);
      if (r.pass) r = detail::map_equal(name, "structure", ei * bj, bj * ei, sp);
      if (r.pass) r = detail::map_equal(name, "structure", ei * ej, ej * ei, sp);
      out.push_back(r);
    }

  // Long-range swap of particles i and j realised in two orders.
  for (int i = 1; i <= n; ++i)
    for (int j = i + 2; j <= n; ++j) {
      const BasisMap lhs = alg.exchanges(i, j - 1) * alg.jumps(j - 2, i);
      out.push_back(detail::map_equal("braid(" + idx(i, j) + ")", "reducibility", lhs, alg.swap_matrix(i, j), sp));
    }

  // Zero products for 2 <= l <= k+1 <= n-1.
  for (int k = 1; k <= n - 2; ++k)
    for (int l = 2; l <= k + 1; ++l) {
      const BasisMap p = alg.jumps(k + 1, l);
      const BasisMap q = alg.exchanges(l - 1, k);
      const BasisMap pp = alg.exchanges(k + 1, l);
      const BasisMap qq = alg.jumps(l - 1, k);
      const std::string tag = "(" + idx(k, l) + ")";
      out.push_back(detail::map_zero("zero_product_a" + tag, "reducibility", p * q * p, sp));
      out.push_back(detail::map_zero("zero_product_b" + tag, "reducibility", q * p * q, sp));
      out.push_back(detail::map_zero("zero_product_c" + tag, "reducibility", pp * qq * pp, sp));
      out.push_back(detail::map_zero("zero_product_d" + tag, "reducibility", qq * pp * qq, sp));
    }

  for (int k = 1; k <= n - 2; ++k) {
    const BasisMap chain_k = alg.jumps(k + 1, 2) * alg.exchanges(1, k);
    out.push_back(detail::map_zero("nilpotent_chain(" + idx(k) + ")", "reducibility", chain_k * chain_k, sp));

    const Op a = alg.nilpotent_A(k);
    out.push_back(detail::op_zero("nilpotent_A(" + idx(k) + ")", "reducibility", a * a, sp));

    const Op x = alg.frak_step(alg.frak_A(k - 1), k);
    out.push_back(detail::op_zero("frak_A_square_zero(" + idx(k) + ")", "reducibility", x * x, sp));
    out.push_back(detail::op_equal("frak_A_inverse(" + idx(k) + ")", "reducibility", (I - x) * alg.frak_A(k), I, sp));
    out.push_back(detail::op_equal("frak_A_inverse_right(" + idx(k) + ")", "reducibility",
                                   alg.frak_A(k) * (I - x), I, sp));
    out.push_back(detail::op_zero("frak_A_annihilates_jump(" + idx(k) + ")", "reducibility",
                                  x * Op::from_basis_map(alg.jumps(k + 1, 1)), sp));

    Op sum(alg.dim());
    for (int i = 1; i <= k; ++i) sum = sum + Op::from_basis_map(alg.swap_matrix(i, k + 1));
    const Op y = Op::from_basis_map(alg.jump(k + 1)) * sum;
    out.push_back(detail::op_equal("reduction_inverse(" + idx(k) + ")", "reducibility", (I - y) * (I + y), I, sp));
  }

  for (int k = 1; k <= n - 1; ++k) {
    Op sum(alg.dim());
    for (int i = 1; i <= k; ++i) sum = sum + Op::from_basis_map(alg.swap_matrix(i, k + 1));
    const Op lhs = alg.frak_A(k - 1) * Op::from_basis_map(alg.exchange(k));
    out.push_back(detail::op_equal("frak_A_sum(" + idx(k) + ")", "reducibility", lhs, sum, sp));
  }

  for (int i = 1; i <= n - 1; ++i)
    for (int j = i + 1; j <= n - 1; ++j) {
      const BasisMap lhs = alg.jump(j) * alg.swap_matrix(i, j) * alg.exchange(j);
      out.push_back(detail::map_equal("swap_shift(" + idx(i, j) + ")", "reducibility", lhs,
                                      alg.swap_matrix(i, j + 1), sp));
    }

  return report;
}

}  // namespace lrswap
