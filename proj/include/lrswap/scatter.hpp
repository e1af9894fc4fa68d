#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "check.hpp"
#include "dense_matrix.hpp"
#include "errors.hpp"
#include "pair_matrix.hpp"
#include "permutation.hpp"
#include "rule.hpp"
#include "scalar.hpp"
#include "tensor_operator.hpp"
#include "words.hpp"

namespace lrswap {

/// Bethe variables xi_1..xi_n.
template <class S>
struct SpectralPoint {
  std::vector<S> values;

  int size() const { return static_cast<int>(values.size()); }
  const S& operator[](int label) const { return values.at(static_cast<std::size_t>(label - 1)); }

  void require_nonzero() const {
    for (const auto& v : values)
      require(!is_zero(v), ErrorKind::InvalidParameter, "spectral variables must be nonzero");
  }
};

/// Two-particle scattering matrix R_{beta alpha} on two-letter words.
template <class S>
struct ScatteringMatrix {
  int beta = 0;
  int alpha = 0;
  TensorOperator<S> entries;
};

namespace detail {

inline std::string block_name(int a, int b) {
  return "{" + std::to_string(a) + "," + std::to_string(b) + "}";
}

template <class S>
S pair_factor_entry(const PairMatrices& pm, std::size_t row, std::size_t col, const S& inv_coeff,
                    const S& coeff) {
  S v = row == col ? S(1) : S(0);
  if (pm.jump.entry(row, col)) v -= inv_coeff;
  if (pm.exchange.entry(row, col)) v -= coeff;
  return v;
}

}  // namespace detail

/// R = -(I - B/xi_beta - B' xi_alpha)^{-1} (I - B/xi_alpha - B' xi_beta), assembled
/// species block by species block.
template <class S>
TensorOperator<S> r_matrix(const S& xi_alpha, const S& xi_beta, const PairMatrices& pm) {
  require(!is_zero(xi_alpha) && !is_zero(xi_beta), ErrorKind::InvalidParameter,
          "spectral variables must be nonzero");
  const int species = pm.species();
  const WordSpace pairs(species, 2);
  const S one(1);
  const S inv_a = one / xi_alpha;
  const S inv_b = one / xi_beta;
  TensorOperator<S> out(pairs.size());

  // left factor uses (1/xi_beta, xi_alpha), right factor (1/xi_alpha, xi_beta)
  auto left = [&](std::size_t r, std::size_t c) { return detail::pair_factor_entry(pm, r, c, inv_b, xi_alpha); };
  auto right = [&](std::size_t r, std::size_t c) { return detail::pair_factor_entry(pm, r, c, inv_a, xi_beta); };

  for (int a = 1; a <= species; ++a) {
    const std::size_t aa = pairs.index(Word{a, a});
    const S l = left(aa, aa);
    if (is_zero(l)) throw Error(ErrorKind::Singularity, "singular scattering factor in block " + detail::block_name(a, a));
    const S v = -right(aa, aa) / l;
    if (!is_zero(v)) out.set(aa, aa, v);

    for (int b = a + 1; b <= species; ++b) {
      const std::size_t idx[2] = {pairs.index(Word{a, b}), pairs.index(Word{b, a})};
      S L[2][2], R[2][2];
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
          L[r][c] = left(idx[r], idx[c]);
          R[r][c] = right(idx[r], idx[c]);
        }
      const S det = L[0][0] * L[1][1] - L[0][1] * L[1][0];
      if (is_zero(det))
        throw Error(ErrorKind::Singularity, "singular scattering factor in block " + detail::block_name(a, b));
      const S inv[2][2] = {{L[1][1] / det, -L[0][1] / det}, {-L[1][0] / det, L[0][0] / det}};
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
          S v2 = -(inv[r][0] * R[0][c] + inv[r][1] * R[1][c]);
          if (!is_zero(v2)) out.set(idx[r], idx[c], v2);
        }
    }
  }
  return out;
}

template <class S>
TensorOperator<S> r_matrix(const S& xi_alpha, const S& xi_beta, int species, RuleType rule) {
  return r_matrix(xi_alpha, xi_beta, build_pair_matrices(species, rule));
}

/// Reference construction by generic dense inversion of the full N^2 x N^2 factor.
template <class S>
DenseMatrix<S> r_matrix_dense(const S& xi_alpha, const S& xi_beta, int species, RuleType rule) {
  const PairMatrices pm = build_pair_matrices(species, rule);
  const auto B = pm.jump.to_operator<S>().to_dense();
  const auto Bp = pm.exchange.to_operator<S>().to_dense();
  const auto I = DenseMatrix<S>::identity(B.rows());
  const S one(1);
  const auto left = I - (one / xi_beta) * B - xi_alpha * Bp;
  const auto right = I - (one / xi_alpha) * B - xi_beta * Bp;
  return S(-1) * (left.inverse() * right);
}

template <class S>
ScatteringMatrix<S> scattering_matrix(int beta, int alpha, const SpectralPoint<S>& xi, int species, RuleType rule) {
  return {beta, alpha, r_matrix(xi[alpha], xi[beta], species, rule)};
}

/// T_{i, beta alpha}: R_{beta alpha} acting on word positions i, i+1.
template <class S>
TensorOperator<S> t_matrix(int site, int beta, int alpha, const SpectralPoint<S>& xi, int particles, int species,
                           RuleType rule) {
  const WordSpace space(species, particles);
  space.require_within_cap();
  return embed_two_site(r_matrix(xi[alpha], xi[beta], species, rule), space, site);
}

/// Factor sequence of A_sigma for a word in application order: for each step the
/// site i together with the labels (beta, alpha) it exchanges.
struct ScatterStep {
  int site;
  int beta;
  int alpha;
};

inline std::vector<ScatterStep> scatter_steps(int particles, const std::vector<int>& word) {
  std::vector<int> cur(static_cast<std::size_t>(particles));
  for (int i = 0; i < particles; ++i) cur[static_cast<std::size_t>(i)] = i + 1;
  std::vector<ScatterStep> steps;
  for (int i : word) {
    require(i >= 1 && i < particles, ErrorKind::InvalidParameter, "transposition index out of range");
    const int alpha = cur[static_cast<std::size_t>(i - 1)];
    const int beta = cur[static_cast<std::size_t>(i)];
    require(alpha < beta, ErrorKind::InvalidParameter, "word is not reduced");
    steps.push_back({i, beta, alpha});
    std::swap(cur[static_cast<std::size_t>(i - 1)], cur[static_cast<std::size_t>(i)]);
  }
  return steps;
}

template <class S>
TensorOperator<S> a_sigma_from_word(int particles, const std::vector<int>& word, const SpectralPoint<S>& xi,
                                    int species, RuleType rule) {
  const WordSpace space(species, particles);
  space.require_within_cap();
  require(xi.size() == particles, ErrorKind::InvalidParameter, "spectral point has wrong length");
  std::map<std::pair<int, int>, TensorOperator<S>> local;
  auto out = TensorOperator<S>::identity(space.size());
  for (const auto& st : scatter_steps(particles, word)) {
    auto key = std::make_pair(st.beta, st.alpha);
    auto it = local.find(key);
    if (it == local.end()) it = local.emplace(key, r_matrix(xi[st.alpha], xi[st.beta], species, rule)).first;
    out = embed_two_site(it->second, space, st.site) * out;
  }
  return out;
}

/// A_sigma built from the bubble-sort reduced word of sigma.
template <class S>
TensorOperator<S> a_sigma(const Permutation& sigma, const SpectralPoint<S>& xi, int species, RuleType rule) {
  return a_sigma_from_word(sigma.size(), sigma.reduced_word(), xi, species, rule);
}

struct YbeResult {
  bool pass = false;
  double max_discrepancy = 0.0;
};

namespace detail {

template <class S>
bool operators_agree(const TensorOperator<S>& a, const TensorOperator<S>& b, double tol) {
  if constexpr (std::is_same_v<S, Rational>)
    return a == b;
  else
    return a.max_abs_diff(b) <= tol;
}

}  // namespace detail

/// (R_gb x I)(I x R_ga)(R_ba x I) == (I x R_ba)(R_ga x I)(I x R_gb) on three letters.
/// Rational input is compared exactly; tolerance applies to floating input only.
template <class S>
YbeResult verify_ybe(const S& xi_alpha, const S& xi_beta, const S& xi_gamma, int species, RuleType rule,
                     double tol = 1e-12) {
  const WordSpace space(species, 3);
  space.require_within_cap();
  const auto r_ba = r_matrix(xi_alpha, xi_beta, species, rule);
  const auto r_ga = r_matrix(xi_alpha, xi_gamma, species, rule);
  const auto r_gb = r_matrix(xi_beta, xi_gamma, species, rule);
  const auto lhs = embed_two_site(r_gb, space, 1) * embed_two_site(r_ga, space, 2) * embed_two_site(r_ba, space, 1);
  const auto rhs = embed_two_site(r_ba, space, 2) * embed_two_site(r_ga, space, 1) * embed_two_site(r_gb, space, 2);
  return {detail::operators_agree(lhs, rhs, tol), lhs.max_abs_diff(rhs)};
}

/// Boundary factor I - B_i/xi_{sigma(i)} - B'_i xi_{sigma(i+1)}.
template <class S>
TensorOperator<S> boundary_factor(int site, const S& xi_left, const S& xi_right, int particles, int species,
                                  RuleType rule) {
  const WordSpace space(species, particles);
  const PairMatrices pm = build_pair_matrices(species, rule);
  const auto b = embed_two_site(pm.jump.to_operator<S>(), space, site);
  const auto bp = embed_two_site(pm.exchange.to_operator<S>(), space, site);
  return TensorOperator<S>::identity(space.size()) - (S(1) / xi_left) * b - xi_right * bp;
}

/// Sum over sigma of the boundary factor applied to A_sigma; zero for integrable rules.
template <class S>
TensorOperator<S> bc_sum(int site, const SpectralPoint<S>& xi, int species, RuleType rule) {
  const int n = xi.size();
  require(site >= 1 && site < n, ErrorKind::InvalidParameter, "site out of range");
  TensorOperator<S> total(WordSpace(species, n).size());
  for (const auto& sigma : all_permutations(n)) {
    const auto f = boundary_factor(site, xi[sigma(site)], xi[sigma(site + 1)], n, species, rule);
    total = total + f * a_sigma(sigma, xi, species, rule);
  }
  return total;
}

/// Pair form: factor(sigma) A_sigma + factor(T_i sigma) A_{T_i sigma}, with sigma(i) < sigma(i+1).
template <class S>
TensorOperator<S> bc_pair_sum(int site, const Permutation& sigma, const SpectralPoint<S>& xi, int species,
                              RuleType rule) {
  const int n = xi.size();
  const Permutation tau = sigma.swapped(site);
  const auto f1 = boundary_factor(site, xi[sigma(site)], xi[sigma(site + 1)], n, species, rule);
  const auto f2 = boundary_factor(site, xi[tau(site)], xi[tau(site + 1)], n, species, rule);
  return f1 * a_sigma(sigma, xi, species, rule) + f2 * a_sigma(tau, xi, species, rule);
}

/// Seeded draws of regular rational spectral points: numerators and denominators
/// uniform on [-9,9] without 0, values never 0 or 1, pairwise distinct.
class RationalPointSampler {
 public:
  explicit RationalPointSampler(std::uint64_t seed) : seed_(seed), rng_(seed) {}

  std::uint64_t seed() const { return seed_; }

  Rational draw_value() {
    for (;;) {
      const long long p = draw_nonzero();
      const long long q = draw_nonzero();
      Rational v = make_rational(p, q);
      if (v != 1) return v;
    }
  }

  SpectralPoint<Rational> draw(int count) {
    SpectralPoint<Rational> pt;
    while (static_cast<int>(pt.values.size()) < count) {
      Rational v = draw_value();
      bool clash = false;
      for (const auto& w : pt.values) clash = clash || w == v;
      if (!clash) pt.values.push_back(v);
    }
    return pt;
  }

 private:
  long long draw_nonzero() {
    std::uniform_int_distribution<int> d(1, 18);
    const int k = d(rng_);
    return k <= 9 ? -k : k - 9;
  }

  std::uint64_t seed_;
  std::mt19937_64 rng_;
};

/// Yang-Baxter and boundary-sum checks over seeded random points, reported in the
/// shared check schema. The mixed-block determinant also vanishes when
/// xi_alpha = xi_beta, which the sampler already excludes.
inline std::vector<CheckResult> verify_scatter(int species, RuleType rule, int triples, std::uint64_t seed) {
  std::vector<CheckResult> out;
  RationalPointSampler sampler(seed);
  for (int k = 0; k < triples; ++k) {
    const auto pt = sampler.draw(3);
    CheckResult c;
    c.name = "ybe[" + std::to_string(k) + "](" + pt.values[0].str() + "," + pt.values[1].str() + "," +
             pt.values[2].str() + ")";
    c.category = "ybe";
    c.seed = seed;
    try {
      const auto r = verify_ybe(pt.values[0], pt.values[1], pt.values[2], species, rule);
      c.pass = r.pass;
      c.discrepancy = r.max_discrepancy;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Singularity) throw;
      // A factor can be singular at special points (e.g. xi_beta = 1/xi_alpha). Redraw.
      --k;
      continue;
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<CheckResult> verify_bc_sums(int particles, int species, RuleType rule,
                                               const SpectralPoint<Rational>& xi) {
  std::vector<CheckResult> out;
  const WordSpace space(species, particles);
  for (int i = 1; i < particles; ++i) {
    CheckResult c;
    c.name = "bc_sum(" + std::to_string(i) + ")";
    c.category = "bc-sum";
    const auto total = bc_sum(i, xi, species, rule);
    c.pass = total.is_zero_operator();
    c.discrepancy = total.max_abs();
    if (auto w = total.first_nonzero_column()) c.witness = space.word(*w);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace lrswap
