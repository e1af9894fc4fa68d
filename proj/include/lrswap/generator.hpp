#pragma once

#include <map>
#include <string>
#include <vector>

#include "configuration.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "pairalg.hpp"
#include "tensor_operator.hpp"
#include "words.hpp"

namespace lrswap {

using RateMatrix = TensorOperator<Rational>;

/// Single-event rates out of one position shape, tallied per target shape:
/// entry (pi, nu) of rates[target] is the rate of (source, nu) -> (target, pi).
/// Null moves land on the source shape itself.
struct GeneratorSlice {
  Positions source;
  int species = 0;
  RuleType rule = RuleType::DropPushType;
  std::map<Positions, RateMatrix> rates;
};

inline constexpr int kMaxGeneratorParticles = 4;
inline constexpr int kMaxGeneratorSpecies = 3;

namespace detail {

inline void check_generator_sizes(const Positions& shape, int species, RuleType rule) {
  require_integrable(rule);
  const int n = static_cast<int>(shape.size());
  require(n >= 2 && n <= kMaxGeneratorParticles, ErrorKind::ResourceLimit, "generator extraction needs 2 <= n <= 4");
  require(species >= 1 && species <= kMaxGeneratorSpecies, ErrorKind::ResourceLimit,
          "generator extraction needs 1 <= N <= 3");
  for (std::size_t i = 0; i + 1 < shape.size(); ++i)
    require(shape[i] < shape[i + 1], ErrorKind::InvalidParameter, "shape must be strictly increasing");
}

}  // namespace detail

inline GeneratorSlice extract_generator(const Positions& source, int species, RuleType rule) {
  detail::check_generator_sizes(source, species, rule);
  const int n = static_cast<int>(source.size());
  const WordSpace space(species, n);
  GeneratorSlice slice{source, species, rule, {}};
  for (std::size_t col = 0; col < space.size(); ++col) {
    const Configuration c(source, space.word(col));
    for (int i = 1; i <= n; ++i) {
      const Configuration d = apply_move(c, i, rule);
      auto it = slice.rates.try_emplace(d.positions, RateMatrix(space.size())).first;
      const std::size_t row = space.index(d.word);
      it->second.set(row, col, it->second.entry(row, col) + 1);
    }
  }
  return slice;
}

/// Every position shape with a single event leading to `target`: the target
/// itself, and for each occupied z the shape with z replaced by the first vacant
/// site to its left.
inline std::vector<Positions> source_shapes(const Positions& target) {
  std::vector<Positions> out{target};
  for (std::size_t k = 0; k < target.size(); ++k) {
    std::size_t a = k;
    while (a > 0 && target[a - 1] == target[a] - 1) --a;
    Positions s = target;
    s.erase(s.begin() + static_cast<std::ptrdiff_t>(k));
    s.insert(s.begin() + static_cast<std::ptrdiff_t>(a), target[a] - 1);
    out.push_back(std::move(s));
  }
  return out;
}

/// Incoming rates into `target`, keyed by source shape, read off the dynamics.
inline std::map<Positions, RateMatrix> incoming_generator(const Positions& target, int species, RuleType rule) {
  detail::check_generator_sizes(target, species, rule);
  std::map<Positions, RateMatrix> out;
  for (const auto& src : source_shapes(target)) {
    const auto slice = extract_generator(src, species, rule);
    auto it = slice.rates.find(target);
    if (it != slice.rates.end()) out.emplace(src, it->second);
  }
  return out;
}

/// Incoming rates into `target` as predicted by the pair algebra. Each maximal
/// block of consecutive sites [a..b] receives its own terms: a plain hop from
/// a-1, arrival M_i = B_{i-1}...B_1 after crossing i-1 residents, and the
/// same-shape swap sum M_0 = sum_{i<j} M_ij, all embedded at the block's
/// particle offset.
inline std::map<Positions, RateMatrix> predicted_incoming(const Positions& target, int species, RuleType rule) {
  detail::check_generator_sizes(target, species, rule);
  const int n = static_cast<int>(target.size());
  const PairAlgebra alg(n, species, rule);
  std::map<Positions, RateMatrix> out;
  RateMatrix same(alg.dim());
  int first = 0;
  while (first < n) {
    int last = first;
    while (last + 1 < n && target[static_cast<std::size_t>(last + 1)] == target[static_cast<std::size_t>(last)] + 1) ++last;
    // particle indices are 1-based in the algebra; block covers first+1 .. last+1
    for (int j = first; j <= last; ++j) {
      const int hop = j - first + 1;  // arriving particle ends up as the hop-th of the block
      const BasisMap m = hop == 1 ? BasisMap::identity(alg.dim()) : alg.jumps(first + hop - 1, first + 1);
      Positions src = target;
      src.erase(src.begin() + j);
      src.insert(src.begin() + first, target[static_cast<std::size_t>(first)] - 1);
      out.emplace(src, PairAlgebra::op(m));
    }
    for (int i = first + 1; i <= last + 1; ++i)
      for (int j = i + 1; j <= last + 1; ++j) same = same + PairAlgebra::op(alg.swap_matrix(i, j));
    first = last + 1;
  }
  if (!same.is_zero_operator()) out.emplace(target, same);
  return out;
}

struct RateDifference {
  Positions source;
  Word row;
  Word col;
  Rational extracted;
  Rational predicted;
};

struct GeneratorReport {
  Positions target;
  int species = 0;
  RuleType rule = RuleType::DropPushType;
  std::vector<Positions> sources;
  std::vector<RateDifference> differences;
  bool row_sums_ok = true;  // every source state has total outgoing rate n

  bool pass() const { return differences.empty() && row_sums_ok; }
};

inline bool outgoing_rates_total_n(const GeneratorSlice& slice) {
  const WordSpace space(slice.species, static_cast<int>(slice.source.size()));
  std::vector<Rational> totals(space.size());
  for (const auto& [shape, m] : slice.rates)
    for (std::size_t col = 0; col < m.dim(); ++col)
      for (const auto& e : m.column(col)) totals[col] += e.value;
  for (const auto& v : totals)
    if (v != static_cast<long long>(slice.source.size())) return false;
  return true;
}

inline GeneratorReport compare_generator(const Positions& target, int species, RuleType rule) {
  const auto got = incoming_generator(target, species, rule);
  const auto want = predicted_incoming(target, species, rule);
  const WordSpace space(species, static_cast<int>(target.size()));
  GeneratorReport rep{target, species, rule, {}, {}, true};
  std::map<Positions, bool> seen;
  for (const auto& kv : got) seen[kv.first] = true;
  for (const auto& kv : want) seen[kv.first] = true;
  const RateMatrix zero(space.size());
  for (const auto& [src, _] : seen) {
    rep.sources.push_back(src);
    const auto& a = got.count(src) ? got.at(src) : zero;
    const auto& b = want.count(src) ? want.at(src) : zero;
    for (std::size_t col = 0; col < space.size(); ++col)
      for (std::size_t row = 0; row < space.size(); ++row) {
        const Rational x = a.entry(row, col);
        const Rational y = b.entry(row, col);
        if (x != y) rep.differences.push_back({src, space.word(row), space.word(col), x, y});
      }
    rep.row_sums_ok = rep.row_sums_ok && outgoing_rates_total_n(extract_generator(src, species, rule));
  }
  return rep;
}

}  // namespace lrswap
