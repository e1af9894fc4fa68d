#pragma once

#include <cstddef>
#include <string>

#include "errors.hpp"
#include "rule.hpp"
#include "tensor_operator.hpp"
#include "words.hpp"

namespace lrswap {

/// N^2 x N^2 0/1 matrix indexed lexicographically by two-letter words. Each
/// column holds at most one unit entry, so the matrix is stored as a partial
/// map on two-letter words.
class PairMatrix {
 public:
  PairMatrix(int species, BasisMap map) : species_(species), map_(std::move(map)) {
    require(map_.dim() == static_cast<std::size_t>(species) * static_cast<std::size_t>(species),
            ErrorKind::InvalidParameter, "pair matrix must be N^2 x N^2");
  }

  int species() const { return species_; }
  std::size_t dim() const { return map_.dim(); }
  const BasisMap& map() const { return map_; }

  int entry(const Word& row, const Word& col) const {
    WordSpace pairs(species_, 2);
    auto image = map_.apply(pairs.index(col));
    return image && *image == pairs.index(row) ? 1 : 0;
  }

  int entry(std::size_t row, std::size_t col) const {
    auto image = map_.apply(col);
    return image && *image == row ? 1 : 0;
  }

  template <class S>
  TensorOperator<S> to_operator() const {
    return TensorOperator<S>::from_basis_map(map_);
  }

  friend bool operator==(const PairMatrix& a, const PairMatrix& b) {
    return a.species_ == b.species_ && a.map_ == b.map_;
  }

 private:
  int species_;
  BasisMap map_;
};

/// B (jump-in from the left neighbour) and B' (same-shape exchange).
struct PairMatrices {
  RuleType rule;
  PairMatrix jump;      // B
  PairMatrix exchange;  // B'

  int species() const { return jump.species(); }
};

inline PairMatrices build_pair_matrices(int species, RuleType rule) {
  require(species >= 1, ErrorKind::InvalidParameter, "species count N must be >= 1");
  WordSpace pairs(species, 2);
  BasisMap jump(pairs.size());
  BasisMap exchange(pairs.size());
  for (std::size_t col = 0; col < pairs.size(); ++col) {
    const Word nu = pairs.word(col);
    const std::size_t swapped = pairs.index(Word{nu[1], nu[0]});
    const int a = nu[0];
    const int b = nu[1];
    switch (rule) {
      case RuleType::DropPushType:
        if (a == b)
          jump.set(col, col);
        else if (a < b)
          jump.set(col, swapped);
        else
          exchange.set(col, swapped);
        break;
      case RuleType::TasepType:
        if (a == b)
          exchange.set(col, col);
        else if (a < b)
          jump.set(col, swapped);
        else
          exchange.set(col, swapped);
        break;
      case RuleType::NonIntegrableAlt:
        // General-N extension of the two-species table: both matrices diagonal.
        if (a > b)
          jump.set(col, col);
        else
          exchange.set(col, col);
        break;
    }
  }
  return PairMatrices{rule, PairMatrix(species, jump), PairMatrix(species, exchange)};
}

/// I^{(i-1)} (x) m (x) I^{(n-i-1)} on n-letter words, site i in 1..n-1.
inline BasisMap embed(const PairMatrix& m, int site, int particles) {
  require(particles >= 2, ErrorKind::InvalidParameter, "embedding needs n >= 2");
  require(site >= 1 && site <= particles - 1, ErrorKind::InvalidParameter,
          "site " + std::to_string(site) + " outside 1.." + std::to_string(particles - 1));
  WordSpace space(m.species(), particles);
  const std::size_t N = static_cast<std::size_t>(m.species());
  const std::size_t s_left = space.stride(site - 1);
  const std::size_t s_right = space.stride(site);
  BasisMap out(space.size());
  for (std::size_t col = 0; col < space.size(); ++col) {
    const std::size_t a = (col / s_left) % N;
    const std::size_t b = (col / s_right) % N;
    if (auto image = m.map().apply(a * N + b)) {
      const std::size_t base = col - a * s_left - b * s_right;
      out.set(col, base + (*image / N) * s_left + (*image % N) * s_right);
    }
  }
  return out;
}

}  // namespace lrswap
