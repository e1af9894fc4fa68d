#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace lrswap {

/// Permutation of {1..n} in one-line notation sigma(1)...sigma(n).
///
/// The adjacent transposition T_i swaps the entries at positions i and i+1
/// of the one-line word. A reduced word is reported in application order
/// (i_1, ..., i_k), meaning sigma = T_{i_k} ... T_{i_1} applied to the
/// identity word.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    const int n = size();
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    for (int v : images_) {
      require(v >= 1 && v <= n && !seen[static_cast<std::size_t>(v)], ErrorKind::InvalidParameter,
              "not a permutation of 1.." + std::to_string(n));
      seen[static_cast<std::size_t>(v)] = true;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    return Permutation(std::move(v));
  }

  /// Builds sigma = T_{i_k} ... T_{i_1} from a word in application order.
  static Permutation from_word(int n, const std::vector<int>& word) {
    auto p = identity(n);
    for (int i : word) p = p.swapped(i);
    return p;
  }

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_.at(static_cast<std::size_t>(i - 1)); }
  const std::vector<int>& images() const { return images_; }

  bool is_identity() const {
    for (int i = 0; i < size(); ++i)
      if (images_[static_cast<std::size_t>(i)] != i + 1) return false;
    return true;
  }

  /// T_i sigma: the one-line word with positions i, i+1 exchanged.
  Permutation swapped(int i) const {
    require(i >= 1 && i < size(), ErrorKind::InvalidParameter, "transposition index out of range");
    Permutation p = *this;
    std::swap(p.images_[static_cast<std::size_t>(i - 1)], p.images_[static_cast<std::size_t>(i)]);
    return p;
  }

  /// Inversions (sigma(i), sigma(j)) with i < j and sigma(i) > sigma(j).
  std::vector<std::pair<int, int>> inversions() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < size(); ++i)
      for (int j = i + 1; j < size(); ++j)
        if (images_[static_cast<std::size_t>(i)] > images_[static_cast<std::size_t>(j)])
          out.emplace_back(images_[static_cast<std::size_t>(i)], images_[static_cast<std::size_t>(j)]);
    return out;
  }

  /// Canonical reduced word from bubble sort, in application order.
  std::vector<int> reduced_word() const {
    std::vector<int> w = images_;
    std::vector<int> sorting_swaps;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i] > w[i + 1]) {
          std::swap(w[i], w[i + 1]);
          sorting_swaps.push_back(static_cast<int>(i) + 1);
          changed = true;
        }
    }
    std::reverse(sorting_swaps.begin(), sorting_swaps.end());
    return sorting_swaps;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (size() > 9 && i > 0) s += '.';
      s += std::to_string(images_[i]);
    }
    return s;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> images_;
};

/// All permutations of {1..n} in lexicographic order.
inline std::vector<Permutation> all_permutations(int n) {
  require(n >= 1 && n <= 8, ErrorKind::ResourceLimit, "permutation enumeration limited to n <= 8");
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  std::vector<Permutation> out;
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

/// Every reduced word of sigma, in application order.
inline std::vector<std::vector<int>> reduced_words(const Permutation& sigma) {
  if (sigma.is_identity()) return {{}};
  std::vector<std::vector<int>> out;
  for (int i = 1; i < sigma.size(); ++i) {
    if (sigma(i) < sigma(i + 1)) continue;
    for (auto w : reduced_words(sigma.swapped(i))) {
      w.push_back(i);
      out.push_back(std::move(w));
    }
  }
  return out;
}

}  // namespace lrswap
