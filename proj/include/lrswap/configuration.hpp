#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rule.hpp"
#include "words.hpp"

namespace lrswap {

using Position = std::int64_t;
using Positions = std::vector<Position>;

/// Markov state (X, pi): strictly increasing occupied sites and the species
/// word read left to right. Vacancies are implicit.
struct Configuration {
  Positions positions;
  Word word;

  Configuration() = default;
  Configuration(Positions x, Word w) : positions(std::move(x)), word(std::move(w)) { validate(); }

  int size() const { return static_cast<int>(positions.size()); }

  void validate() const {
    require(!positions.empty(), ErrorKind::InvalidParameter, "configuration needs at least one particle");
    require(positions.size() == word.size(), ErrorKind::InvalidParameter,
            "word length must equal the number of positions");
    for (std::size_t i = 0; i + 1 < positions.size(); ++i)
      require(positions[i] < positions[i + 1], ErrorKind::InvalidParameter, "positions must be strictly increasing");
    for (int s : word) require(s >= 1, ErrorKind::InvalidParameter, "species labels start at 1");
  }

  /// Canonical key "x_1,...,x_n|pi".
  std::string key() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < positions.size(); ++i) os << (i ? "," : "") << positions[i];
    os << '|' << word_to_string(word);
    return os.str();
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

inline Positions parse_positions(const std::string& text) {
  Positions out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      require(used == item.size(), ErrorKind::InvalidParameter, "bad position '" + item + "'");
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidParameter, "bad position '" + item + "'");
    }
  }
  return out;
}

/// Sorted species multiset of a word.
inline Word species_content(Word w) {
  std::sort(w.begin(), w.end());
  return w;
}

/// P_{(Y,nu)}(X,pi;t) request.
struct TransitionQuery {
  Configuration initial;
  Configuration final_state;
  double time = 0.0;
  RuleType rule = RuleType::DropPushType;

  int particles() const { return initial.size(); }
  int species() const { return std::max(max_letter(initial.word), max_letter(final_state.word)); }

  void validate() const {
    initial.validate();
    final_state.validate();
    require(initial.size() == final_state.size(), ErrorKind::InvalidParameter,
            "initial and final configurations have different particle counts");
    require(time >= 0.0, ErrorKind::InvalidParameter, "time must be nonnegative");
    require_integrable(rule);
  }

  bool same_content() const { return species_content(initial.word) == species_content(final_state.word); }
};

}  // namespace lrswap
