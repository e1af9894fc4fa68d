#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"

namespace lrswap {

/// Species word pi_1...pi_n with letters in {1..N}.
using Word = std::vector<int>;

/// Largest basis size N^n the exact operator calculus will enumerate.
inline constexpr std::size_t kMaxBasisSize = 4096;

/// Lexicographic indexing of all words of a fixed length over {1..N}:
/// 11..1 -> 0, ..., NN..N -> N^n - 1.
class WordSpace {
 public:
  WordSpace(int species, int length) : species_(species), length_(length) {
    require(species >= 1, ErrorKind::InvalidParameter, "species count N must be >= 1");
    require(length >= 1, ErrorKind::InvalidParameter, "word length n must be >= 1");
    std::size_t size = 1;
    for (int i = 0; i < length; ++i) {
      size *= static_cast<std::size_t>(species);
      if (size > (std::size_t{1} << 40)) break;
    }
    size_ = size;
  }

  int species() const { return species_; }
  int length() const { return length_; }
  std::size_t size() const { return size_; }

  /// Throws resource-limit when N^n exceeds the exhaustive-enumeration cap.
  void require_within_cap(std::size_t cap = kMaxBasisSize) const {
    require(size_ <= cap, ErrorKind::ResourceLimit,
            "basis size N^n = " + std::to_string(size_) + " exceeds cap " + std::to_string(cap));
  }

  std::size_t index(const Word& w) const {
    require(static_cast<int>(w.size()) == length_, ErrorKind::InvalidParameter, "word length mismatch");
    std::size_t idx = 0;
    for (int letter : w) {
      require(letter >= 1 && letter <= species_, ErrorKind::InvalidParameter,
              "letter " + std::to_string(letter) + " outside {1.." + std::to_string(species_) + "}");
      idx = idx * static_cast<std::size_t>(species_) + static_cast<std::size_t>(letter - 1);
    }
    return idx;
  }

  Word word(std::size_t idx) const {
    Word w(static_cast<std::size_t>(length_));
    for (int pos = length_ - 1; pos >= 0; --pos) {
      w[static_cast<std::size_t>(pos)] = static_cast<int>(idx % static_cast<std::size_t>(species_)) + 1;
      idx /= static_cast<std::size_t>(species_);
    }
    return w;
  }

  /// Stride of the letter at 0-based position pos.
  std::size_t stride(int pos) const {
    std::size_t s = 1;
    for (int i = pos + 1; i < length_; ++i) s *= static_cast<std::size_t>(species_);
    return s;
  }

  int letter(std::size_t idx, int pos) const {
    return static_cast<int>((idx / stride(pos)) % static_cast<std::size_t>(species_)) + 1;
  }

 private:
  int species_;
  int length_;
  std::size_t size_ = 1;
};

inline std::string word_to_string(const Word& w) {
  bool compact = true;
  for (int letter : w) compact = compact && letter >= 0 && letter <= 9;
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!compact && i > 0) out += '.';
    out += std::to_string(w[i]);
  }
  return out;
}

/// Parses "231" or "2.3.1" (dot form needed once species exceed 9).
inline Word parse_word(const std::string& text) {
  Word w;
  if (text.find('.') != std::string::npos) {
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find('.', start);
      if (end == std::string::npos) end = text.size();
      w.push_back(std::stoi(text.substr(start, end - start)));
      start = end + 1;
    }
  } else {
    for (char c : text) {
      require(c >= '0' && c <= '9', ErrorKind::InvalidParameter, "bad word '" + text + "'");
      w.push_back(c - '0');
    }
  }
  require(!w.empty(), ErrorKind::InvalidParameter, "empty word");
  return w;
}

inline int max_letter(const Word& w) {
  int m = 0;
  for (int letter : w) m = letter > m ? letter : m;
  return m;
}

}  // namespace lrswap
