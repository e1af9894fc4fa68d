#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

#include "configuration.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "scalar.hpp"

namespace lrswap {

constexpr std::size_t kMaxOracleStates = 1'000'000;

template <class S>
using Distribution = std::map<Configuration, S>;

/// One step of the embedded jump chain: a uniformly chosen particle attempts its move.
template <class S>
Distribution<S> jump_chain_step(const Distribution<S>& dist, RuleType rule) {
  Distribution<S> next;
  for (const auto& [c, p] : dist) {
    const S share = p / S(c.size());
    for (int i = 1; i <= c.size(); ++i) next[apply_move(c, i, rule)] += share;
  }
  require(next.size() <= kMaxOracleStates, ErrorKind::ResourceLimit, "jump chain exceeds the state cap");
  return next;
}

template <class S>
Distribution<S> jump_chain(const Configuration& c0, int steps, RuleType rule) {
  require_integrable(rule);
  Distribution<S> dist{{c0, S(1)}};
  for (int k = 0; k < steps; ++k) dist = jump_chain_step(dist, rule);
  return dist;
}

/// Poisson(lambda) weights w_0..w_K with K the first index whose upper tail
/// P(N > K) falls below tol. Tails are summed from the far end, not as 1 - cdf.
struct PoissonWeights {
  std::vector<double> weights;
  double tail = 0.0;  // P(N > K)
};

inline PoissonWeights poisson_weights(double lambda, double tol) {
  require(lambda >= 0.0 && std::isfinite(lambda), ErrorKind::InvalidParameter, "Poisson mean must be finite");
  require(tol > 0.0, ErrorKind::InvalidParameter, "tail tolerance must be positive");
  require(lambda < 700.0, ErrorKind::ResourceLimit, "n*t too large for the series oracle");
  if (lambda == 0.0) return {{1.0}, 0.0};
  std::vector<double> pmf;
  // terms beyond this point are below 1e-300 relative to the peak
  const std::size_t kmax = static_cast<std::size_t>(lambda + 40.0 * std::sqrt(lambda) + 60.0);
  for (std::size_t k = 0; k <= kmax; ++k)
    pmf.push_back(std::exp(-lambda + static_cast<double>(k) * std::log(lambda) - std::lgamma(static_cast<double>(k) + 1.0)));
  std::vector<double> upper(pmf.size() + 1, 0.0);
  for (std::size_t k = pmf.size(); k-- > 0;) upper[k] = upper[k + 1] + pmf[k];
  std::size_t K = 0;
  while (upper[K + 1] >= tol) ++K;
  return {std::vector<double>(pmf.begin(), pmf.begin() + static_cast<std::ptrdiff_t>(K) + 1), upper[K + 1]};
}

struct SeriesResult {
  Distribution<double> probabilities;
  double tail = 0.0;
  int terms = 0;

  double at(const Configuration& c) const {
    auto it = probabilities.find(c);
    return it == probabilities.end() ? 0.0 : it->second;
  }
  double total_mass() const {
    double s = 0.0;
    for (const auto& kv : probabilities) s += kv.second;
    return s;
  }
};

/// Transient law at time t by uniformization of the constant-rate-n chain.
inline SeriesResult series_distribution(const Configuration& c0, double t, RuleType rule, double tail_tol = 1e-14) {
  require_integrable(rule);
  c0.validate();
  require(t >= 0.0, ErrorKind::InvalidParameter, "time must be nonnegative");
  const auto pw = poisson_weights(c0.size() * t, tail_tol);
  SeriesResult out;
  out.tail = pw.tail;
  out.terms = static_cast<int>(pw.weights.size());
  Distribution<double> dist{{c0, 1.0}};
  for (std::size_t k = 0; k < pw.weights.size(); ++k) {
    if (k > 0) dist = jump_chain_step(dist, rule);
    for (const auto& [c, p] : dist) out.probabilities[c] += pw.weights[k] * p;
  }
  return out;
}

inline double series_oracle(const TransitionQuery& q, double tail_tol = 1e-14) {
  q.validate();
  if (!q.same_content()) return 0.0;
  return series_distribution(q.initial, q.time, q.rule, tail_tol).at(q.final_state);
}

}  // namespace lrswap
