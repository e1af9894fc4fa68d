#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "configuration.hpp"
#include "errors.hpp"
#include "rule.hpp"

namespace lrswap {

/// Outcome of one clock ring. A null move leaves the configuration unchanged.
struct MoveTarget {
  bool null_move = true;
  Position site = 0;
  std::optional<int> displaced;  // 1-based index of the weaker particle at `site`, if any
};

namespace detail {

inline void check_mover(const Configuration& c, int mover) {
  require(mover >= 1 && mover <= c.size(), ErrorKind::InvalidParameter, "mover index out of range");
}

}  // namespace detail

/// Nearest site to the right of particle `mover` (1-based) that is vacant or
/// holds a strictly weaker species. Stronger residents are passed over; an equal
/// resident is passed over under DropPushType and blocks the move under TasepType.
inline MoveTarget long_range_target(const Configuration& c, int mover, RuleType rule) {
  require_integrable(rule);
  detail::check_mover(c, mover);
  const int s = c.word[static_cast<std::size_t>(mover - 1)];
  Position z = c.positions[static_cast<std::size_t>(mover - 1)] + 1;
  for (int j = mover; j < c.size(); ++j, ++z) {
    // residents to the right sit at consecutive sites until the first gap
    if (c.positions[static_cast<std::size_t>(j)] != z) break;
    const int r = c.word[static_cast<std::size_t>(j)];
    if (r < s) return {false, z, j + 1};
    if (r == s && rule == RuleType::TasepType) return {};
  }
  return {false, z, std::nullopt};
}

/// Applies the long-range swap of particle `mover` directly.
inline Configuration apply_move(const Configuration& c, int mover, RuleType rule) {
  const MoveTarget t = long_range_target(c, mover, rule);
  if (t.null_move) return c;
  Configuration out = c;
  const auto i = static_cast<std::size_t>(mover - 1);
  if (t.displaced) {
    std::swap(out.word[i], out.word[static_cast<std::size_t>(*t.displaced - 1)]);
    return out;
  }
  // the mover lands past the run of residents it crossed; shift their labels left
  std::size_t last = i;
  while (last + 1 < out.positions.size() && out.positions[last + 1] < t.site) ++last;
  const int s = out.word[i];
  for (std::size_t k = i; k < last; ++k) {
    out.positions[k] = out.positions[k + 1];
    out.word[k] = out.word[k + 1];
  }
  out.positions[last] = t.site;
  out.word[last] = s;
  return out;
}

enum class Resolution { ForwardJump, BackwardPush, BackwardJumpOver };

inline std::string to_string(Resolution r) {
  switch (r) {
    case Resolution::ForwardJump: return "forward-jump";
    case Resolution::BackwardPush: return "backward-push";
    case Resolution::BackwardJumpOver: return "backward-jump-over";
  }
  return "?";
}

/// Hidden state with two particles on `site`. `left_species` is the particle in
/// motion (the mover going forward, or the displaced particle going backward);
/// `right_species` is the particle already sitting there.
struct HiddenStep {
  Position site;
  int left_species;
  int right_species;
  Resolution resolution;

  friend bool operator==(const HiddenStep&, const HiddenStep&) = default;
};

struct MoveTrace {
  int mover = 0;
  std::vector<HiddenStep> steps;
  bool null_move = false;
};

/// Realizes a long-range swap as a chain of local hidden-state updates: forward
/// jumps over the crossed residents, a backward push at the target, then
/// backward jump-overs of the displaced particle down to the vacated site.
inline MoveTrace local_decomposition(const Configuration& c, int mover, RuleType rule) {
  const MoveTarget t = long_range_target(c, mover, rule);
  MoveTrace trace;
  trace.mover = mover;
  if (t.null_move) {
    trace.null_move = true;
    return trace;
  }
  const auto i = static_cast<std::size_t>(mover - 1);
  const int s = c.word[i];
  std::size_t j = i + 1;
  for (; j < c.positions.size() && c.positions[j] < t.site; ++j)
    trace.steps.push_back({c.positions[j], s, c.word[j], Resolution::ForwardJump});
  if (!t.displaced) return trace;
  const int w = c.word[static_cast<std::size_t>(*t.displaced - 1)];
  trace.steps.push_back({t.site, s, w, Resolution::BackwardPush});
  for (std::size_t k = j; k-- > i + 1;)
    trace.steps.push_back({c.positions[k], w, c.word[k], Resolution::BackwardJumpOver});
  return trace;
}

/// Replays a trace on an explicit site map, checking every hidden state against
/// the occupation it claims, and returns the resulting configuration.
inline Configuration replay(const Configuration& c, const MoveTrace& trace) {
  if (trace.null_move) return c;
  std::map<Position, int> sites;
  for (int k = 0; k < c.size(); ++k) sites[c.positions[static_cast<std::size_t>(k)]] = c.word[static_cast<std::size_t>(k)];
  const Position start = c.positions.at(static_cast<std::size_t>(trace.mover - 1));
  int moving = sites.at(start);
  sites.erase(start);
  Position cur = start;
  bool forward = true;
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::NumericalInconsistency, "trace replay: " + msg); };
  for (const auto& st : trace.steps) {
    auto it = sites.find(st.site);
    if (it == sites.end() || it->second != st.right_species || moving != st.left_species)
      fail("hidden state does not match occupation at site " + std::to_string(st.site));
    switch (st.resolution) {
      case Resolution::ForwardJump:
        if (!forward || st.site != cur + 1) fail("forward jump out of sequence");
        cur = st.site;
        break;
      case Resolution::BackwardPush:
        if (!forward || st.site != cur + 1) fail("push out of sequence");
        std::swap(moving, it->second);
        cur = st.site;
        forward = false;
        break;
      case Resolution::BackwardJumpOver:
        if (forward || st.site != cur - 1) fail("backward jump out of sequence");
        cur = st.site;
        break;
    }
  }
  const Position landing = forward ? cur + 1 : cur - 1;
  if (sites.count(landing)) fail("landing site occupied");
  sites[landing] = moving;
  Configuration out;
  for (const auto& [x, s] : sites) {
    out.positions.push_back(x);
    out.word.push_back(s);
  }
  out.validate();
  return out;
}

/// splitmix64 finalizer, used to derive independent per-trajectory seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Uniform draw in [0,1) from the top 53 bits, independent of library distributions.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// One trajectory up to time t. Every particle carries a rate-1 clock, so the
/// total event rate is n and the ringing particle is uniform.
inline Configuration simulate(const Configuration& c0, double t, std::uint64_t seed, RuleType rule) {
  require_integrable(rule);
  c0.validate();
  require(t >= 0.0 && std::isfinite(t), ErrorKind::InvalidParameter, "time must be finite and nonnegative");
  std::mt19937_64 rng(seed);
  const int n = c0.size();
  Configuration c = c0;
  double clock = 0.0;
  for (;;) {
    clock += -std::log1p(-unit_uniform(rng)) / n;
    if (clock > t) break;
    const int mover = 1 + std::min(n - 1, static_cast<int>(unit_uniform(rng) * n));
    c = apply_move(c, mover, rule);
  }
  return c;
}

struct Ensemble {
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::map<Configuration, std::uint64_t> counts;

  double frequency(const Configuration& c) const {
    auto it = counts.find(c);
    return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(trials);
  }
};

inline Ensemble simulate_ensemble(const Configuration& c0, double t, std::uint64_t trials, std::uint64_t seed,
                                  RuleType rule) {
  require(trials >= 1, ErrorKind::InvalidParameter, "need at least one trial");
  Ensemble e{seed, trials, {}};
  for (std::uint64_t k = 0; k < trials; ++k) ++e.counts[simulate(c0, t, trajectory_seed(seed, k), rule)];
  return e;
}

}  // namespace lrswap
