#include <catch_amalgamated.hpp>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <random>

#include "oracle.hpp"

using namespace lrswap;

namespace {

const RuleType kIntegrable[] = {RuleType::DropPushType, RuleType::TasepType};

Configuration random_configuration(std::mt19937_64& rng, int n, int N) {
  Positions x;
  Word w;
  Position p = static_cast<Position>(rng() % 3);
  for (int i = 0; i < n; ++i) {
    x.push_back(p);
    p += 1 + (rng() % 3 == 0 ? static_cast<Position>(rng() % 3) : 0);
    w.push_back(1 + static_cast<int>(rng() % static_cast<unsigned>(N)));
  }
  return Configuration(x, w);
}

}  // namespace

TEST_CASE("configuration validation and key", "[dynamics]") {
  CHECK(Configuration({0, 1, 5}, {2, 3, 1}).key() == "0,1,5|231");
  CHECK_THROWS_AS(Configuration({0, 0}, {1, 1}), Error);
  CHECK_THROWS_AS(Configuration({1, 0}, {1, 1}), Error);
  CHECK_THROWS_AS(Configuration({0, 1}, {1}), Error);
  CHECK_THROWS_AS(Configuration({0}, {0}), Error);
  CHECK(parse_positions("-2,0,7") == Positions{-2, 0, 7});
  CHECK_THROWS_AS(parse_positions("1,x"), Error);
}

TEST_CASE("long-range swap targets", "[dynamics]") {
  const Configuration c({0, 1, 2}, {2, 3, 1});
  const auto t = long_range_target(c, 1, RuleType::DropPushType);
  CHECK_FALSE(t.null_move);
  CHECK(t.site == 2);
  CHECK(t.displaced == std::optional<int>(3));
  CHECK(apply_move(c, 1, RuleType::DropPushType) == Configuration({0, 1, 2}, {1, 3, 2}));

  CHECK(long_range_target(Configuration({0}, {1}), 1, RuleType::DropPushType).site == 1);
  CHECK(apply_move(Configuration({0, 1}, {1, 1}), 1, RuleType::DropPushType) == Configuration({1, 2}, {1, 1}));
  CHECK(long_range_target(Configuration({0, 1}, {1, 1}), 1, RuleType::TasepType).null_move);
  CHECK(apply_move(Configuration({0, 1}, {1, 1}), 1, RuleType::TasepType) == Configuration({0, 1}, {1, 1}));
  // equal species strictly between mover and weaker target blocks under tasep only
  const Configuration d({0, 1, 2}, {2, 2, 1});
  CHECK(apply_move(d, 1, RuleType::DropPushType) == Configuration({0, 1, 2}, {1, 2, 2}));
  CHECK(long_range_target(d, 1, RuleType::TasepType).null_move);
  // stronger particles are jumped over; a vacancy after them is the target
  CHECK(apply_move(Configuration({0, 1, 2}, {1, 2, 3}), 1, RuleType::TasepType) ==
        Configuration({1, 2, 3}, {2, 3, 1}));

  CHECK_THROWS_AS(long_range_target(c, 1, RuleType::NonIntegrableAlt), Error);
  CHECK_THROWS_AS(long_range_target(c, 0, RuleType::DropPushType), Error);
  CHECK_THROWS_AS(long_range_target(c, 4, RuleType::DropPushType), Error);
}

TEST_CASE("hidden-state decomposition of the worked example", "[dynamics]") {
  const Configuration c({0, 1, 2}, {2, 3, 1});
  const auto tr = local_decomposition(c, 1, RuleType::DropPushType);
  REQUIRE(tr.steps.size() == 3);
  CHECK(tr.steps[0] == HiddenStep{1, 2, 3, Resolution::ForwardJump});
  CHECK(tr.steps[1] == HiddenStep{2, 2, 1, Resolution::BackwardPush});
  CHECK(tr.steps[2] == HiddenStep{1, 1, 3, Resolution::BackwardJumpOver});
  CHECK(replay(c, tr) == Configuration({0, 1, 2}, {1, 3, 2}));

  const auto push = local_decomposition(Configuration({0, 1}, {2, 1}), 1, RuleType::DropPushType);
  REQUIRE(push.steps.size() == 1);
  CHECK(push.steps[0].resolution == Resolution::BackwardPush);

  const auto free_move = local_decomposition(Configuration({0, 2}, {1, 1}), 1, RuleType::DropPushType);
  CHECK(free_move.steps.empty());
  CHECK_FALSE(free_move.null_move);
  CHECK(replay(Configuration({0, 2}, {1, 1}), free_move) == Configuration({1, 2}, {1, 1}));

  CHECK(local_decomposition(Configuration({0, 1}, {1, 1}), 1, RuleType::TasepType).null_move);
}

TEST_CASE("decomposition replays to the direct swap on random configurations", "[dynamics][property]") {
  std::mt19937_64 rng(2718);
  for (int it = 0; it < 10000; ++it) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const int N = 1 + static_cast<int>(rng() % 3);
    const Configuration c = random_configuration(rng, n, N);
    for (auto rule : kIntegrable) {
      const int mover = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
      const Configuration direct = apply_move(c, mover, rule);
      REQUIRE(replay(c, local_decomposition(c, mover, rule)) == direct);
      // positions stay ordered and species content is conserved
      CHECK(species_content(direct.word) == species_content(c.word));
      if (rule == RuleType::DropPushType) CHECK(direct != c);
    }
  }
}

TEST_CASE("replay rejects inconsistent traces", "[dynamics]") {
  const Configuration c({0, 1, 2}, {2, 3, 1});
  auto tr = local_decomposition(c, 1, RuleType::DropPushType);
  tr.steps[0].right_species = 1;
  CHECK_THROWS_AS(replay(c, tr), Error);
}

TEST_CASE("simulation is deterministic and starts at c0", "[dynamics]") {
  const Configuration c({0, 1, 2}, {2, 3, 1});
  CHECK(simulate(c, 0.0, 1, RuleType::DropPushType) == c);
  CHECK(simulate(c, 3.0, 11, RuleType::DropPushType) == simulate(c, 3.0, 11, RuleType::DropPushType));
  CHECK(trajectory_seed(5, 0) != trajectory_seed(5, 1));
  CHECK(trajectory_seed(5, 1) != trajectory_seed(6, 1));
  CHECK_THROWS_AS(simulate(c, -1.0, 1, RuleType::DropPushType), Error);
  CHECK_THROWS_AS(simulate(c, 1.0, 1, RuleType::NonIntegrableAlt), Error);
}

TEST_CASE("free particle displacement is Poisson", "[dynamics][mc]") {
  const auto e = simulate_ensemble(Configuration({0}, {1}), 1.0, 100000, 31337, RuleType::DropPushType);
  const int bins = 7;  // 0..5 and 6+
  std::vector<double> observed(bins, 0.0), expected(bins, 0.0);
  for (const auto& [c, k] : e.counts) observed[static_cast<std::size_t>(std::min<Position>(c.positions[0], bins - 1))] += k;
  double tail = 1.0;
  for (int k = 0; k < bins - 1; ++k) {
    const double p = std::exp(-1.0) / std::tgamma(k + 1.0);
    expected[static_cast<std::size_t>(k)] = p * 1e5;
    tail -= p;
  }
  expected[bins - 1] = tail * 1e5;
  double chi2 = 0.0;
  for (int k = 0; k < bins; ++k) chi2 += std::pow(observed[k] - expected[k], 2) / expected[k];
  const double p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(bins - 1), chi2));
  INFO("chi2 = " << chi2 << ", p = " << p_value);
  CHECK(p_value > 0.001);
}

TEST_CASE("Poisson weights and the series oracle", "[dynamics][series]") {
  const auto pw = poisson_weights(2.0, 1e-12);
  CHECK(pw.tail < 1e-12);
  double s = pw.tail;
  for (double w : pw.weights) s += w;
  CHECK(std::abs(s - 1.0) < 1e-15);
  CHECK(poisson_weights(0.0, 1e-12).weights.size() == 1);

  TransitionQuery q{Configuration({0}, {1}), Configuration({3}, {1}), 1.0, RuleType::DropPushType};
  CHECK(std::abs(series_oracle(q) - std::exp(-1.0) / 6.0) < 1e-16);

  const Configuration y({0, 1}, {2, 1});
  CHECK(series_oracle({y, y, 0.0, RuleType::DropPushType}) == 1.0);
  CHECK(series_oracle({y, Configuration({0, 1}, {1, 2}), 0.0, RuleType::DropPushType}) == 0.0);
  CHECK(series_oracle({y, Configuration({0, 1}, {1, 1}), 1.0, RuleType::DropPushType}) == 0.0);
  CHECK_THROWS_AS(series_oracle({y, y, 1.0, RuleType::NonIntegrableAlt}), Error);
}

TEST_CASE("series oracle conserves mass", "[dynamics][series][property]") {
  for (auto rule : kIntegrable)
    for (const auto& c : {Configuration({0, 1}, {2, 1}), Configuration({0, 1, 3}, {2, 3, 1}), Configuration({0, 2}, {1, 1})})
      for (double t : {0.3, 1.0, 2.0}) {
        const auto r = series_distribution(c, t, rule, 1e-12);
        CHECK(std::abs(r.total_mass() - 1.0) <= 1e-12);
        for (const auto& [state, p] : r.probabilities) CHECK(p >= 0.0);
      }
}

TEST_CASE("jump chain in exact arithmetic", "[dynamics][series]") {
  // two equal drop-push particles, three steps, enumerated by hand
  const auto d = jump_chain<Rational>(Configuration({0, 1}, {1, 1}), 3, RuleType::DropPushType);
  const std::map<Configuration, Rational> expected{
      {Configuration({3, 4}, {1, 1}), make_rational(1, 8)}, {Configuration({2, 4}, {1, 1}), make_rational(1, 8)},
      {Configuration({2, 3}, {1, 1}), make_rational(2, 8)}, {Configuration({1, 4}, {1, 1}), make_rational(1, 8)},
      {Configuration({1, 3}, {1, 1}), make_rational(2, 8)}, {Configuration({0, 4}, {1, 1}), make_rational(1, 8)}};
  CHECK(d == expected);
}

TEST_CASE("Monte Carlo agrees with the series oracle", "[dynamics][mc]") {
  const Configuration y({0, 1}, {2, 1});
  const auto e = simulate_ensemble(y, 1.0, 100000, 7, RuleType::DropPushType);
  const auto s = series_distribution(y, 1.0, RuleType::DropPushType, 1e-14);
  for (const auto& [c, p] : s.probabilities) {
    if (p <= 1e-3) continue;
    const double se = std::sqrt(p * (1 - p) / 1e5);
    INFO(c.key() << " series " << p << " mc " << e.frequency(c));
    CHECK(std::abs(e.frequency(c) - p) <= 4 * se);
  }
  const auto again = simulate_ensemble(y, 1.0, 100000, 7, RuleType::DropPushType);
  CHECK(again.counts == e.counts);
}
