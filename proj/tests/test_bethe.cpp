#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracle.hpp"

using namespace lrswap;

namespace {

QuadratureConfig quad(RuleType rule, int n) { return QuadratureConfig::defaults(rule, n); }

TransitionQuery query(Configuration y, Configuration x, double t, RuleType rule) {
  return TransitionQuery{std::move(y), std::move(x), t, rule};
}

/// Integrand from dense A_sigma products.
Complex dense_integrand(const std::vector<Complex>& xi, const TransitionQuery& q) {
  const int n = q.particles(), N = q.species();
  const WordSpace space(N, n);
  Complex total(0.0, 0.0);
  for (const auto& s : all_permutations(n)) {
    const auto A = oracle::a_sigma(n, s.reduced_word(), xi, N, q.rule);
    Complex term = A(space.index(q.final_state.word), space.index(q.initial.word));
    for (int i = 1; i <= n; ++i)
      term *= std::pow(xi[static_cast<std::size_t>(s(i) - 1)],
                       static_cast<int>(q.final_state.positions[static_cast<std::size_t>(i - 1)] -
                                        q.initial.positions[static_cast<std::size_t>(s(i) - 1)] - 1));
    total += term;
  }
  for (const auto& v : xi) total *= std::exp((1.0 / v - 1.0) * q.time);
  return total;
}

}  // namespace

TEST_CASE("quadrature configuration checks", "[bethe]") {
  QuadratureConfig c = quad(RuleType::DropPushType, 2);
  CHECK(c.radius == 1.5);
  CHECK(c.nodes == 64);
  CHECK(quad(RuleType::DropPushType, 3).nodes == 32);
  CHECK(quad(RuleType::TasepType, 2).radius == 0.5);
  c.nodes = 48;
  CHECK_THROWS_AS(c.validate(RuleType::DropPushType), Error);
  c.nodes = 4;
  CHECK_THROWS_AS(c.validate(RuleType::DropPushType), Error);
  c.nodes = 16;
  c.radius = 0.9;
  CHECK_THROWS_AS(c.validate(RuleType::DropPushType), Error);
  CHECK_NOTHROW(c.validate(RuleType::TasepType));
  c.radius = 1.2;
  CHECK_THROWS_AS(c.validate(RuleType::TasepType), Error);
  CHECK_THROWS_AS(c.validate(RuleType::NonIntegrableAlt), Error);
}

TEST_CASE("integrand: one particle and dense cross-check", "[bethe]") {
  const Complex z(0.3, 1.7);
  const auto q1 = query(Configuration({0}, {1}), Configuration({4}, {1}), 0.8, RuleType::DropPushType);
  const Complex expected = std::pow(z, 3) * std::exp((1.0 / z - 1.0) * 0.8);
  CHECK(std::abs(integrand_entry(SpectralPoint<Complex>{{z}}, q1) - expected) < 1e-13);

  const auto q2 = query(Configuration({0, 1}, {1, 1}), Configuration({0, 1}, {1, 1}), 0.0, RuleType::DropPushType);
  const std::vector<Complex> xi{Complex(0.0, 2.0), Complex(0.0, -2.0)};
  CHECK(std::abs(integrand_entry(SpectralPoint<Complex>{xi}, q2) - dense_integrand(xi, q2)) < 1e-13);

  for (auto rule : {RuleType::DropPushType, RuleType::TasepType}) {
    const auto q3 = query(Configuration({0, 1, 3}, {2, 3, 1}), Configuration({1, 2, 4}, {1, 3, 2}), 0.7, rule);
    const std::vector<Complex> x3{Complex(1.1, 0.4), Complex(-0.6, 1.3), Complex(0.2, -1.9)};
    CHECK(std::abs(integrand_entry(SpectralPoint<Complex>{x3}, q3) - dense_integrand(x3, q3)) < 1e-12);
  }
}

TEST_CASE("one particle is Poisson", "[bethe]") {
  const auto r = transition_probability(
      query(Configuration({0}, {1}), Configuration({3}, {1}), 1.0, RuleType::DropPushType), quad(RuleType::DropPushType, 1));
  CHECK(std::abs(r.probability - 0.06131324019524039) < 1e-12);
  CHECK(std::abs(r.imag_residual) < 1e-12);
  CHECK_FALSE(r.imag_warning);
}

TEST_CASE("initial condition at t = 0", "[bethe]") {
  for (auto rule : {RuleType::DropPushType, RuleType::TasepType}) {
    const Configuration y({0, 1}, {2, 1});
    CHECK(std::abs(transition_probability(query(y, y, 0.0, rule), quad(rule, 2)).probability - 1.0) < 1e-10);
    for (const auto& x : {Configuration({0, 1}, {1, 2}), Configuration({0, 2}, {2, 1}), Configuration({1, 2}, {1, 2})})
      CHECK(std::abs(transition_probability(query(y, x, 0.0, rule), quad(rule, 2)).probability) < 1e-10);
  }
  // different species content is zero without integration
  const auto r = transition_probability(query(Configuration({0, 1}, {2, 1}), Configuration({0, 1}, {1, 1}), 1.0,
                                              RuleType::DropPushType),
                                        quad(RuleType::DropPushType, 2));
  CHECK(r.probability == 0.0);
}

TEST_CASE("Bethe matches the series oracle, two particles", "[bethe]") {
  for (auto rule : {RuleType::DropPushType, RuleType::TasepType}) {
    const Configuration y({0, 1}, {2, 1});
    const auto q = query(y, Configuration({0, 1}, {1, 2}), 1.0, rule);
    auto cfg = quad(rule, 2);
    cfg.convergence_check = true;
    const auto r = transition_probability(q, cfg);
    CHECK(std::abs(r.probability - series_oracle(q)) < 1e-8);
    REQUIRE(r.convergence_delta.has_value());
    CHECK(*r.convergence_delta < 1e-8);
  }
}

TEST_CASE("Bethe matches the series oracle, three particles", "[bethe]") {
  const Configuration y({0, 1, 2}, {3, 2, 1});
  const auto q = query(y, Configuration({0, 1, 2}, {1, 2, 3}), 1.0, RuleType::DropPushType);
  CHECK(std::abs(transition_probability(q, quad(RuleType::DropPushType, 3)).probability - series_oracle(q)) < 1e-6);
}

TEST_CASE("radius invariance", "[bethe][property]") {
  const Configuration y({0, 1}, {2, 1});
  const auto q = query(y, Configuration({1, 2}, {1, 2}), 1.0, RuleType::DropPushType);
  QuadratureConfig a = quad(RuleType::DropPushType, 2), b = a;
  a.radius = 1.3;
  b.radius = 2.0;
  CHECK(std::abs(transition_probability(q, a).probability - transition_probability(q, b).probability) < 1e-8);
  const auto qt = query(y, Configuration({1, 2}, {1, 2}), 1.0, RuleType::TasepType);
  QuadratureConfig c = quad(RuleType::TasepType, 2), d = c;
  c.radius = 0.3;
  d.radius = 0.8;
  CHECK(std::abs(transition_probability(qt, c).probability - transition_probability(qt, d).probability) < 1e-8);
}

TEST_CASE("non-identity single-permutation integrals vanish", "[bethe]") {
  const auto cfg = quad(RuleType::DropPushType, 2);
  CHECK(vanishing_check(Permutation({2, 1}), {0, 1}, {0, 1}, 2, RuleType::DropPushType, cfg) < 1e-10);
  CHECK(vanishing_check(Permutation({2, 1}), {1, 2}, {0, 1}, 2, RuleType::DropPushType, cfg) < 1e-10);
  // the identity term is not zero
  CHECK(vanishing_check(Permutation({1, 2}), {0, 1}, {0, 1}, 2, RuleType::DropPushType, cfg) > 0.5);
  // aliasing error scales like r^-M against the pole at 1, so move the circle out
  QuadratureConfig c3 = quad(RuleType::DropPushType, 3);
  CHECK(vanishing_check(Permutation({3, 1, 2}), {0, 1, 2}, {0, 1, 2}, 2, RuleType::DropPushType, c3) > 1e-6);
  c3.radius = 3.0;
  CHECK(vanishing_check(Permutation({3, 1, 2}), {0, 1, 2}, {0, 1, 2}, 2, RuleType::DropPushType, c3) < 1e-12);
  CHECK_THROWS_AS(vanishing_check(Permutation({2, 1}), {0, 1}, {1, 2}, 2, RuleType::DropPushType, cfg), Error);
}

TEST_CASE("probability tables", "[bethe]") {
  const auto one = probability_table(Configuration({0}, {1}), 1.0, 20, RuleType::DropPushType,
                                     quad(RuleType::DropPushType, 1));
  REQUIRE(one.rows.size() == 21);
  // far rows carry r^x amplified roundoff
  for (const auto& r : one.rows)
    CHECK(std::abs(r.probability - std::exp(-1.0) / std::tgamma(r.state.positions[0] + 1.0)) < 1e-11);
  CHECK(std::abs(one.deficit) < 1e-10);

  const auto two = probability_table(Configuration({0, 1}, {1, 1}), 0.5, 8, RuleType::DropPushType,
                                     quad(RuleType::DropPushType, 2));
  CHECK(std::abs(two.total_mass - 1.0) < 1e-6);

  const auto ordered = probability_table(Configuration({0, 1}, {1, 2}), 1.0, 10, RuleType::DropPushType,
                                         quad(RuleType::DropPushType, 2));
  const auto series = series_distribution(Configuration({0, 1}, {1, 2}), 1.0, RuleType::DropPushType, 1e-15);
  for (const auto& r : ordered.rows) CHECK(std::abs(r.probability - series.at(r.state)) < 1e-10);

  CHECK_THROWS_AS(probability_table(Configuration({0, 1, 2, 3}, {1, 1, 1, 1}), 1.0, 3, RuleType::DropPushType,
                                    quad(RuleType::DropPushType, 3)),
                  Error);
  CHECK_THROWS_AS(probability_table(Configuration({0, 1, 2}, {1, 2, 3}), 1.0, 200, RuleType::DropPushType,
                                    quad(RuleType::DropPushType, 3)),
                  Error);
}

TEST_CASE("poisson window", "[bethe]") {
  CHECK(poisson_window(1, 1.0, 1e-6) == 9);  // P(Poisson(1) > 9) ~ 1.1e-7
  CHECK(poisson_window(2, 0.0, 1e-6) == 0);
}

TEST_CASE("threaded quadrature is bit-identical", "[bethe]") {
  const Configuration y({0, 1, 2}, {2, 3, 1});
  const auto q = query(y, Configuration({0, 1, 3}, {1, 3, 2}), 1.0, RuleType::DropPushType);
  QuadratureConfig a = quad(RuleType::DropPushType, 3);
  a.nodes = 16;
  QuadratureConfig b = a;
  b.threads = 4;
  const auto ra = transition_probability(q, a), rb = transition_probability(q, b);
  CHECK(ra.probability == rb.probability);
  CHECK(ra.imag_residual == rb.imag_residual);
  CHECK_THROWS_AS(transition_probability(query(Configuration({0, 1, 2, 3}, {1, 1, 1, 1}),
                                               Configuration({0, 1, 2, 3}, {1, 1, 1, 1}), 1.0, RuleType::DropPushType),
                                         a),
                  Error);
}
