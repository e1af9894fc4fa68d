#include <catch_amalgamated.hpp>

#include "oracle.hpp"

using namespace lrswap;
using Op = TensorOperator<Rational>;

namespace {

DenseMatrix<Rational> dense(const PairMatrix& m) { return m.to_operator<Rational>().to_dense(); }
DenseMatrix<Rational> dense(const BasisMap& m) { return Op::from_basis_map(m).to_dense(); }

const RuleType kAllRules[] = {RuleType::DropPushType, RuleType::TasepType, RuleType::NonIntegrableAlt};
const RuleType kIntegrable[] = {RuleType::DropPushType, RuleType::TasepType};

}  // namespace

TEST_CASE("pair matrices for two species, drop-push", "[pairalg]") {
  const auto pm = build_pair_matrices(2, RuleType::DropPushType);
  CHECK(dense(pm.jump) == oracle::literal({{1, 0, 0, 0}, {0, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}));
  CHECK(dense(pm.exchange) == oracle::literal({{0, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}));
}

TEST_CASE("pair matrices for two species, tasep", "[pairalg]") {
  const auto pm = build_pair_matrices(2, RuleType::TasepType);
  CHECK(pm.jump.entry(Word{2, 1}, Word{1, 2}) == 1);
  CHECK(dense(pm.jump) == oracle::literal({{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 0}}));
  CHECK(pm.exchange.entry(Word{1, 1}, Word{1, 1}) == 1);
  CHECK(pm.exchange.entry(Word{1, 2}, Word{2, 1}) == 1);
  CHECK(pm.exchange.entry(Word{2, 2}, Word{2, 2}) == 1);
  CHECK(Op::from_basis_map(pm.exchange.map()).nonzeros() == 3);
}

TEST_CASE("single species reduces to the scalar boundary condition", "[pairalg]") {
  const auto pm = build_pair_matrices(1, RuleType::DropPushType);
  CHECK(pm.jump.entry(std::size_t{0}, std::size_t{0}) == 1);
  CHECK(pm.exchange.entry(std::size_t{0}, std::size_t{0}) == 0);
  CHECK_THROWS_AS(build_pair_matrices(0, RuleType::DropPushType), Error);
}

TEST_CASE("pair matrices agree with the rule tables for N up to 4", "[pairalg]") {
  for (auto rule : kAllRules)
    for (int N = 1; N <= 4; ++N) {
      const auto pm = build_pair_matrices(N, rule);
      const auto [B, Bp] = oracle::pair_matrices<Rational>(N, rule);
      CHECK(dense(pm.jump) == B);
      CHECK(dense(pm.exchange) == Bp);
    }
}

TEST_CASE("every attempt has exactly one outcome for integrable rules", "[pairalg][property]") {
  for (auto rule : kIntegrable)
    for (int N = 1; N <= 4; ++N) {
      const auto sum = dense(build_pair_matrices(N, rule).jump) + dense(build_pair_matrices(N, rule).exchange);
      for (std::size_t c = 0; c < sum.cols(); ++c) {
        int ones = 0, others = 0;
        for (std::size_t r = 0; r < sum.rows(); ++r) {
          if (sum(r, c) == 1) ++ones;
          else if (sum(r, c) != 0) ++others;
        }
        CHECK(ones == 1);
        CHECK(others == 0);
      }
      CHECK(check_unique_outcome(build_pair_matrices(N, rule)).pass);
    }
}

TEST_CASE("embedding acts on two positions and matches Kronecker products", "[pairalg]") {
  const auto pm = build_pair_matrices(3, RuleType::DropPushType);
  const WordSpace space(3, 3);
  const auto b1 = embed(pm.jump, 1, 3);
  for (std::size_t col = 0; col < space.size(); ++col)
    for (std::size_t row = 0; row < space.size(); ++row) {
      const Word p = space.word(row), v = space.word(col);
      const int expected = p[2] == v[2] && pm.jump.entry(Word{p[0], p[1]}, Word{v[0], v[1]}) ? 1 : 0;
      CHECK(Op::from_basis_map(b1).entry(row, col) == expected);
    }
  for (auto rule : kAllRules)
    for (int n : {2, 3, 4})
      for (int i = 1; i < n; ++i) {
        const auto p = build_pair_matrices(2, rule);
        CHECK(dense(embed(p.exchange, i, n)) == oracle::embed(dense(p.exchange), i, n, 2));
        CHECK(dense(embed(p.jump, i, n)) == oracle::embed(dense(p.jump), i, n, 2));
      }
  CHECK(embed(pm.jump, 1, 2) == pm.jump.map());
  CHECK_THROWS_AS(embed(pm.jump, 0, 3), Error);
  CHECK_THROWS_AS(embed(pm.jump, 3, 3), Error);
}

TEST_CASE("sparse and dense forms convert losslessly", "[pairalg][property]") {
  for (auto rule : kAllRules) {
    const PairAlgebra alg(3, 2, rule);
    for (int i = 1; i < 3; ++i) {
      const auto op = Op::from_basis_map(alg.jump(i)) + Rational(3) * Op::from_basis_map(alg.exchange(i));
      CHECK(Op::from_dense(op.to_dense()) == op);
    }
    const auto a = alg.frak_A(1);
    CHECK(Op::from_dense(a.to_dense()) == a);
  }
}

TEST_CASE("products of embedded B, B' stay partial permutations", "[pairalg][property]") {
  for (auto rule : kAllRules) {
    const PairAlgebra alg(4, 2, rule);
    Op prod = Op::identity(alg.dim());
    for (int k : {1, 3, 2, 1, 2, 3, 3, 1}) {
      prod = Op::from_basis_map(k % 2 ? alg.jump(k) : alg.exchange(k)) * prod;
      CHECK(prod.is_partial_permutation());
    }
  }
}

TEST_CASE("swap matrices", "[pairalg]") {
  for (auto rule : kIntegrable)
    for (int N : {2, 3}) {
      const PairAlgebra alg2(2, N, rule);
      CHECK(alg2.swap_matrix(1, 2) == embed(alg2.pair_matrices().exchange, 1, 2));
      const PairAlgebra alg(3, N, rule);
      const auto [B, Bp] = oracle::pair_matrices<Rational>(N, rule);
      const auto B1 = oracle::embed(B, 1, 3, N), B2 = oracle::embed(B, 2, 3, N);
      const auto Bp1 = oracle::embed(Bp, 1, 3, N), Bp2 = oracle::embed(Bp, 2, 3, N);
      CHECK(dense(alg.swap_matrix(1, 3)) == B2 * Bp1 * Bp2);
      CHECK(dense(alg.swap_matrix(1, 3)) == Bp1 * Bp2 * B1);
      CHECK(dense(alg.swap_matrix(1, 2)) == Bp1);
      CHECK(dense(alg.swap_matrix(2, 3)) == Bp2);
      // B_2 M_12 B'_2 = M_13
      CHECK(dense(alg.jump(2) * alg.swap_matrix(1, 2) * alg.exchange(2)) == dense(alg.swap_matrix(1, 3)));
      CHECK_THROWS_AS(alg.swap_matrix(2, 2), Error);
      CHECK_THROWS_AS(swap_matrix(2, 1, 3, N, rule), Error);
    }
}

TEST_CASE("frak A closed form", "[pairalg]") {
  for (auto rule : kIntegrable) {
    const PairAlgebra alg(3, 3, rule);
    CHECK(alg.frak_A(0) == Op::identity(alg.dim()));
    const auto [B, Bp] = oracle::pair_matrices<Rational>(3, rule);
    const auto I = DenseMatrix<Rational>::identity(27);
    CHECK(alg.frak_A(1).to_dense() == I + oracle::embed(B, 2, 3, 3) * oracle::embed(Bp, 1, 3, 3));
    // A_{k-1} B'_k = M_{1,k+1} + ... + M_{k,k+1} at k = 2
    const auto lhs = alg.frak_A(1) * Op::from_basis_map(alg.exchange(2));
    const auto rhs = Op::from_basis_map(alg.swap_matrix(1, 3)) + Op::from_basis_map(alg.swap_matrix(2, 3));
    CHECK(lhs == rhs);
    CHECK_THROWS_AS(alg.frak_A(2), Error);
    CHECK_THROWS_AS(frak_A(-1, 3, 3, rule), Error);
  }
}

TEST_CASE("braid identity against dense products", "[pairalg][property]") {
  for (auto rule : kIntegrable)
    for (int n : {3, 4})
      for (int N : {2, 3}) {
        const auto [B, Bp] = oracle::pair_matrices<Rational>(N, rule);
        auto lhs = oracle::identity_power<Rational>(N, n), rhs = lhs;
        // B'_1 ... B'_{n-1} B_{n-2} ... B_1
        for (int i = 1; i <= n - 1; ++i) lhs = lhs * oracle::embed(Bp, i, n, N);
        for (int i = n - 2; i >= 1; --i) lhs = lhs * oracle::embed(B, i, n, N);
        // B_{n-1} ... B_2 B'_1 ... B'_{n-1}
        for (int i = n - 1; i >= 2; --i) rhs = rhs * oracle::embed(B, i, n, N);
        for (int i = 1; i <= n - 1; ++i) rhs = rhs * oracle::embed(Bp, i, n, N);
        CHECK(lhs == rhs);
      }
}

TEST_CASE("nilpotency of the chained products", "[pairalg][property]") {
  for (auto rule : kIntegrable)
    for (int n = 2; n <= 5; ++n)
      for (int N = 1; N <= 3; ++N) {
        const PairAlgebra alg(n, N, rule);
        for (int k = 1; k + 1 <= n - 1; ++k) {
          // (B_{k+1} ... B_2 B'_1 ... B'_k)^2 = 0
          const BasisMap chain = alg.jumps(k + 1, 2) * alg.exchanges(1, k);
          CHECK((chain * chain).is_zero());
        }
      }
}

TEST_CASE("inverse closed form", "[pairalg][property]") {
  for (auto rule : kIntegrable)
    for (int n : {3, 4})
      for (int N : {2, 3}) {
        const PairAlgebra alg(n, N, rule);
        const auto I = Op::identity(alg.dim());
        for (int k = 1; k <= n - 2; ++k) {
          const auto x = alg.frak_step(alg.frak_A(k - 1), k);
          CHECK((I - x) * (I + x) == I);
          CHECK((I + x) * (I - x) == I);
        }
      }
}

TEST_CASE("non-adjacent embeddings commute", "[pairalg][property]") {
  for (auto rule : kAllRules) {
    const PairAlgebra alg(5, 2, rule);
    for (int i = 1; i <= 4; ++i)
      for (int j = 1; j <= 4; ++j) {
        if (std::abs(i - j) <= 1) continue;
        CHECK(alg.jump(i) * alg.exchange(j) == alg.exchange(j) * alg.jump(i));
        CHECK(alg.jump(i) * alg.jump(j) == alg.jump(j) * alg.jump(i));
        CHECK(alg.exchange(i) * alg.exchange(j) == alg.exchange(j) * alg.exchange(i));
      }
  }
}

TEST_CASE("identity suite passes for integrable rules", "[pairalg]") {
  for (auto rule : kIntegrable) {
    for (int n : {3, 4})
      for (int N : {2, 3}) {
        const auto rep = verify_identities(n, N, rule);
        INFO(to_string(rule) << " n=" << n << " N=" << N);
        CHECK(rep.all_pass());
        CHECK(rep.find("braid(1," + std::to_string(n) + ")") != nullptr);
      }
    CHECK(verify_identities(5, 2, rule).all_pass());
  }
}

TEST_CASE("non-integrable rule breaks reducibility with a witness", "[pairalg]") {
  const auto rep = verify_identities(3, 2, RuleType::NonIntegrableAlt);
  const auto fails = rep.failures("reducibility");
  REQUIRE_FALSE(fails.empty());
  for (const auto* f : fails) {
    REQUIRE(f->witness.has_value());
    CHECK(f->witness->size() == 3);
  }
  CHECK(verify_identities(3, 1, RuleType::NonIntegrableAlt).all_pass());
}

TEST_CASE("size cap is enforced", "[pairalg]") {
  CHECK_THROWS_MATCHES(verify_identities(9, 3, RuleType::DropPushType), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::ResourceLimit;
                       }));
  CHECK_NOTHROW(PairAlgebra(12, 2, RuleType::DropPushType));
  CHECK_THROWS_AS(PairAlgebra(13, 2, RuleType::DropPushType), Error);
}
