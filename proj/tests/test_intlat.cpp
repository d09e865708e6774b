#include <doctest.h>

#include <random>

#include "a2k/intlat.hpp"
#include "a2k/ktheory.hpp"
#include "oracles.hpp"

using namespace a2k;

namespace {

IntMatrix diag(std::initializer_list<long> d, std::size_t rows, std::size_t cols) {
  IntMatrix m(rows, cols);
  std::size_t i = 0;
  for (long x : d) m(i, i) = x, ++i;
  return m;
}

// Diagonal shape, nonnegative entries and d_i | d_{i+1}.
void check_smith_shape(const SnfResult& r) {
  Integer prev = 1;
  for (std::size_t i = 0; i < r.d.rows(); ++i)
    for (std::size_t j = 0; j < r.d.cols(); ++j) {
      if (i != j) REQUIRE(r.d(i, j) == 0);
    }
  for (std::size_t i = 0; i < r.rank; ++i) {
    REQUIRE(r.d(i, i) > 0);
    REQUIRE(r.d(i, i) % prev == 0);
    prev = r.d(i, i);
  }
  for (std::size_t i = r.rank; i < std::min(r.d.rows(), r.d.cols()); ++i) REQUIRE(r.d(i, i) == 0);
}

}  // namespace

TEST_SUITE("intlat") {

TEST_CASE("small Smith forms") {
  CHECK(smith_normal_form(IntMatrix::identity(4)).d == IntMatrix::identity(4));
  CHECK(smith_normal_form(IntMatrix{{2, 4}, {6, 8}}).d == diag({2, 4}, 2, 2));
  const auto z = smith_normal_form(IntMatrix(3, 2));
  CHECK(z.d.is_zero());
  CHECK(z.rank == 0);
}

TEST_CASE("element order examples") {
  const IntMatrix r{{2, 0}, {0, 3}};
  CHECK(element_order(r, {1, 1}) == ElementOrder{false, 6});
  CHECK(element_order(r, {2, 0}) == ElementOrder{false, 1});
  CHECK(element_order(IntMatrix{{1, 1}}, {1, 0}).infinite);
}

TEST_CASE("lattice membership examples") {
  CHECK(lattice_member(IntMatrix{{2, 0}, {0, 3}}, {0, 0}));
  const IntMatrix two{{2, 0, 0}, {0, 2, 0}, {0, 0, 2}};
  CHECK_FALSE(lattice_member(two, {1, 1, 1}));
  CHECK(lattice_member(IntMatrix{{1, 2}, {3, 4}}, {4, 6}));
}

TEST_CASE("dimension errors") {
  CHECK_THROWS(element_order(IntMatrix{{1, 2}}, {1, 2, 3}));
}

TEST_CASE("determinant matches cofactor expansion") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    auto a = oracle::random_matrix(rng, 5, -9, 9);
    IntMatrix sq(a.rows(), a.rows());
    for (std::size_t i = 0; i < sq.rows(); ++i)
      for (std::size_t j = 0; j < sq.cols(); ++j) sq(i, j) = a(i, j % a.cols());
    REQUIRE(determinant(sq) == oracle::cofactor_det(sq));
  }
}

TEST_CASE("random Smith forms: reconstruction, unimodularity, divisibility") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 500; ++t) {
    const auto a = oracle::random_matrix(rng, 4, -5, 5);
    for (auto strategy : {PivotStrategy::min_abs, PivotStrategy::first_column}) {
      SnfOptions opts;
      opts.strategy = strategy;
      opts.method = SnfMethod::exact;
      const auto r = smith_normal_form(a, opts);
      REQUIRE(r.u);
      REQUIRE(r.v);
      REQUIRE(*r.u * a * *r.v == r.d);
      REQUIRE(abs(determinant(*r.u)) == 1);
      REQUIRE(abs(determinant(*r.v)) == 1);
      check_smith_shape(r);
      REQUIRE(r.rank == oracle::rank(a));
    }
  }
}

TEST_CASE("random Smith forms: strategies, methods and transposes agree") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 500; ++t) {
    const auto a = oracle::random_matrix(rng, 4, -5, 5);
    SnfOptions exact;
    exact.method = SnfMethod::exact;
    const auto want = smith_normal_form(a, exact).d;
    for (auto strategy : {PivotStrategy::min_abs, PivotStrategy::first_column})
      for (auto method : {SnfMethod::exact, SnfMethod::modular})
        for (auto exec : {Exec::serial, Exec::parallel}) {
          SnfOptions o;
          o.strategy = strategy;
          o.method = method;
          o.exec = exec;
          o.with_u = o.with_v = method == SnfMethod::exact;
          REQUIRE(smith_normal_form(a, o).d == want);
        }
    REQUIRE(smith_normal_form(a.transpose(), exact).invariant_factors() ==
            smith_normal_form(a, exact).invariant_factors());
  }
}

TEST_CASE("random element orders agree with brute force") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> entry(-5, 5);
  int finite = 0, infinite = 0;
  for (int t = 0; t < 500; ++t) {
    const auto r = oracle::random_matrix(rng, 4, -5, 5);
    IntVector v(r.cols());
    for (auto& x : v) x = entry(rng);
    const auto want = oracle::brute_order(r, v);
    for (auto method : {SnfMethod::exact, SnfMethod::modular}) {
      SnfOptions o;
      o.method = method;
      const auto got = element_order(r, v, o);
      if (want) {
        REQUIRE(*want > 0);
        REQUIRE_FALSE(got.infinite);
        REQUIRE(got.value == *want);
      } else {
        REQUIRE(got.infinite);
      }
      REQUIRE(lattice_member(r, v, o) == (want && *want == 1));
    }
    (want ? finite : infinite)++;
  }
  // both branches of the oracle are exercised
  CHECK(finite > 50);
  CHECK(infinite > 50);
}

TEST_CASE("left-tracked Smith form reports U v") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    const auto a = oracle::random_matrix(rng, 4, -5, 5);
    IntVector v(a.rows());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<long>(i) - 1;
    std::vector<IntVector> left{v};
    SnfOptions o;
    o.method = SnfMethod::exact;
    const auto full = smith_normal_form(a, o);
    smith_normal_form(a, o, left);
    REQUIRE(left[0] == *full.u * v);
  }
}

TEST_CASE("triplet round trip") {
  const IntMatrix a{{0, -3}, {7, 0}, {0, 0}};
  CHECK(a.to_triplet() == "3 2 2\n0 1 -3\n1 0 7\n");
  CHECK(IntMatrix::from_triplet(a.to_triplet()) == a);
  CHECK_THROWS(IntMatrix::from_triplet("2 2 1\n5 0 1\n"));
}

TEST_CASE("production matrices: strategies and methods agree") {
  for (std::uint64_t q : {2, 3}) {
    const auto& pl = oracle::pipeline(q);
    const auto r = relation_matrix(pl.tm.m1, pl.tm.m2, RelationSet::m1_only);
    SnfOptions exact;
    exact.method = SnfMethod::exact;
    exact.with_u = exact.with_v = false;
    const auto want = smith_normal_form(r, exact).d;
    for (auto strategy : {PivotStrategy::min_abs, PivotStrategy::first_column}) {
      SnfOptions o;
      o.strategy = strategy;
      o.method = SnfMethod::modular;
      CHECK(smith_normal_form(r, o).d == want);
    }
  }
}

}  // TEST_SUITE
