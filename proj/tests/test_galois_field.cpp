#include <doctest.h>

#include <random>
#include <set>

#include "a2k/galois_field.hpp"
#include "oracles.hpp"

using namespace a2k;

TEST_SUITE("galois_field") {

TEST_CASE("F8 default modulus and trace values") {
  const auto f = make_field(2, 3);
  CHECK(f->modulus == std::vector<unsigned>{1, 1, 0, 1});
  CHECK(f->primitive);
  const auto one = FieldElem::one(f);
  const auto g = FieldElem::indeterminate(f);
  CHECK(relative_trace(one, 1) == one);
  CHECK(relative_trace(g, 1).is_zero());
}

TEST_CASE("discrete log examples in F8") {
  const auto f = make_field(2, 3);
  const auto g = FieldElem::indeterminate(f);
  const auto one = FieldElem::one(f);
  CHECK(discrete_log(g, one) == 0);
  CHECK(discrete_log(g, pow(g, 3)) == 3);
  CHECK(discrete_log(g, g + one) == 3);
}

TEST_CASE("malformed and non-primitive moduli are rejected") {
  CHECK_THROWS_AS(make_field(4, 3), FieldError);
  CHECK_THROWS_AS(make_field(2, 3, std::vector<unsigned>{1, 0, 0, 1}), FieldError);   // x^3+1 = (x+1)(x^2+x+1)
  CHECK_THROWS_AS(make_field(2, 4, std::vector<unsigned>{1, 1, 1, 1, 1}), FieldError);  // x^4+..+1 has order 5
  CHECK_THROWS_AS(parse_modulus("1,x,1"), std::exception);
  CHECK(parse_modulus("1,1,0,1") == std::vector<unsigned>{1, 1, 0, 1});
}

TEST_CASE("prime power decomposition") {
  CHECK(prime_power(8) == std::make_pair(2u, 3u));
  CHECK(prime_power(9) == std::make_pair(3u, 2u));
  CHECK(prime_power(5) == std::make_pair(5u, 1u));
  CHECK_FALSE(prime_power(6));
  CHECK_FALSE(prime_power(1));
  CHECK_FALSE(prime_power(12));
}

// Every field needed for q in {2,3,4,5} plus the q=8 cubic.
struct FieldCase {
  unsigned p, k;
};
const FieldCase kCubics[] = {{2, 3}, {3, 3}, {2, 6}, {5, 3}, {2, 9}};

TEST_CASE("multiplication agrees with polynomial arithmetic") {
  std::mt19937_64 rng(11);
  for (auto [p, k] : kCubics) {
    const auto f = make_field(p, k);
    const std::uint32_t order = static_cast<std::uint32_t>(f->order);
    std::uniform_int_distribution<std::uint32_t> pick(0, order - 1);
    const bool exhaustive = order <= 125;
    const std::size_t trials = exhaustive ? std::size_t{order} * order : 20000;
    for (std::size_t t = 0; t < trials; ++t) {
      const ElemCode a = exhaustive ? static_cast<ElemCode>(t / order) : pick(rng);
      const ElemCode b = exhaustive ? static_cast<ElemCode>(t % order) : pick(rng);
      const FieldElem x(f, a), y(f, b);
      const auto prod = oracle::poly_mulmod(x.coeffs(), y.coeffs(), f->modulus, p);
      const auto sum = oracle::poly_add(x.coeffs(), y.coeffs(), p);
      REQUIRE((x * y).coeffs() == prod);
      REQUIRE((x + y).coeffs() == sum);
    }
  }
}

TEST_CASE("field axioms over the whole field") {
  for (auto [p, k] : {FieldCase{2, 3}, FieldCase{3, 3}, FieldCase{2, 6}}) {
    const auto f = make_field(p, k);
    const auto one = FieldElem::one(f);
    std::mt19937_64 rng(p * 100 + k);
    std::uniform_int_distribution<ElemCode> pick(0, static_cast<ElemCode>(f->order - 1));
    for (ElemCode a = 0; a < f->order; ++a) {
      const FieldElem x(f, a);
      const FieldElem y(f, pick(rng)), z(f, pick(rng));
      REQUIRE(x + y == y + x);
      REQUIRE(x * y == y * x);
      REQUIRE(x * (y + z) == x * y + x * z);
      REQUIRE((x - y) + y == x);
      if (!x.is_zero()) {
        REQUIRE(x * inverse(x) == one);
        REQUIRE((y / x) * x == y);
      }
    }
  }
}

TEST_CASE("exponentiation is a bijection onto the nonzero elements") {
  for (auto [p, k] : kCubics) {
    const auto f = make_field(p, k);
    REQUIRE(f->primitive);
    const auto g = FieldElem::indeterminate(f);
    std::set<ElemCode> seen;
    auto x = FieldElem::one(f);
    for (std::uint64_t e = 0; e < f->group_order(); ++e) {
      seen.insert(x.code());
      x = x * g;
    }
    CHECK(seen.size() == f->group_order());
    CHECK_FALSE(seen.contains(0));
    CHECK(multiplicative_order(g) == f->group_order());
    // the table generator agrees with the oracle's x^e
    for (std::uint64_t e : {std::uint64_t{0}, std::uint64_t{1}, f->group_order() / 2, f->group_order() - 1})
      CHECK(FieldElem::generator_power(f, e).coeffs() == oracle::poly_pow({0, 1}, e, f->modulus, p));
  }
}

TEST_CASE("relative trace: kernel size, Frobenius and linearity") {
  for (auto [p, k] : kCubics) {
    const unsigned sub = k / 3;
    const auto f = make_field(p, k);
    std::uint64_t q = 1;
    for (unsigned i = 0; i < sub; ++i) q *= p;
    std::uint64_t kernel = 0;
    std::vector<FieldElem> subfield;
    for (ElemCode a = 0; a < f->order; ++a) {
      const FieldElem x(f, a);
      const auto t = relative_trace(x, sub);
      if (t.is_zero()) ++kernel;
      REQUIRE(relative_trace(pow(x, q), sub) == t);
      if (pow(x, q) == x) subfield.push_back(x);
    }
    CHECK(kernel == q * q);
    CHECK(subfield.size() == q);
    std::mt19937_64 rng(k);
    std::uniform_int_distribution<ElemCode> pick(0, static_cast<ElemCode>(f->order - 1));
    for (int t = 0; t < 500; ++t) {
      const FieldElem x(f, pick(rng)), y(f, pick(rng));
      const auto& lambda = subfield[static_cast<std::size_t>(t) % subfield.size()];
      REQUIRE(relative_trace(lambda * x + y, sub) == lambda * relative_trace(x, sub) + relative_trace(y, sub));
    }
  }
}

TEST_CASE("relative trace needs a cubic extension") {
  const auto f = make_field(2, 4);
  CHECK_THROWS(relative_trace(FieldElem::one(f), 1));
}

}  // TEST_SUITE
