#include <doctest.h>

#include <random>
#include <set>

#include "a2k/subshift.hpp"
#include "oracles.hpp"

using namespace a2k;

namespace {

// Direct reading of the gluing rule, quadratic in |T1|.
BitMatrix naive_transition(const TypedPresentation& t1, int direction, const ShiftRule& rule) {
  const int from = direction == 1 ? 2 : 1;
  const int to = direction == 1 ? 2 : 1;  // position of y1 inside psi
  std::vector<std::vector<std::uint32_t>> cols(t1.size());
  for (std::uint32_t a = 0; a < t1.size(); ++a) {
    const auto& alpha = t1.tiles[a];
    for (std::uint32_t p = 0; p < t1.size(); ++p) {
      const auto& psi = t1.tiles[p];
      if (psi.letter(0) != alpha.letter(from)) continue;
      if (rule.exclude_psi_rotation && psi == rotate(alpha, from)) continue;
      for (std::uint32_t b = 0; b < t1.size(); ++b) {
        const auto& beta = t1.tiles[b];
        if (beta.letter(0) != psi.letter(to)) continue;
        if (rule.exclude_beta_rotation && beta == rotate(psi, to)) continue;
        cols[a].push_back(b);
      }
    }
  }
  return BitMatrix::from_columns(t1.size(), std::move(cols));
}

CountMatrix naive_product(const BitMatrix& a, const BitMatrix& b) {
  CountMatrix out{a.dim(), std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>(a.dim())};
  for (std::uint32_t c = 0; c < a.dim(); ++c)
    for (std::uint32_t r = 0; r < a.dim(); ++r) {
      std::uint32_t s = 0;
      for (std::uint32_t k = 0; k < a.dim(); ++k) s += a.at(r, k) && b.at(k, c);
      if (s) out.cols[c].emplace_back(r, s);
    }
  return out;
}

std::uint64_t oracle_square_words(const BitMatrix& m1, const BitMatrix& m2) {
  std::uint64_t count = 0;
  for (std::uint32_t a = 0; a < m1.dim(); ++a)
    for (auto right : m1.col(a))
      for (auto up : m2.col(a))
        for (auto diag : m1.col(up)) count += m2.at(diag, right);
  return count;
}

BitMatrix random_bits(std::mt19937_64& rng, std::size_t dim, double density) {
  std::bernoulli_distribution coin(density);
  std::vector<std::vector<std::uint32_t>> cols(dim);
  for (std::uint32_t c = 0; c < dim; ++c)
    for (std::uint32_t r = 0; r < dim; ++r)
      if (coin(rng)) cols[c].push_back(r);
  return BitMatrix::from_columns(dim, std::move(cols));
}

}  // namespace

TEST_SUITE("subshift") {

TEST_CASE("q=2 row sums under both exclusions and under the literal rule") {
  const auto& t1 = oracle::pipeline(2).t1;
  const auto both = build_transition_matrices(t1, ShiftRule{});
  CHECK(check_regularity(both.m1, 4, "m1").passed());
  CHECK(check_regularity(both.m2, 4, "m2").passed());
  const auto lit = build_transition_matrices(t1, ShiftRule::literal());
  CHECK(check_regularity(lit.m1, 9, "m1").passed());
  CHECK(check_regularity(lit.m2, 9, "m2").passed());
}

TEST_CASE("transition matrices match the direct reading of the rule") {
  for (std::uint64_t q : {2, 3}) {
    const auto& t1 = oracle::pipeline(q).t1;
    for (auto rule : {ShiftRule{true, true}, ShiftRule{true, false}, ShiftRule{false, true}, ShiftRule::literal()})
      for (int dir : {1, 2}) {
        const auto fast = build_transition_matrix(t1, dir, rule, Exec::parallel);
        CHECK(fast == naive_transition(t1, dir, rule));
        CHECK(fast == build_transition_matrix(t1, dir, rule, Exec::serial));
      }
  }
}

TEST_CASE("shift rule names round trip") {
  for (const char* name : {"both-exclusions", "psi-only", "beta-only", "literal"})
    CHECK(ShiftRule::parse(name).to_string() == name);
  CHECK_THROWS(ShiftRule::parse("none"));
}

TEST_CASE("calibration picks both exclusions at q=2 and q=3") {
  const auto& p2 = oracle::pipeline(2);
  const auto cal2 = calibrate_shift_rule(p2.t1, p2.s);
  REQUIRE(cal2.rule);
  CHECK(cal2.rule->to_string() == "both-exclusions");
  const auto& literal = cal2.candidates.back();
  CHECK(literal.rule == ShiftRule::literal());
  CHECK_FALSE(literal.accepted);
  CHECK(literal.gates.find("m1_row_sums")->detail.find("sums to 9") != std::string::npos);

  const auto& p3 = oracle::pipeline(3);
  CHECK(calibrated_rule(p3.t1, p3.s) == *cal2.rule);
}

TEST_CASE("regularity and pattern cycle after calibration") {
  for (std::uint64_t q : {2, 3, 4, 5}) {
    const auto& pl = oracle::pipeline(q);
    CHECK(check_regularity(pl.tm.m1, q * q, "m1").passed());
    CHECK(check_regularity(pl.tm.m2, q * q, "m2").passed());
    CHECK(check_pattern_cycle(pl.t1, pl.tm.m1, pl.tm.m2).passed());
  }
}

TEST_CASE("H suite on the calibrated matrices") {
  for (std::uint64_t q : {2, 3}) {
    const auto& pl = oracle::pipeline(q);
    const auto h = verify_H(pl.tm.m1, pl.tm.m2);
    CHECK(h.passed("h0"));
    CHECK(h.passed("h1a"));
    CHECK(h.passed("h2"));
    // the product has entries 2, so H1b and the unique interchange fail
    CHECK_FALSE(h.passed("h1b"));
    CHECK_FALSE(h.passed("interchange_unique"));
    CHECK(union_scc_count(pl.tm.m1, pl.tm.m2) == 1);
  }
}

TEST_CASE("H suite distinguishes M2 replaced by M1") {
  const auto& pl = oracle::pipeline(2);
  const auto h = verify_H(pl.tm.m1, pl.tm.m1);
  CHECK(h.passed("h1a"));
  CHECK_FALSE(h.passed("h1b"));
}

TEST_CASE("sparse product agrees with the naive product") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = random_bits(rng, 1 + trial % 17, 0.3);
    const auto b = random_bits(rng, a.dim(), 0.3);
    const auto want = naive_product(a, b);
    CHECK(multiply(a, b, Exec::serial) == want);
    CHECK(multiply(a, b, Exec::parallel) == want);
  }
  const auto& pl = oracle::pipeline(2);
  CHECK(multiply(pl.tm.m1, pl.tm.m2) == naive_product(pl.tm.m1, pl.tm.m2));
}

TEST_CASE("word counts at q=2") {
  const auto& pl = oracle::pipeline(2);
  CHECK(enumerate_words(pl.tm.m1, pl.tm.m2, {0, 0}, 1u << 20).count == 63);
  CHECK(enumerate_words(pl.tm.m1, pl.tm.m2, {1, 0}, 1u << 20).count == 252);
  const auto sq = enumerate_words(pl.tm.m1, pl.tm.m2, {1, 1}, 1u << 20);
  CHECK(sq.count == oracle_square_words(pl.tm.m1, pl.tm.m2));
  CHECK(sq.count == 1260);
  CHECK_FALSE(sq.capped);
  const auto capped = enumerate_words(pl.tm.m1, pl.tm.m2, {1, 1}, 100);
  CHECK(capped.count == 100);
  CHECK(capped.capped);
  CHECK_THROWS_AS(enumerate_words(pl.tm.m1, pl.tm.m2, {4, 4}, 10), WindowTooLarge);
}

TEST_CASE("enumerated words are valid and distinct") {
  const auto& pl = oracle::pipeline(2);
  std::set<std::vector<std::uint32_t>> seen;
  enumerate_words(pl.tm.m1, pl.tm.m2, {2, 1}, 5000, false, [&](const Word& w) {
    for (std::uint32_t j = 0; j <= w.window.m2; ++j)
      for (std::uint32_t i = 0; i <= w.window.m1; ++i) {
        if (i < w.window.m1) REQUIRE(pl.tm.m1.at(w.at(i + 1, j), w.at(i, j)));
        if (j < w.window.m2) REQUIRE(pl.tm.m2.at(w.at(i, j + 1), w.at(i, j)));
      }
    REQUIRE(seen.insert(w.cells).second);
  });
  CHECK(seen.size() > 0);
}

TEST_CASE("bounded aperiodicity") {
  const auto& pl = oracle::pipeline(2);
  const auto rep = verify_H3_bounded(pl.tm.m1, pl.tm.m2, 2);
  CHECK(rep.passed());
  CHECK(rep.find("h3_bounded")->detail == "24 periods witnessed");
  CHECK_THROWS_AS(find_aperiodic_word(pl.tm.m1, pl.tm.m2, 0, 0), std::invalid_argument);

  const auto one = BitMatrix::from_columns(1, {{0}});
  CHECK_FALSE(verify_H3_bounded(one, one, 2).passed());
  CHECK_FALSE(find_aperiodic_word(one, one, 1, 0));
}

TEST_CASE("Lemma 2 at q=2") {
  const auto& pl = oracle::pipeline(2);
  const auto mult = shift_multiset(pl.tm.m1, rotated_subset(pl.t1, pl.s, 0));
  const auto target = rotated_subset(pl.t1, pl.s, 1);
  std::uint32_t total = 0, twos = 0, ones = 0;
  for (std::uint32_t i = 0; i < mult.size(); ++i) {
    total += mult[i];
    const bool in_target = std::find(target.begin(), target.end(), i) != target.end();
    if (in_target) {
      CHECK(mult[i] == 2);
      ++twos;
    } else if (pl.t1.tiles[i].pattern == Pattern::bca) {
      CHECK(mult[i] == 1);
      ++ones;
    } else {
      CHECK(mult[i] == 0);
    }
  }
  CHECK(total == 28);
  CHECK(twos == 7);
  CHECK(ones == 14);
}

TEST_CASE("Lemma 2 and its rotations for q up to 5") {
  for (std::uint64_t q : {2, 3, 4, 5}) {
    const auto& pl = oracle::pipeline(q);
    const auto rep = verify_lemma2(pl.t1, pl.s, pl.tm.m1);
    CHECK_MESSAGE(rep.passed(), rep.to_text());
    const std::uint64_t n = q * q + q + 1;
    CHECK(q * n + (q - 1) * ((q + 1) * n - n) == q * q * n);
  }
}

TEST_CASE("triplet export") {
  const auto m = BitMatrix::from_rows(3, {{1}, {0, 2}, {}});
  CHECK(m.to_triplet() == "3 3\n0 1\n1 0\n1 2\n");
}

}  // TEST_SUITE
