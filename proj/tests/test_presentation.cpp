#include <doctest.h>

#include <numeric>
#include <random>

#include "a2k/presentation.hpp"
#include "oracles.hpp"

using namespace a2k;

TEST_SUITE("presentation") {

TEST_CASE("q=2 T0 triples") {
  const auto plane = build_plane(make_field(2, 3));
  const auto t0 = build_T0(plane);
  CHECK(t0.tiles.size() == 21);
  CHECK(t0.contains(Tile{{0, 1, 3}}));
  CHECK(t0.contains(Tile{{1, 3, 0}}));
  CHECK(verify_polygonal_axioms(t0, plane).passed());
}

TEST_CASE("literal pairing breaks condition (2) at (1,2,4)") {
  const auto plane = build_plane(make_field(2, 3), Pairing::tr_xy);
  const auto rep = verify_polygonal_axioms(build_T0(plane), plane);
  CHECK(rep.passed("cond1_rotation"));
  CHECK_FALSE(rep.passed("cond2_incidence"));
  CHECK(rep.find("cond2_incidence")->detail.find("(1,2,4)") != std::string::npos);
}

TEST_CASE("dropping a triple breaks condition (1)") {
  const auto plane = build_plane(make_field(2, 3));
  auto t0 = build_T0(plane);
  t0.tiles.erase(t0.tiles.begin() + 5);
  const auto rep = verify_polygonal_axioms(t0, plane);
  CHECK_FALSE(rep.passed("cond1_rotation"));
}

TEST_CASE("polygonal axioms hold for q up to 5") {
  for (std::uint64_t q : {2, 3, 4, 5}) {
    const auto& pl = oracle::pipeline(q);
    CHECK(pl.t0.tiles.size() == (q + 1) * pl.plane.n);
    CHECK(verify_polygonal_axioms(pl.t0, pl.plane).passed());
  }
}

TEST_CASE("q=2 T1 shape") {
  const auto& pl = oracle::pipeline(2);
  CHECK(pl.t1.size() == 63);
  for (auto p : {Pattern::abc, Pattern::bca, Pattern::cab}) {
    const auto [lo, hi] = pl.t1.pattern_range(p);
    CHECK(hi - lo == 21);
  }
  const TypedTile a0b1c3{Pattern::abc, {0, 1, 3}};
  REQUIRE(pl.t1.index_of(a0b1c3));
  const auto r = rotate(a0b1c3);
  CHECK(r.pattern == Pattern::bca);
  CHECK(r.idx == std::array<std::uint32_t, 3>{1, 3, 0});
  CHECK(pl.t1.index_of(r));
}

TEST_CASE("T1 is rotation closed, clause consistent and (q+1)-extendable") {
  for (std::uint64_t q : {2, 3, 4, 5}) {
    const auto& t1 = oracle::pipeline(q).t1;
    CHECK(t1.size() == 3 * (q + 1) * (q * q + q + 1));
    for (std::uint32_t i = 0; i < t1.size(); ++i) {
      const auto& t = t1.tiles[i];
      REQUIRE(rotate(t, 3) == t);
      REQUIRE(t1.tiles[t1.rotation_of(i)] == rotate(t));
      for (auto p : {Pattern::abc, Pattern::bca, Pattern::cab}) REQUIRE(t1.index_of(TypedTile{p, t.idx}));
    }
    for (auto a : {Alphabet::a, Alphabet::b, Alphabet::c})
      for (std::uint32_t i = 0; i < t1.n; ++i) REQUIRE(t1.starting_with(Letter{a, i}).size() == q + 1);
  }
}

TEST_CASE("q=2 basic subset") {
  const auto& t1 = oracle::pipeline(2).t1;
  const auto s = basic_subset(t1, 1, 1);
  REQUIRE(s.tiles.size() == 7);
  for (std::uint32_t i = 0; i < 7; ++i)
    CHECK(s.tiles[i] == TypedTile{Pattern::abc, {i, (i + 1) % 7, (i + 3) % 7}});
  CHECK(verify_basic_subset(t1, s).passed());
  CHECK_THROWS_AS(basic_subset(t1, 7, 1), PresentationError);
  CHECK_THROWS_AS(basic_subset(t1, 1, 3), PresentationError);
}

TEST_CASE("Lemma 1 for every generator and every s") {
  std::mt19937_64 rng(7);
  for (std::uint64_t q : {2, 3, 4, 5}) {
    const auto& t1 = oracle::pipeline(q).t1;
    CHECK(verify_basic_subset(t1, basic_subset(t1)).passed());
    std::uniform_int_distribution<std::uint32_t> pick(1, t1.n - 1);
    for (int trial = 0; trial < 40; ++trial) {
      std::uint32_t x = pick(rng);
      while (std::gcd(x, t1.n) != 1) x = pick(rng);
      const auto xi = t1.trace_zero[static_cast<std::size_t>(trial) % t1.trace_zero.size()];
      const auto s = basic_subset(t1, x, xi);
      REQUIRE(s.tiles.size() == q * q + q + 1);
      for (int pos = 0; pos < 3; ++pos) {
        std::vector<int> seen(t1.n, 0);
        for (const auto& t : s.tiles) ++seen[t.idx[static_cast<std::size_t>(pos)]];
        REQUIRE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
      }
    }
  }
}

TEST_CASE("link graphs are generalized triangles") {
  const auto& t2 = oracle::pipeline(2).t1;
  const auto ab = link_graph(t2, Corner::ab);
  CHECK(ab.vertex_count() == 14);
  CHECK(ab.edge_count() == 21);
  CHECK(ab.collapsed_edges == 0);
  for (std::uint64_t q : {2, 3, 5}) {
    const auto& t1 = oracle::pipeline(q).t1;
    for (auto c : {Corner::ab, Corner::bc, Corner::ca}) {
      const auto g = link_graph(t1, c);
      CHECK(verify_generalized_mgon(g, 3, q).passed());
      const auto sh = oracle::shape(g);
      CHECK(sh.connected);
      CHECK(sh.diameter == 3);
      CHECK(sh.girth == 6);
    }
  }
}

}  // TEST_SUITE
