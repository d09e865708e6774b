#include <doctest.h>

#include <algorithm>
#include <set>

#include "a2k/projective_plane.hpp"
#include "oracles.hpp"

using namespace a2k;

namespace {

// Z by oracle arithmetic: e with g^e + g^{eq} + g^{eq^2} = 0, e in [0, n).
std::vector<std::uint32_t> oracle_trace_zero(unsigned p, unsigned k, std::uint64_t q) {
  const auto f = make_field(p, 3 * k);
  const std::uint64_t n = q * q + q + 1;
  std::vector<std::uint32_t> z;
  for (std::uint64_t e = 0; e < n; ++e) {
    oracle::Poly t(3 * k, 0);
    for (std::uint64_t m : {std::uint64_t{1}, q, q * q}) t = oracle::poly_add(t, oracle::poly_pow({0, 1}, e * m, f->modulus, p), p);
    if (std::all_of(t.begin(), t.end(), [](unsigned c) { return c == 0; })) z.push_back(static_cast<std::uint32_t>(e));
  }
  return z;
}

}  // namespace

TEST_SUITE("projective_plane") {

TEST_CASE("q=2 trace-zero set and lambda0") {
  const auto plane = build_plane(make_field(2, 3));
  CHECK(plane.n == 7);
  CHECK(plane.trace_zero == std::vector<std::uint32_t>{1, 2, 4});
  std::vector<std::uint32_t> doubled;
  for (auto z : plane.trace_zero) doubled.push_back(z * 2 % 7);
  std::sort(doubled.begin(), doubled.end());
  CHECK(doubled == plane.trace_zero);

  const auto l0 = lambda0(plane, PointId{0});
  CHECK(l0.points == std::vector<PointId>{{1}, {2}, {4}});
  CHECK(incident(plane, PointId{1}, l0.id));
  CHECK_FALSE(incident(plane, PointId{3}, l0.id));
  for (std::uint32_t i = 0; i < 7; ++i) CHECK(lambda0(plane, PointId{i}).points.size() == 3);
}

TEST_CASE("trace-zero set matches the polynomial oracle") {
  for (auto [p, k] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}, {5u, 1u}}) {
    std::uint64_t q = 1;
    for (unsigned i = 0; i < k; ++i) q *= p;
    const auto plane = build_plane(make_field(p, 3 * k));
    CHECK(plane.trace_zero == oracle_trace_zero(p, k, q));
    CHECK(plane.trace_zero.size() == q + 1);
  }
}

TEST_CASE("canonical planes satisfy the axioms") {
  for (auto [p, k] : {std::pair{2u, 3u}, {3u, 3u}, {2u, 6u}, {5u, 3u}}) {
    for (auto pairing : {Pairing::tr_xinv_y, Pairing::tr_xy}) {
      const auto plane = build_plane(make_field(p, k), pairing);
      const auto rep = verify_plane_axioms(plane);
      CHECK_MESSAGE(rep.passed(), rep.to_text());
    }
  }
}

TEST_CASE("corrupted difference set fails") {
  const auto plane = plane_from_difference_set(2, {1, 2, 3});
  const auto rep = verify_plane_axioms(plane);
  CHECK_FALSE(rep.passed());
  CHECK_FALSE(rep.passed("two_points_one_line"));
}

TEST_CASE("lines are the distinct translates of Z and lambda0 is a bijection") {
  for (auto [p, k] : {std::pair{2u, 3u}, {3u, 3u}, {5u, 3u}}) {
    const auto plane = build_plane(make_field(p, k));
    std::set<std::vector<PointId>> lines;
    std::set<std::uint32_t> ids;
    std::size_t incidences = 0;
    for (std::uint32_t i = 0; i < plane.n; ++i) {
      const auto l = lambda0(plane, PointId{i});
      std::vector<PointId> translate;
      for (auto z : plane.trace_zero) translate.push_back(PointId{(i + z) % plane.n});
      std::sort(translate.begin(), translate.end());
      CHECK(l.points == translate);
      lines.insert(l.points);
      ids.insert(l.id.value);
      incidences += l.points.size();
      for (auto z : plane.trace_zero)
        CHECK(incident(plane, PointId{i}, lambda0(plane, PointId{(i + plane.n - z) % plane.n}).id));
    }
    CHECK(lines.size() == plane.n);
    CHECK(ids.size() == plane.n);
    CHECK(incidences == plane.n * (plane.q + 1));
  }
}

TEST_CASE("incidence graph is a generalized triangle") {
  const auto g2 = incidence_graph(build_plane(make_field(2, 3)));
  CHECK(g2.vertex_count() == 14);
  CHECK(g2.edge_count() == 21);
  CHECK(verify_generalized_mgon(g2, 3, 2).passed());
  const auto s2 = oracle::shape(g2);
  CHECK(s2.connected);
  CHECK(s2.diameter == 3);
  CHECK(s2.girth == 6);

  const auto g3 = incidence_graph(build_plane(make_field(3, 3)));
  CHECK(g3.vertex_count() == 26);
  CHECK(verify_generalized_mgon(g3, 3, 3).passed());
  CHECK(oracle::shape(g3).girth == 6);
}

TEST_CASE("a hexagon is not a generalized triangle of order 2") {
  const auto hex = BipartiteGraph::from_edges(3, 3, {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}, {2, 0}});
  CHECK(oracle::shape(hex).girth == 6);
  const auto rep = verify_generalized_mgon(hex, 3, 2);
  CHECK_FALSE(rep.passed());
  CHECK_FALSE(rep.passed("regular"));
}

TEST_CASE("duplicate edges collapse and are counted") {
  const auto g = BipartiteGraph::from_edges(2, 2, {{0, 0}, {0, 0}, {1, 1}});
  CHECK(g.edge_count() == 2);
  CHECK(g.collapsed_edges == 1);
}

}  // TEST_SUITE
