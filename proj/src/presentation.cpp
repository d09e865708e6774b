#include "a2k/presentation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace a2k {

namespace {

std::uint32_t letter_code(const Letter& l, std::uint32_t n) {
  return static_cast<std::uint32_t>(l.alphabet) * n + l.index;
}

std::string tile_string(const Tile& t) {
  return "(" + std::to_string(t.v[0]) + "," + std::to_string(t.v[1]) + "," + std::to_string(t.v[2]) + ")";
}

}  // namespace

bool TrianglePresentation::contains(const Tile& t) const {
  return std::binary_search(tiles.begin(), tiles.end(), t);
}

std::string Letter::to_string() const {
  static constexpr char names[] = {'a', 'b', 'c'};
  return names[static_cast<int>(alphabet)] + std::to_string(index);
}

std::string to_string(Pattern p) {
  switch (p) {
    case Pattern::abc: return "ABC";
    case Pattern::bca: return "BCA";
    case Pattern::cab: return "CAB";
  }
  return "?";
}

std::string TypedTile::to_string() const {
  return "(" + letter(0).to_string() + "," + letter(1).to_string() + "," + letter(2).to_string() + ")";
}

TypedTile rotate(const TypedTile& t, int times) {
  TypedTile r = t;
  for (int i = 0; i < ((times % 3) + 3) % 3; ++i) {
    r.pattern = static_cast<Pattern>((static_cast<int>(r.pattern) + 1) % 3);
    r.idx = {r.idx[1], r.idx[2], r.idx[0]};
  }
  return r;
}

std::optional<std::uint32_t> TypedPresentation::index_of(const TypedTile& t) const {
  auto it = std::lower_bound(tiles.begin(), tiles.end(), t);
  if (it == tiles.end() || *it != t) return std::nullopt;
  return static_cast<std::uint32_t>(it - tiles.begin());
}

std::uint32_t TypedPresentation::at(const TypedTile& t) const {
  auto i = index_of(t);
  if (!i) throw PresentationError("tile " + t.to_string() + " not in presentation");
  return *i;
}

std::span<const std::uint32_t> TypedPresentation::starting_with(const Letter& l) const {
  return by_first_letter_.at(letter_code(l, n));
}

std::pair<std::uint32_t, std::uint32_t> TypedPresentation::pattern_range(Pattern p) const {
  auto lo = std::lower_bound(tiles.begin(), tiles.end(), TypedTile{p, {0, 0, 0}});
  auto hi = std::find_if(lo, tiles.end(), [p](const TypedTile& t) { return t.pattern != p; });
  return {static_cast<std::uint32_t>(lo - tiles.begin()), static_cast<std::uint32_t>(hi - tiles.begin())};
}

void TypedPresentation::finalize() {
  std::sort(tiles.begin(), tiles.end());
  tiles.erase(std::unique(tiles.begin(), tiles.end()), tiles.end());
  by_first_letter_.assign(3 * std::size_t{n}, {});
  for (std::uint32_t i = 0; i < tiles.size(); ++i) by_first_letter_[letter_code(tiles[i].letter(0), n)].push_back(i);
  rotation_.resize(tiles.size());
  for (std::uint32_t i = 0; i < tiles.size(); ++i) rotation_[i] = at(rotate(tiles[i]));
}

TrianglePresentation build_T0(const PlaneModel& plane) {
  TrianglePresentation t0;
  t0.q = plane.q;
  t0.n = plane.n;
  const std::uint64_t n = plane.n;
  for (std::uint32_t i = 0; i < plane.n; ++i) {
    for (auto s : plane.trace_zero) {
      t0.tiles.push_back(Tile{{i, static_cast<std::uint32_t>((i + s) % n),
                               static_cast<std::uint32_t>((i + (plane.q + 1) * s) % n)}});
    }
  }
  std::sort(t0.tiles.begin(), t0.tiles.end());
  t0.tiles.erase(std::unique(t0.tiles.begin(), t0.tiles.end()), t0.tiles.end());
  if (t0.tiles.size() != (plane.q + 1) * n) {
    throw PresentationError("T0 has " + std::to_string(t0.tiles.size()) + " triples, expected " +
                            std::to_string((plane.q + 1) * n));
  }
  return t0;
}

VerificationReport verify_polygonal_axioms(const TrianglePresentation& t0, const PlaneModel& plane) {
  VerificationReport rep("polygonal presentation q=" + std::to_string(t0.q));

  std::string bad;
  for (const auto& t : t0.tiles) {
    const Tile r{{t.v[1], t.v[2], t.v[0]}};
    if (!t0.contains(r)) {
      bad = "rotation " + tile_string(r) + " of " + tile_string(t) + " missing";
      break;
    }
  }
  rep.add("cond1_rotation", bad.empty(), bad);

  // Leading pairs of all tiles; with (1) these are all cyclic pairs.
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>> third;
  for (const auto& t : t0.tiles) third[{t.v[0], t.v[1]}].push_back(t.v[2]);

  bad.clear();
  for (const auto& t : t0.tiles) {
    if (!incident(plane, PointId{t.v[1]}, lambda0(plane, PointId{t.v[0]}).id)) {
      bad = "tile " + tile_string(t) + ": " + std::to_string(t.v[1]) + " not incident with lambda0(" +
            std::to_string(t.v[0]) + ")";
      break;
    }
  }
  if (bad.empty()) {
    for (std::uint32_t x = 0; x < plane.n && bad.empty(); ++x) {
      for (auto y : lambda0(plane, PointId{x}).points) {
        if (!third.contains({x, y.value})) {
          bad = "incident pair (" + std::to_string(x) + "," + std::to_string(y.value) + ") not extendable";
          break;
        }
      }
    }
  }
  rep.add("cond2_incidence", bad.empty(), bad);

  bad.clear();
  for (const auto& [pair, xs] : third) {
    if (xs.size() > 1) {
      bad = "pair (" + std::to_string(pair.first) + "," + std::to_string(pair.second) + ") has " +
            std::to_string(xs.size()) + " completions";
      break;
    }
  }
  rep.add("cond3_unique_third", bad.empty(), bad);
  return rep;
}

TypedPresentation build_T1(const TrianglePresentation& t0, const PlaneModel& plane) {
  TypedPresentation t1;
  t1.q = t0.q;
  t1.n = t0.n;
  t1.trace_zero = plane.trace_zero;
  t1.pairing = plane.pairing;
  for (const auto& t : t0.tiles) {
    for (auto p : {Pattern::abc, Pattern::bca, Pattern::cab}) t1.tiles.push_back(TypedTile{p, t.v});
  }
  t1.finalize();
  return t1;
}

BasicSubset basic_subset(const TypedPresentation& t1, std::uint32_t x_exp, std::uint32_t xi_exp) {
  const std::uint64_t n = t1.n;
  if (std::gcd(std::uint64_t{x_exp}, n) != 1) {
    throw PresentationError("x exponent " + std::to_string(x_exp) + " does not generate Z_" + std::to_string(n));
  }
  if (!std::binary_search(t1.trace_zero.begin(), t1.trace_zero.end(), xi_exp)) {
    throw PresentationError("xi exponent " + std::to_string(xi_exp) + " is not in the trace-zero set");
  }
  BasicSubset s{x_exp, xi_exp, {}};
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t base = i * x_exp % n;
    s.tiles.push_back(TypedTile{Pattern::abc,
                                {static_cast<std::uint32_t>(base), static_cast<std::uint32_t>((base + xi_exp) % n),
                                 static_cast<std::uint32_t>((base + (t1.q + 1) * xi_exp) % n)}});
  }
  auto rep = verify_basic_subset(t1, s);
  if (!rep.passed()) throw PresentationError("basic subset check failed: " + rep.to_text());
  return s;
}

BasicSubset basic_subset(const TypedPresentation& t1) {
  if (t1.trace_zero.empty()) throw PresentationError("empty trace-zero set");
  return basic_subset(t1, 1, t1.trace_zero.front());
}

VerificationReport verify_basic_subset(const TypedPresentation& t1, const BasicSubset& s) {
  VerificationReport rep("basic subset");
  std::string bad;
  for (const auto& t : s.tiles) {
    if (!t1.index_of(t)) {
      bad = t.to_string() + " not in T1";
      break;
    }
  }
  rep.add("members_in_T1", bad.empty(), bad);
  rep.add("size", s.tiles.size() == t1.n, std::to_string(s.tiles.size()) + " tiles");
  for (int pos = 0; pos < 3; ++pos) {
    std::vector<int> seen(t1.n, 0);
    for (const auto& t : s.tiles) {
      const auto l = t.letter(pos);
      if (l.index < t1.n) ++seen[l.index];
    }
    const bool once = std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
    rep.add(std::string("each_") + "abc"[pos] + "_once", once);
  }
  return rep;
}

std::string to_string(Corner c) {
  switch (c) {
    case Corner::ab: return "AB";
    case Corner::bc: return "BC";
    case Corner::ca: return "CA";
  }
  return "?";
}

BipartiteGraph link_graph(const TypedPresentation& t1, Corner corner) {
  const Pattern pattern = static_cast<Pattern>(static_cast<int>(corner));
  const auto [lo, hi] = t1.pattern_range(pattern);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (auto i = lo; i < hi; ++i) edges.emplace_back(t1.tiles[i].idx[0], t1.tiles[i].idx[1]);
  std::vector<std::string> labels;
  for (int side = 0; side < 2; ++side) {
    for (std::uint32_t i = 0; i < t1.n; ++i) {
      labels.push_back(Letter{static_cast<Alphabet>((static_cast<int>(pattern) + side) % 3), i}.to_string());
    }
  }
  return BipartiteGraph::from_edges(t1.n, t1.n, edges, std::move(labels));
}

std::string export_tiles_text(const TrianglePresentation& t0) {
  std::ostringstream os;
  os << "# T0 q " << t0.q << " n " << t0.n << " tiles " << t0.tiles.size() << '\n';
  for (const auto& t : t0.tiles) os << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << '\n';
  return os.str();
}

std::string export_tiles_text(const TypedPresentation& t1) {
  std::ostringstream os;
  os << "# T1 q " << t1.q << " n " << t1.n << " tiles " << t1.tiles.size() << '\n';
  for (const auto& t : t1.tiles) os << to_string(t.pattern) << ' ' << t.idx[0] << ' ' << t.idx[1] << ' ' << t.idx[2] << '\n';
  return os.str();
}

std::string export_tiles_text(const BasicSubset& s) {
  std::ostringstream os;
  os << "# S x_exp " << s.x_exp << " xi_exp " << s.xi_exp << " tiles " << s.tiles.size() << '\n';
  for (const auto& t : s.tiles) os << to_string(t.pattern) << ' ' << t.idx[0] << ' ' << t.idx[1] << ' ' << t.idx[2] << '\n';
  return os.str();
}

}  // namespace a2k
