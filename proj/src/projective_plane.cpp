#include "a2k/projective_plane.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <sstream>

namespace a2k {

std::string to_string(Pairing p) { return p == Pairing::tr_xy ? "tr-xy" : "tr-xinv-y"; }

Pairing parse_pairing(const std::string& s) {
  if (s == "tr-xy") return Pairing::tr_xy;
  if (s == "tr-xinv-y") return Pairing::tr_xinv_y;
  throw PlaneError("unknown pairing '" + s + "'");
}

void PlaneModel::set_trace_zero(std::vector<std::uint32_t> z) {
  for (auto& e : z) e %= n;
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end()), z.end());
  trace_zero = std::move(z);
  zmask_.assign(n, false);
  for (auto e : trace_zero) zmask_[e] = true;
}

PlaneModel plane_from_difference_set(std::uint64_t q, std::vector<std::uint32_t> z, Pairing pairing) {
  PlaneModel plane;
  plane.q = q;
  plane.n = static_cast<std::uint32_t>(q * q + q + 1);
  plane.pairing = pairing;
  plane.set_trace_zero(std::move(z));
  return plane;
}

PlaneModel build_plane(const FieldPtr& cubic, Pairing pairing) {
  if (cubic->k % 3 != 0) throw PlaneError("field degree must be a multiple of 3");
  if (!cubic->primitive) throw PlaneError("field modulus is not primitive; Singer exponents undefined");
  const unsigned sub = cubic->k / 3;
  std::uint64_t q = 1;
  for (unsigned i = 0; i < sub; ++i) q *= cubic->p;
  const auto n = static_cast<std::uint32_t>(q * q + q + 1);

  const FieldElem g = FieldElem::indeterminate(cubic);
  std::vector<std::uint32_t> z;
  FieldElem cur = FieldElem::one(cubic);
  for (std::uint32_t e = 0; e < n; ++e) {
    if (relative_trace(cur, sub).is_zero()) z.push_back(e);
    cur = cur * g;
  }

  PlaneModel plane = plane_from_difference_set(q, z, pairing);
  plane.field = cubic;

  if (plane.trace_zero.size() != q + 1) {
    throw PlaneError("trace-zero set has " + std::to_string(plane.trace_zero.size()) + " points, expected " +
                     std::to_string(q + 1));
  }
  for (auto e : plane.trace_zero) {
    if (!plane.in_trace_zero(static_cast<std::uint32_t>(e * q % n))) {
      throw PlaneError("trace-zero set not closed under multiplication by q at " + std::to_string(e));
    }
  }
  std::vector<int> diff(n, 0);
  for (auto a : plane.trace_zero)
    for (auto b : plane.trace_zero)
      if (a != b) ++diff[(a + n - b) % n];
  for (std::uint32_t d = 1; d < n; ++d) {
    if (diff[d] != 1) {
      throw PlaneError("trace-zero set is not a planar difference set: difference " + std::to_string(d) +
                       " occurs " + std::to_string(diff[d]) + " times");
    }
  }
  return plane;
}

Line lambda0(const PlaneModel& plane, PointId x) {
  if (x.value >= plane.n) throw PlaneError("point " + std::to_string(x.value) + " out of range");
  Line line{LineId{x.value}, {}};
  for (auto z : plane.trace_zero) {
    const std::uint32_t y = plane.pairing == Pairing::tr_xinv_y ? (x.value + z) % plane.n
                                                                 : (z + plane.n - x.value) % plane.n;
    line.points.push_back(PointId{y});
  }
  std::sort(line.points.begin(), line.points.end());
  return line;
}

bool incident(const PlaneModel& plane, PointId y, LineId line) {
  const std::uint32_t n = plane.n;
  if (plane.pairing == Pairing::tr_xinv_y) return plane.in_trace_zero((y.value + n - line.value % n) % n);
  return plane.in_trace_zero((y.value + line.value) % n);
}

VerificationReport verify_plane_axioms(const PlaneModel& plane) {
  VerificationReport rep("plane axioms q=" + std::to_string(plane.q));
  const std::uint32_t n = plane.n;
  const std::uint64_t k = plane.q + 1;

  std::vector<Line> lines;
  std::set<std::vector<PointId>> distinct;
  for (std::uint32_t i = 0; i < n; ++i) {
    lines.push_back(lambda0(plane, PointId{i}));
    distinct.insert(lines.back().points);
  }
  rep.add("point_count", true, std::to_string(n));
  rep.add("line_count", distinct.size() == n,
          std::to_string(distinct.size()) + " distinct lines of " + std::to_string(n));

  std::string bad;
  for (const auto& l : lines) {
    if (l.points.size() != k && bad.empty()) {
      bad = "line " + std::to_string(l.id.value) + " has " + std::to_string(l.points.size()) + " points";
    }
  }
  rep.add("line_size", bad.empty(), bad);

  std::vector<std::vector<std::uint32_t>> on(n);  // point -> lines through it
  for (const auto& l : lines)
    for (auto pt : l.points) on[pt.value].push_back(l.id.value);
  bad.clear();
  for (std::uint32_t x = 0; x < n && bad.empty(); ++x) {
    if (on[x].size() != k) bad = "point " + std::to_string(x) + " on " + std::to_string(on[x].size()) + " lines";
  }
  rep.add("point_degree", bad.empty(), bad);

  // two points: exactly one common line
  bad.clear();
  for (std::uint32_t a = 0; a < n && bad.empty(); ++a) {
    for (std::uint32_t b = a + 1; b < n && bad.empty(); ++b) {
      std::size_t common = 0;
      for (const auto& l : lines) {
        if (std::binary_search(l.points.begin(), l.points.end(), PointId{a}) &&
            std::binary_search(l.points.begin(), l.points.end(), PointId{b}))
          ++common;
      }
      if (common != 1) {
        bad = "points " + std::to_string(a) + "," + std::to_string(b) + " share " + std::to_string(common) + " lines";
      }
    }
  }
  rep.add("two_points_one_line", bad.empty(), bad.empty() ? std::to_string(std::uint64_t(n) * (n - 1) / 2) + " pairs" : bad);

  bad.clear();
  for (std::uint32_t a = 0; a < n && bad.empty(); ++a) {
    for (std::uint32_t b = a + 1; b < n && bad.empty(); ++b) {
      std::vector<PointId> meet;
      std::set_intersection(lines[a].points.begin(), lines[a].points.end(), lines[b].points.begin(),
                            lines[b].points.end(), std::back_inserter(meet));
      if (meet.size() != 1) {
        bad = "lines " + std::to_string(a) + "," + std::to_string(b) + " meet in " + std::to_string(meet.size()) + " points";
      }
    }
  }
  rep.add("two_lines_one_point", bad.empty(), bad);
  return rep;
}

std::size_t BipartiteGraph::edge_count() const {
  std::size_t deg = 0;
  for (std::size_t v = 0; v < black; ++v) deg += adjacency[v].size();
  return deg;
}

BipartiteGraph BipartiteGraph::from_edges(std::size_t black, std::size_t white,
                                          const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                                          std::vector<std::string> labels) {
  BipartiteGraph g;
  g.black = black;
  g.white = white;
  g.adjacency.assign(black + white, {});
  for (auto [b, w] : edges) {
    g.adjacency[b].push_back(static_cast<std::uint32_t>(black + w));
    g.adjacency[black + w].push_back(b);
  }
  std::size_t before = 0, after = 0;
  for (auto& adj : g.adjacency) {
    before += adj.size();
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    after += adj.size();
  }
  g.collapsed_edges = (before - after) / 2;
  if (labels.size() != black + white) {
    labels.clear();
    for (std::size_t v = 0; v < black; ++v) labels.push_back("b" + std::to_string(v));
    for (std::size_t v = 0; v < white; ++v) labels.push_back("w" + std::to_string(v));
  }
  g.labels = std::move(labels);
  return g;
}

std::string BipartiteGraph::to_dot(const std::string& name) const {
  std::ostringstream os;
  os << "graph " << name << " {\n";
  for (std::size_t v = 0; v < vertex_count(); ++v) {
    os << "  \"" << labels[v] << "\" [color=" << (v < black ? "black" : "gray") << "];\n";
  }
  for (std::size_t v = 0; v < black; ++v)
    for (auto w : adjacency[v]) os << "  \"" << labels[v] << "\" -- \"" << labels[w] << "\";\n";
  os << "}\n";
  return os.str();
}

BipartiteGraph incidence_graph(const PlaneModel& plane) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::uint32_t l = 0; l < plane.n; ++l)
    for (auto pt : lambda0(plane, PointId{l}).points) edges.emplace_back(pt.value, l);
  std::vector<std::string> labels;
  for (std::uint32_t i = 0; i < plane.n; ++i) labels.push_back("P" + std::to_string(i));
  for (std::uint32_t i = 0; i < plane.n; ++i) labels.push_back("L" + std::to_string(i));
  return BipartiteGraph::from_edges(plane.n, plane.n, edges, std::move(labels));
}

VerificationReport verify_generalized_mgon(const BipartiteGraph& g, unsigned m, std::uint64_t q) {
  VerificationReport rep("generalized " + std::to_string(m) + "-gon");
  const std::size_t nv = g.vertex_count();
  constexpr std::size_t kUnseen = std::numeric_limits<std::size_t>::max();

  std::string bad;
  for (std::size_t v = 0; v < nv && bad.empty(); ++v) {
    const bool is_black = v < g.black;
    for (auto w : g.adjacency[v]) {
      if ((w < g.black) == is_black) {
        bad = "edge " + g.labels[v] + "-" + g.labels[w] + " inside one class";
        break;
      }
    }
  }
  rep.add("bipartite", bad.empty(), bad);

  bad.clear();
  for (std::size_t v = 0; v < nv && bad.empty(); ++v) {
    if (g.adjacency[v].size() != q + 1)
      bad = g.labels[v] + " has degree " + std::to_string(g.adjacency[v].size());
  }
  rep.add("regular", bad.empty(), bad.empty() ? "degree " + std::to_string(q + 1) : bad);

  std::size_t diameter = 0, girth = kUnseen;
  bool connected = nv > 0;
  std::vector<std::size_t> dist(nv), parent(nv);
  for (std::size_t s = 0; s < nv; ++s) {
    std::fill(dist.begin(), dist.end(), kUnseen);
    dist[s] = 0;
    parent[s] = kUnseen;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (auto w : g.adjacency[u]) {
        if (dist[w] == kUnseen) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          queue.push_back(w);
        } else if (w != parent[u]) {
          girth = std::min(girth, dist[u] + dist[w] + 1);
        }
      }
    }
    for (auto d : dist) {
      if (d == kUnseen) connected = false;
      else diameter = std::max(diameter, d);
    }
  }
  rep.add("connected", connected);
  rep.add("diameter", connected && diameter == m, "diameter " + std::to_string(diameter));
  rep.add("girth", girth == 2 * m, girth == kUnseen ? "acyclic" : "girth " + std::to_string(girth));
  return rep;
}

std::string export_plane_text(const PlaneModel& plane) {
  std::ostringstream os;
  os << "# q " << plane.q << " n " << plane.n << " pairing " << to_string(plane.pairing) << '\n';
  os << "Z";
  for (auto z : plane.trace_zero) os << ' ' << z;
  os << '\n';
  for (std::uint32_t l = 0; l < plane.n; ++l) {
    const auto line = lambda0(plane, PointId{l});
    for (std::size_t i = 0; i < line.points.size(); ++i) os << (i ? " " : "") << line.points[i].value;
    os << '\n';
  }
  return os.str();
}

}  // namespace a2k
