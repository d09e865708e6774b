#include "a2k/subshift.hpp"

#include <algorithm>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace a2k {

namespace {

void sort_unique(std::vector<std::uint32_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<std::vector<std::uint32_t>> transpose(std::size_t dim, const std::vector<std::vector<std::uint32_t>>& in) {
  std::vector<std::vector<std::uint32_t>> out(dim);
  for (std::uint32_t i = 0; i < in.size(); ++i)
    for (auto j : in[i]) out[j].push_back(i);
  return out;  // ascending by construction
}

std::vector<std::uint32_t> successors(const TypedPresentation& t1, std::uint32_t alpha, int direction,
                                      const ShiftRule& rule) {
  // direction 1: psi = (x3, z, y1); direction 2: psi = (x2, y1, z)
  const int from = direction == 1 ? 2 : 1;
  const auto& a = t1.tiles[alpha];
  // rotation of alpha that starts with the glued letter
  const std::uint32_t alpha_rot = direction == 1 ? t1.rotation_of(t1.rotation_of(alpha)) : t1.rotation_of(alpha);
  std::vector<std::uint32_t> out;
  for (auto psi : t1.starting_with(a.letter(from))) {
    if (rule.exclude_psi_rotation && psi == alpha_rot) continue;
    const std::uint32_t psi_rot = direction == 1 ? t1.rotation_of(t1.rotation_of(psi)) : t1.rotation_of(psi);
    for (auto beta : t1.starting_with(t1.tiles[psi].letter(from))) {
      if (rule.exclude_beta_rotation && beta == psi_rot) continue;
      out.push_back(beta);
    }
  }
  sort_unique(out);
  return out;
}

std::vector<std::uint32_t> intersect(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  std::vector<std::uint32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

BitMatrix BitMatrix::from_columns(std::size_t dim, std::vector<std::vector<std::uint32_t>> cols) {
  BitMatrix m;
  m.dim_ = dim;
  cols.resize(dim);
  for (auto& c : cols) sort_unique(c);
  m.rows_ = transpose(dim, cols);
  m.cols_ = std::move(cols);
  return m;
}

BitMatrix BitMatrix::from_rows(std::size_t dim, std::vector<std::vector<std::uint32_t>> rows) {
  BitMatrix m;
  m.dim_ = dim;
  rows.resize(dim);
  for (auto& r : rows) sort_unique(r);
  m.cols_ = transpose(dim, rows);
  m.rows_ = std::move(rows);
  return m;
}

std::size_t BitMatrix::nnz() const {
  std::size_t s = 0;
  for (const auto& r : rows_) s += r.size();
  return s;
}

bool BitMatrix::at(std::uint32_t row, std::uint32_t col) const {
  const auto& r = rows_.at(row);
  return std::binary_search(r.begin(), r.end(), col);
}

std::string BitMatrix::to_triplet() const {
  std::ostringstream os;
  os << dim_ << ' ' << nnz() << '\n';
  for (std::uint32_t r = 0; r < dim_; ++r)
    for (auto c : rows_[r]) os << r << ' ' << c << '\n';
  return os.str();
}

CountMatrix multiply(const BitMatrix& a, const BitMatrix& b, Exec exec) {
  const std::size_t dim = a.dim();
  CountMatrix out{dim, std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>(dim)};
  auto column = [&](std::uint32_t c, std::vector<std::uint32_t>& scratch, std::vector<std::uint32_t>& touched) {
    touched.clear();
    for (auto g : b.col(c)) {
      for (auto r : a.col(g)) {
        if (scratch[r]++ == 0) touched.push_back(r);
      }
    }
    std::sort(touched.begin(), touched.end());
    auto& dst = out.cols[c];
    dst.reserve(touched.size());
    for (auto r : touched) {
      dst.emplace_back(r, scratch[r]);
      scratch[r] = 0;
    }
  };
  const auto n = static_cast<std::int64_t>(dim);
  if (exec == Exec::serial) {
    std::vector<std::uint32_t> scratch(dim, 0), touched;
    for (std::int64_t c = 0; c < n; ++c) column(static_cast<std::uint32_t>(c), scratch, touched);
  } else {
#pragma omp parallel
    {
      std::vector<std::uint32_t> scratch(dim, 0), touched;
#pragma omp for schedule(dynamic, 16)
      for (std::int64_t c = 0; c < n; ++c) column(static_cast<std::uint32_t>(c), scratch, touched);
    }
  }
  return out;
}

std::string ShiftRule::to_string() const {
  if (exclude_psi_rotation && exclude_beta_rotation) return "both-exclusions";
  if (exclude_psi_rotation) return "psi-only";
  if (exclude_beta_rotation) return "beta-only";
  return "literal";
}

ShiftRule ShiftRule::parse(const std::string& s) {
  if (s == "both-exclusions") return {true, true};
  if (s == "psi-only") return {true, false};
  if (s == "beta-only") return {false, true};
  if (s == "literal") return literal();
  throw std::invalid_argument("unknown shift rule '" + s + "'");
}

BitMatrix build_transition_matrix(const TypedPresentation& t1, int direction, const ShiftRule& rule, Exec exec) {
  if (direction != 1 && direction != 2) throw std::invalid_argument("direction must be 1 or 2");
  const auto dim = static_cast<std::int64_t>(t1.size());
  std::vector<std::vector<std::uint32_t>> cols(t1.size());
  if (exec == Exec::serial) {
    for (std::int64_t a = 0; a < dim; ++a) cols[a] = successors(t1, static_cast<std::uint32_t>(a), direction, rule);
  } else {
#pragma omp parallel for schedule(dynamic, 32)
    for (std::int64_t a = 0; a < dim; ++a) cols[a] = successors(t1, static_cast<std::uint32_t>(a), direction, rule);
  }
  return BitMatrix::from_columns(t1.size(), std::move(cols));
}

TransitionMatrices build_transition_matrices(const TypedPresentation& t1, const ShiftRule& rule, Exec exec) {
  return {build_transition_matrix(t1, 1, rule, exec), build_transition_matrix(t1, 2, rule, exec), rule};
}

VerificationReport check_regularity(const BitMatrix& m, std::uint64_t expected, const std::string& name) {
  VerificationReport rep(name + " regularity");
  std::string bad;
  for (std::uint32_t r = 0; r < m.dim() && bad.empty(); ++r) {
    if (m.row(r).size() != expected)
      bad = "row " + std::to_string(r) + " sums to " + std::to_string(m.row(r).size());
  }
  rep.add(name + "_row_sums", bad.empty(), bad.empty() ? "all " + std::to_string(expected) : bad);
  bad.clear();
  for (std::uint32_t c = 0; c < m.dim() && bad.empty(); ++c) {
    if (m.col(c).size() != expected)
      bad = "column " + std::to_string(c) + " sums to " + std::to_string(m.col(c).size());
  }
  rep.add(name + "_col_sums", bad.empty(), bad.empty() ? "all " + std::to_string(expected) : bad);
  return rep;
}

Calibration calibrate_shift_rule(const TypedPresentation& t1, const BasicSubset& s) {
  Calibration cal;
  const std::uint64_t q2 = t1.q * t1.q;
  for (ShiftRule rule : {ShiftRule{true, true}, ShiftRule{true, false}, ShiftRule{false, true}, ShiftRule{false, false}}) {
    const auto tm = build_transition_matrices(t1, rule);
    CalibrationCandidate cand{rule, false, VerificationReport("candidate " + rule.to_string())};
    cand.gates.merge(check_regularity(tm.m1, q2, "m1"));
    cand.gates.merge(check_regularity(tm.m2, q2, "m2"));
    const auto h = verify_H(tm.m1, tm.m2);
    cand.gates.add("h1a", h.passed("h1a"), h.find("h1a")->detail);
    cand.gates.add("lemma2", verify_lemma2(t1, s, tm.m1).passed());
    cand.accepted = cand.gates.passed();
    // recorded only: no candidate satisfies it for triangle tiles
    cand.gates.add("h1b_not_gating", true, h.passed("h1b") ? "h1b holds" : "h1b fails: " + h.find("h1b")->detail);
    if (cand.accepted && !cal.rule) cal.rule = rule;
    cal.candidates.push_back(std::move(cand));
  }
  return cal;
}

ShiftRule calibrated_rule(const TypedPresentation& t1, const BasicSubset& s) {
  auto cal = calibrate_shift_rule(t1, s);
  if (cal.rule) return *cal.rule;
  std::string msg = "no shift rule passes calibration:\n";
  for (const auto& c : cal.candidates) msg += c.gates.to_text();
  throw std::runtime_error(msg);
}

std::size_t union_scc_count(const BitMatrix& m1, const BitMatrix& m2) {
  // Kosaraju, iterative.
  const std::size_t n = m1.dim();
  std::vector<std::vector<std::uint32_t>> fwd(n), rev(n);
  for (std::uint32_t a = 0; a < n; ++a) {
    for (const BitMatrix* m : {&m1, &m2}) {
      for (auto b : m->col(a)) {
        fwd[a].push_back(b);
        rev[b].push_back(a);
      }
    }
  }
  std::vector<char> seen(n, 0);
  std::vector<std::uint32_t> order;
  order.reserve(n);
  for (std::uint32_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{s, 0}};
    seen[s] = 1;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i < fwd[v].size()) {
        const auto w = fwd[v][i++];
        if (!seen[w]) {
          seen[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::vector<char> done(n, 0);
  std::size_t components = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (done[*it]) continue;
    ++components;
    std::vector<std::uint32_t> stack{*it};
    done[*it] = 1;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (auto w : rev[v]) {
        if (!done[w]) {
          done[w] = 1;
          stack.push_back(w);
        }
      }
    }
  }
  return components;
}

VerificationReport verify_H(const BitMatrix& m1, const BitMatrix& m2) {
  VerificationReport rep("H conditions");
  rep.add("h0", m1.nnz() > 0 && m2.nnz() > 0 && m1.dim() == m2.dim(),
          "nnz " + std::to_string(m1.nnz()) + "/" + std::to_string(m2.nnz()));

  const auto p12 = multiply(m1, m2);
  const auto p21 = multiply(m2, m1);
  std::string bad;
  if (!(p12 == p21)) {
    for (std::uint32_t c = 0; c < p12.dim; ++c) {
      if (p12.cols[c] != p21.cols[c]) {
        bad = "column " + std::to_string(c) + " of M1M2 and M2M1 differ";
        break;
      }
    }
  }
  rep.add("h1a", bad.empty(), bad);

  std::size_t over = 0, nonzero = 0;
  bad.clear();
  for (const auto* p : {&p12, &p21}) {
    for (std::uint32_t c = 0; c < p->dim; ++c) {
      for (auto [r, cnt] : p->cols[c]) {
        if (p == &p12) ++nonzero;
        if (cnt > 1) {
          if (p == &p12) ++over;
          if (bad.empty()) {
            bad = std::string(p == &p12 ? "M1M2" : "M2M1") + "(" + std::to_string(r) + "," + std::to_string(c) +
                  ") = " + std::to_string(cnt);
          }
        }
      }
    }
  }
  rep.add("h1b", bad.empty(),
          bad.empty() ? "" : bad + "; " + std::to_string(over) + " of " + std::to_string(nonzero) + " entries exceed 1");

  const auto scc = union_scc_count(m1, m2);
  rep.add("h2", scc == 1, std::to_string(scc) + " strongly connected component(s)");

  // For alpha -> beta (M1) -> delta (M2) count gammas with alpha -> gamma (M2) -> delta (M1).
  std::size_t composites = 0, broken = 0;
  bad.clear();
  for (std::uint32_t a = 0; a < p21.dim; ++a) {
    for (auto [d, routes] : p21.cols[a]) {
      (void)routes;
      ++composites;
      const auto& col = p12.cols[a];
      auto it = std::lower_bound(col.begin(), col.end(), std::make_pair(d, std::uint32_t{0}));
      const std::uint32_t gammas = (it != col.end() && it->first == d) ? it->second : 0;
      if (gammas != 1) {
        ++broken;
        if (bad.empty())
          bad = "alpha " + std::to_string(a) + " delta " + std::to_string(d) + ": " + std::to_string(gammas) + " gammas";
      }
    }
  }
  rep.add("interchange_unique", broken == 0,
          broken == 0 ? std::to_string(composites) + " composites"
                      : bad + "; " + std::to_string(broken) + " of " + std::to_string(composites) + " composites");
  return rep;
}

VerificationReport check_pattern_cycle(const TypedPresentation& t1, const BitMatrix& m1, const BitMatrix& m2) {
  VerificationReport rep("pattern cycle");
  for (int which = 1; which <= 2; ++which) {
    const BitMatrix& m = which == 1 ? m1 : m2;
    const int step = which == 1 ? 1 : 2;
    std::string bad;
    for (std::uint32_t a = 0; a < m.dim() && bad.empty(); ++a) {
      const int pa = static_cast<int>(t1.tiles[a].pattern);
      for (auto b : m.col(a)) {
        if (static_cast<int>(t1.tiles[b].pattern) != (pa + step) % 3) {
          bad = t1.tiles[a].to_string() + " -> " + t1.tiles[b].to_string();
          break;
        }
      }
    }
    rep.add("m" + std::to_string(which) + "_pattern_step", bad.empty(), bad);
  }
  return rep;
}

namespace {

class WordSearch {
 public:
  WordSearch(const BitMatrix& m1, const BitMatrix& m2, Window w) : m1_(m1), m2_(m2), word_{w, {}} {
    word_.cells.assign(w.cells(), 0);
    all_.resize(m1.dim());
    for (std::uint32_t i = 0; i < all_.size(); ++i) all_[i] = i;
  }

  // Visits complete words in lexicographic order; the visitor returns false to stop.
  template <class Visit>
  bool run(Visit&& visit) { return fill(0, visit); }

  std::vector<std::uint32_t> candidates(std::size_t cell) const {
    const std::uint32_t width = word_.window.m1 + 1;
    const auto i = static_cast<std::uint32_t>(cell % width);
    const auto j = static_cast<std::uint32_t>(cell / width);
    if (i == 0 && j == 0) return all_;
    if (j == 0) return {m1_.col(word_.cells[cell - 1]).begin(), m1_.col(word_.cells[cell - 1]).end()};
    if (i == 0) return {m2_.col(word_.cells[cell - width]).begin(), m2_.col(word_.cells[cell - width]).end()};
    return intersect(m1_.col(word_.cells[cell - 1]), m2_.col(word_.cells[cell - width]));
  }

  Word& word() { return word_; }

 private:
  template <class Visit>
  bool fill(std::size_t cell, Visit& visit) {
    if (cell == word_.cells.size()) return visit(word_, cell);
    const auto cands = candidates(cell);
    if (cell + 1 == word_.cells.size()) {
      // last cell: the visitor may consume candidates in bulk
      if (auto r = visit.last(word_, cands); r) return *r;
    }
    for (auto t : cands) {
      word_.cells[cell] = t;
      if (!fill(cell + 1, visit)) return false;
    }
    return true;
  }

  const BitMatrix& m1_;
  const BitMatrix& m2_;
  Word word_;
  std::vector<std::uint32_t> all_;
};

}  // namespace

WordCount enumerate_words(const BitMatrix& m1, const BitMatrix& m2, Window m, std::uint64_t cap, bool allow_large,
                          const std::function<void(const Word&)>& sink) {
  if (m.cells() > kWordWindowGuard && !allow_large) {
    throw WindowTooLarge("window has " + std::to_string(m.cells()) + " cells; limit is " +
                         std::to_string(kWordWindowGuard) + " without override");
  }
  WordCount result;
  struct Visitor {
    WordCount& result;
    std::uint64_t cap;
    const std::function<void(const Word&)>& sink;
    bool operator()(const Word& w, std::size_t) {
      if (result.count >= cap) {
        result.capped = true;
        return false;
      }
      ++result.count;
      if (sink) sink(w);
      return true;
    }
    std::optional<bool> last(Word&, const std::vector<std::uint32_t>& cands) {
      if (sink) return std::nullopt;
      if (result.count + cands.size() > cap) {
        result.count = cap;
        result.capped = true;
        return false;
      }
      result.count += cands.size();
      return true;
    }
  } visitor{result, cap, sink};
  WordSearch search(m1, m2, m);
  search.run(visitor);
  return result;
}

std::optional<std::pair<Word, std::pair<int, int>>> find_aperiodic_word(const BitMatrix& m1, const BitMatrix& m2,
                                                                         int p1, int p2) {
  if (p1 == 0 && p2 == 0) throw std::invalid_argument("period must be nonzero");
  const Window w{static_cast<std::uint32_t>(std::abs(p1) + 1), static_cast<std::uint32_t>(std::abs(p2) + 1)};
  std::optional<std::pair<Word, std::pair<int, int>>> found;
  struct Visitor {
    int p1, p2;
    std::optional<std::pair<Word, std::pair<int, int>>>& found;
    bool operator()(const Word& word, std::size_t) {
      const int w1 = static_cast<int>(word.window.m1), w2 = static_cast<int>(word.window.m2);
      for (int j = 0; j <= w2; ++j) {
        for (int i = 0; i <= w1; ++i) {
          const int i2 = i + p1, j2 = j + p2;
          if (i2 < 0 || j2 < 0 || i2 > w1 || j2 > w2) continue;
          if (word.at(i, j) != word.at(i2, j2)) {
            found.emplace(word, std::make_pair(i, j));
            return false;
          }
        }
      }
      return true;
    }
    std::optional<bool> last(Word&, const std::vector<std::uint32_t>&) { return std::nullopt; }
  } visitor{p1, p2, found};
  WordSearch search(m1, m2, w);
  search.run(visitor);
  return found;
}

VerificationReport verify_H3_bounded(const BitMatrix& m1, const BitMatrix& m2, int bound) {
  if (bound < 1) throw std::invalid_argument("H3 bound must be at least 1");
  VerificationReport rep("H3 bounded |p| <= " + std::to_string(bound));
  std::size_t witnessed = 0, total = 0;
  std::string bad;
  for (int p2 = -bound; p2 <= bound; ++p2) {
    for (int p1 = -bound; p1 <= bound; ++p1) {
      if (p1 == 0 && p2 == 0) continue;
      ++total;
      if (find_aperiodic_word(m1, m2, p1, p2)) {
        ++witnessed;
      } else if (bad.empty()) {
        bad = "no witness for p=(" + std::to_string(p1) + "," + std::to_string(p2) + ")";
      }
    }
  }
  rep.add("h3_bounded", witnessed == total,
          bad.empty() ? std::to_string(witnessed) + " periods witnessed" : bad);
  return rep;
}

std::vector<std::uint32_t> shift_multiset(const BitMatrix& m, std::span<const std::uint32_t> sources) {
  std::vector<std::uint32_t> mult(m.dim(), 0);
  for (auto a : sources)
    for (auto b : m.col(a)) ++mult[b];
  return mult;
}

std::vector<std::uint32_t> rotated_subset(const TypedPresentation& t1, const BasicSubset& s, int r) {
  std::vector<std::uint32_t> out;
  out.reserve(s.tiles.size());
  for (const auto& t : s.tiles) out.push_back(t1.at(rotate(t, r)));
  return out;
}

VerificationReport verify_lemma2(const TypedPresentation& t1, const BasicSubset& s, const BitMatrix& m1) {
  VerificationReport rep("lemma 2");
  const std::uint64_t q = t1.q;
  static constexpr const char* names[] = {"a", "b", "c"};
  for (int r = 0; r < 3; ++r) {
    const auto sources = rotated_subset(t1, s, r);
    auto target = rotated_subset(t1, s, r + 1);
    std::sort(target.begin(), target.end());
    const auto target_pattern = static_cast<Pattern>((r + 1) % 3);
    const auto mult = shift_multiset(m1, sources);
    std::uint64_t total = 0;
    std::string bad;
    for (std::uint32_t i = 0; i < mult.size(); ++i) {
      total += mult[i];
      std::uint64_t expected = 0;
      if (std::binary_search(target.begin(), target.end(), i)) expected = q;
      else if (t1.tiles[i].pattern == target_pattern) expected = q - 1;
      if (mult[i] != expected && bad.empty()) {
        bad = t1.tiles[i].to_string() + " has multiplicity " + std::to_string(mult[i]) + ", expected " +
              std::to_string(expected);
      }
    }
    const std::uint64_t want = q * q * t1.n;
    if (bad.empty() && total != want) bad = "total " + std::to_string(total) + ", expected " + std::to_string(want);
    rep.add(std::string("shift_of_S") + names[r], bad.empty(), bad.empty() ? "total " + std::to_string(total) : bad);
  }
  return rep;
}

std::string union_digraph_dot(const TypedPresentation& t1, const BitMatrix& m1, const BitMatrix& m2) {
  std::ostringstream os;
  os << "digraph shift {\n";
  for (std::uint32_t a = 0; a < t1.size(); ++a) os << "  t" << a << " [label=\"" << t1.tiles[a].to_string() << "\"];\n";
  for (std::uint32_t a = 0; a < t1.size(); ++a) {
    for (auto b : m1.col(a)) os << "  t" << a << " -> t" << b << " [color=red];\n";
    for (auto b : m2.col(a)) os << "  t" << a << " -> t" << b << " [color=blue];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace a2k
