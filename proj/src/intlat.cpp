#include "a2k/intlat.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <mutex>

#include <omp.h>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace a2k {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> init) {
  rows_ = init.size();
  cols_ = rows_ ? init.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& row : init) {
    if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    for (long x : row) data_.emplace_back(x);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return sgn(x) == 0; });
}

std::size_t IntMatrix::nnz() const {
  return static_cast<std::size_t>(
      std::count_if(data_.begin(), data_.end(), [](const Integer& x) { return sgn(x) != 0; }));
}

std::string IntMatrix::to_triplet() const {
  std::ostringstream os;
  os << rows_ << ' ' << cols_ << ' ' << nnz() << '\n';
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (sgn((*this)(r, c)) != 0) os << r << ' ' << c << ' ' << (*this)(r, c).get_str() << '\n';
  return os.str();
}

IntMatrix IntMatrix::from_triplet(const std::string& text) {
  std::istringstream is(text);
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(is >> rows >> cols >> nnz)) throw std::invalid_argument("bad triplet header");
  IntMatrix m(rows, cols);
  for (std::size_t k = 0; k < nnz; ++k) {
    std::size_t r = 0, c = 0;
    std::string v;
    if (!(is >> r >> c >> v) || r >= rows || c >= cols) throw std::invalid_argument("bad triplet entry");
    m(r, c) = Integer(v);
  }
  return m;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("dimension mismatch in matrix product");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Integer& x = a(i, k);
      if (sgn(x) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (sgn(b(k, j)) != 0) c(i, j) += x * b(k, j);
    }
  }
  return c;
}

IntVector operator*(const IntMatrix& a, const IntVector& v) {
  if (a.cols() != v.size()) throw std::invalid_argument("dimension mismatch in matrix-vector product");
  IntVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (sgn(a(i, k)) != 0) out[i] += a(i, k) * v[k];
  return out;
}

Integer determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(m(k, k)) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && sgn(m(swap, k)) == 0) ++swap;
      if (swap == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(swap, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

namespace {

int cmpabs(const Integer& a, const Integer& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

struct Entry {
  std::uint32_t col;
  Integer val;
};
using SparseRow = std::vector<Entry>;

// dst += c * src
void drop_zeros(SparseRow& row) {
  row.erase(std::remove_if(row.begin(), row.end(), [](const Entry& e) { return sgn(e.val) == 0; }), row.end());
}

// dst += c * src
void axpy(SparseRow& dst, const Integer& c, const SparseRow& src, SparseRow& tmp) {
  if (sgn(c) == 0 || src.empty()) return;
  bool inside = src.size() <= dst.size();
  if (inside) {
    auto i = dst.begin();
    for (const auto& e : src) {
      while (i != dst.end() && i->col < e.col) ++i;
      if (i == dst.end() || i->col != e.col) {
        inside = false;
        break;
      }
      ++i;
    }
  }
  if (inside) {
    bool zero = false;
    auto i = dst.begin();
    for (const auto& e : src) {
      while (i->col < e.col) ++i;
      mpz_addmul(i->val.get_mpz_t(), c.get_mpz_t(), e.val.get_mpz_t());
      zero = zero || sgn(i->val) == 0;
      ++i;
    }
    if (zero) drop_zeros(dst);
    return;
  }
  tmp.clear();
  tmp.reserve(dst.size() + src.size());
  auto i = dst.begin();
  auto j = src.begin();
  while (i != dst.end() || j != src.end()) {
    if (j == src.end() || (i != dst.end() && i->col < j->col)) {
      tmp.push_back(std::move(*i++));
    } else if (i == dst.end() || j->col < i->col) {
      tmp.push_back({j->col, c * j->val});
      ++j;
    } else {
      mpz_addmul(i->val.get_mpz_t(), c.get_mpz_t(), j->val.get_mpz_t());
      if (sgn(i->val) != 0) tmp.push_back(std::move(*i));
      ++i;
      ++j;
    }
  }
  dst.swap(tmp);
}

// (x, y) <- (a x + b y, c x + d y)
void combine(SparseRow& x, SparseRow& y, const Integer& a, const Integer& b, const Integer& c, const Integer& d) {
  SparseRow nx, ny, tmp;
  for (const auto& e : x) nx.push_back({e.col, a * e.val});
  axpy(nx, b, y, tmp);
  for (const auto& e : x) ny.push_back({e.col, c * e.val});
  axpy(ny, d, y, tmp);
  auto drop_zero = [](SparseRow& r) {
    r.erase(std::remove_if(r.begin(), r.end(), [](const Entry& e) { return sgn(e.val) == 0; }), r.end());
  };
  drop_zero(nx);
  drop_zero(ny);
  x.swap(nx);
  y.swap(ny);
}

const Integer* find(const SparseRow& row, std::uint32_t col) {
  auto it = std::lower_bound(row.begin(), row.end(), col, [](const Entry& e, std::uint32_t c) { return e.col < c; });
  return (it != row.end() && it->col == col) ? &it->val : nullptr;
}

// Quotient rounded to nearest, so |a - q b| <= |b|/2.
Integer round_div(const Integer& a, const Integer& b) {
  Integer q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  // r carries the sign of b, so one more step of b always moves it toward zero
  Integer twice = 2 * abs(r);
  if (twice > abs(b)) q += 1;
  return q;
}

class SmithEngine {
 public:
  SmithEngine(const IntMatrix& a, const SnfOptions& opts, std::vector<IntVector>* left, const Integer* modulus = nullptr)
      : m_(a.rows()), n_(a.cols()), opts_(opts), left_(left) {
    if (modulus) {
      modulus_ = *modulus;
      half_ = modulus_ / 2;
      modular_ = true;
      opts_.with_u = false;
      opts_.with_v = false;
    }
    rows_.resize(m_);
    for (std::size_t r = 0; r < m_; ++r)
      for (std::size_t c = 0; c < n_; ++c)
        if (sgn(a(r, c)) != 0) rows_[r].push_back({static_cast<std::uint32_t>(c), a(r, c)});
    if (modular_) {
      for (auto& row : rows_) reduce(row);
      if (left_)
        for (auto& v : *left_)
          for (auto& x : v) reduce(x);
    }
    if (opts_.with_u) {
      urows_.resize(m_);
      for (std::size_t r = 0; r < m_; ++r) urows_[r].push_back({static_cast<std::uint32_t>(r), 1});
    }
    if (opts_.with_v) {
      vcols_.resize(n_);
      for (std::size_t c = 0; c < n_; ++c) vcols_[c].push_back({static_cast<std::uint32_t>(c), 1});
    }
    if (left_) {
      for (const auto& v : *left_)
        if (v.size() != m_) throw std::invalid_argument("tracked vector length must equal row count");
    }
    for (std::uint32_t r = 0; r < m_; ++r)
      if (!rows_[r].empty()) active_.push_back(r);
  }

  SnfResult run() {
    while (auto p = choose_pivot()) eliminate(p->first, p->second);
    return assemble();
  }

  /// Modular mode: pivots eliminated, left vectors reduced, no assembly.
  struct ModularState {
    std::vector<std::uint32_t> pivot_rows;
    IntVector pivot_values;
  };
  ModularState run_modular() {
    while (auto p = choose_pivot_modular()) eliminate_modular(p->first, p->second);
    ModularState st;
    for (const auto& p : pivots_) {
      st.pivot_rows.push_back(p.row);
      st.pivot_values.push_back(*find(rows_[p.row], p.col));
    }
    return st;
  }

 private:
  struct Pivot {
    std::uint32_t row, col;
  };

  std::optional<std::pair<std::uint32_t, std::uint32_t>> choose_pivot() const {
    if (active_.empty()) return std::nullopt;
    if (opts_.strategy == PivotStrategy::first_column) {
      std::uint32_t col = UINT32_MAX;
      for (auto r : active_) col = std::min(col, rows_[r].front().col);
      std::uint32_t best_row = UINT32_MAX;
      const Integer* best = nullptr;
      for (auto r : active_) {
        const Integer* x = find(rows_[r], col);
        if (x && (!best || cmpabs(*x, *best) < 0)) {
          best = x;
          best_row = r;
        }
      }
      return std::make_pair(best_row, col);
    }
    // min |entry|, then Markowitz cost, then position
    std::vector<std::uint32_t> col_count(n_, 0);
    const Integer* best = nullptr;
    for (auto r : active_) {
      for (const auto& e : rows_[r]) {
        ++col_count[e.col];
        if (!best || cmpabs(e.val, *best) < 0) best = &e.val;
      }
    }
    std::uint64_t best_cost = UINT64_MAX;
    std::pair<std::uint32_t, std::uint32_t> at{0, 0};
    for (auto r : active_) {
      const std::uint64_t rc = rows_[r].size() - 1;
      for (const auto& e : rows_[r]) {
        if (cmpabs(e.val, *best) != 0) continue;
        const std::uint64_t cost = rc * (col_count[e.col] - 1);
        if (cost < best_cost) {
          best_cost = cost;
          at = {r, e.col};
        }
      }
    }
    return at;
  }

  // Prefers +-1, then any unit mod M (the row is scaled so the pivot becomes
  // 1), then the smallest representative; Markowitz cost breaks ties.
  // first_column only looks at the leftmost nonzero column.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> choose_pivot_modular() {
    if (active_.empty()) return std::nullopt;
    std::vector<std::uint32_t> col_count(n_, 0);
    for (auto r : active_)
      for (const auto& e : rows_[r]) ++col_count[e.col];
    struct Cand {
      std::uint64_t cost;
      std::uint32_t row, col;
    };
    std::vector<Cand> cands;
    std::optional<Cand> unit;
    std::uint32_t only_col = UINT32_MAX;  // first_column restricts to the leftmost column
    if (opts_.strategy == PivotStrategy::first_column)
      for (auto r : active_) only_col = std::min(only_col, rows_[r].front().col);
    for (auto r : active_) {
      const std::uint64_t rc = rows_[r].size() - 1;
      for (const auto& e : rows_[r]) {
        if (only_col != UINT32_MAX && e.col != only_col) continue;
        const Cand cand{rc * (col_count[e.col] - 1), r, e.col};
        if (mpz_cmpabs_ui(e.val.get_mpz_t(), 1) == 0) {
          if (!unit || cand.cost < unit->cost) unit = cand;
        } else {
          cands.push_back(cand);
        }
      }
    }
    if (unit) return std::make_pair(unit->row, unit->col);
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.cost < b.cost; });
    Integer g, inv;
    for (const auto& cand : cands) {
      const Integer& x = *find(rows_[cand.row], cand.col);
      if (mpz_invert(inv.get_mpz_t(), x.get_mpz_t(), modulus_.get_mpz_t()) != 0) {
        scale_row(cand.row, inv);
        return std::make_pair(cand.row, cand.col);
      }
    }
    return choose_pivot();
  }

  void scale_row(std::uint32_t r, const Integer& u) {
    for (auto& e : rows_[r]) {
      e.val *= u;
      reduce(e.val);
    }
    if (left_)
      for (auto& v : *left_) {
        v[r] *= u;
        reduce(v[r]);
      }
  }

  // (row x, row y) <- (a x + b y, c x + d y), reduced
  void row_combine(std::uint32_t x, std::uint32_t y, const Integer& a, const Integer& b, const Integer& c,
                   const Integer& d) {
    combine(rows_[x], rows_[y], a, b, c, d);
    reduce(rows_[x]);
    reduce(rows_[y]);
    if (left_)
      for (auto& v : *left_) {
        const Integer vx = v[x], vy = v[y];
        v[x] = a * vx + b * vy;
        v[y] = c * vx + d * vy;
        reduce(v[x]);
        reduce(v[y]);
      }
  }

  void eliminate_modular(std::uint32_t r, std::uint32_t c) {
    std::vector<std::uint32_t> hits;
    for (;;) {
      hits.clear();
      for (auto i : active_)
        if (i != r && find(rows_[i], c)) hits.push_back(i);
      // rows the pivot does not divide: one Bezout step each
      for (auto i : hits) {
        const Integer a = *find(rows_[r], c);
        const Integer b = *find(rows_[i], c);
        if (mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) continue;
        Integer g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        row_combine(r, i, s, t, Integer(-b / g), Integer(a / g));
      }
      const Integer piv = *find(rows_[r], c);
      const auto count = static_cast<std::int64_t>(hits.size());
      auto clear_one = [&](std::int64_t k, SparseRow& tmp) {
        const auto i = hits[static_cast<std::size_t>(k)];
        const Integer* b = find(rows_[i], c);
        if (!b) return;
        const Integer qt = *b / piv;
        row_op(i, -qt, r, tmp);
      };
      if (opts_.exec == Exec::parallel) {
#pragma omp parallel
        {
          SparseRow tmp;
#pragma omp for schedule(dynamic, 4)
          for (std::int64_t k = 0; k < count; ++k) clear_one(k, tmp);
        }
      } else {
        SparseRow tmp;
        for (std::int64_t k = 0; k < count; ++k) clear_one(k, tmp);
      }

      // Column c is clear apart from the pivot. Entries of row r divisible by
      // the pivot vanish under column operations touching row r only; the
      // first one that is not triggers a Bezout step on two columns.
      const Entry* bad = nullptr;
      for (const auto& e : rows_[r])
        if (e.col != c && !mpz_divisible_p(e.val.get_mpz_t(), piv.get_mpz_t())) {
          bad = &e;
          break;
        }
      if (!bad) {
        const Integer keep = piv;
        rows_[r].assign(1, Entry{c, keep});
        break;
      }
      const std::uint32_t j = bad->col;
      const Integer e = bad->val;
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), piv.get_mpz_t(), e.get_mpz_t());
      const Integer eg = e / g, ag = piv / g;
      // (col c, col j) <- (s col c + t col j, -eg col c + ag col j)
      std::vector<std::uint32_t> touched = active_;
      for (auto i : touched) {
        auto& row = rows_[i];
        const Integer* xc = find(row, c);
        const Integer* xj = find(row, j);
        if (!xc && !xj) continue;
        const Integer vc = xc ? *xc : Integer(0), vj = xj ? *xj : Integer(0);
        Integer nc = s * vc + t * vj, nj = -eg * vc + ag * vj;
        reduce(nc);
        reduce(nj);
        row.erase(std::remove_if(row.begin(), row.end(), [&](const Entry& x) { return x.col == c || x.col == j; }),
                  row.end());
        for (auto [col, val] : {std::pair{c, nc}, std::pair{j, nj}}) {
          if (sgn(val) == 0) continue;
          auto it = std::lower_bound(row.begin(), row.end(), col, [](const Entry& x, std::uint32_t cc) { return x.col < cc; });
          row.insert(it, Entry{col, val});
        }
      }
    }
    pivots_.push_back({r, c});
    active_.erase(std::find(active_.begin(), active_.end(), r));
    active_.erase(std::remove_if(active_.begin(), active_.end(), [&](std::uint32_t i) { return rows_[i].empty(); }),
                  active_.end());
  }

  // symmetric residue in (-M/2, M/2]
  void reduce(Integer& x) const {
    if (cmpabs(x, half_) <= 0) return;
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), modulus_.get_mpz_t());
    if (x > half_) x -= modulus_;
  }
  void reduce(SparseRow& row) const {
    for (auto& e : row) reduce(e.val);
    row.erase(std::remove_if(row.begin(), row.end(), [](const Entry& e) { return sgn(e.val) == 0; }), row.end());
  }

  void row_op(std::uint32_t dst, const Integer& c, std::uint32_t src, SparseRow& tmp) {
    axpy(rows_[dst], c, rows_[src], tmp);
    if (modular_) reduce(rows_[dst]);
    if (opts_.with_u) axpy(urows_[dst], c, urows_[src], tmp);
    if (left_) {
      for (auto& v : *left_) {
        v[dst] += c * v[src];
        if (modular_) reduce(v[dst]);
      }
    }
  }

  void eliminate(std::uint32_t r, std::uint32_t c) {
    std::vector<std::uint32_t> hits;
    for (;;) {
      const Integer piv = *find(rows_[r], c);
      hits.clear();
      for (auto i : active_)
        if (i != r && find(rows_[i], c)) hits.push_back(i);

      if (!hits.empty()) {
        const auto count = static_cast<std::int64_t>(hits.size());
        auto clear_one = [&](std::int64_t k, SparseRow& tmp) {
          const auto i = hits[static_cast<std::size_t>(k)];
          const Integer qt = round_div(*find(rows_[i], c), piv);
          row_op(i, -qt, r, tmp);
        };
        if (opts_.exec == Exec::parallel) {
#pragma omp parallel
          {
            SparseRow tmp;
#pragma omp for schedule(dynamic, 4)
            for (std::int64_t k = 0; k < count; ++k) clear_one(k, tmp);
          }
        } else {
          SparseRow tmp;
          for (std::int64_t k = 0; k < count; ++k) clear_one(k, tmp);
        }
        std::uint32_t next = r;
        const Integer* smallest = nullptr;
        for (auto i : hits) {
          const Integer* x = find(rows_[i], c);
          if (x && (!smallest || cmpabs(*x, *smallest) < 0)) {
            smallest = x;
            next = i;
          }
        }
        if (smallest) {
          r = next;
          continue;
        }
      }

      // Column c is clear apart from the pivot, so column operations only touch row r.
      bool remainder = false;
      SparseRow tmp;
      for (auto& e : rows_[r]) {
        if (e.col == c) continue;
        const Integer qt = round_div(e.val, piv);
        if (sgn(qt) == 0) {
          remainder = true;
          continue;
        }
        e.val -= qt * piv;
        if (modular_) reduce(e.val);
        if (opts_.with_v) axpy(vcols_[e.col], -qt, vcols_[c], tmp);
        if (sgn(e.val) != 0) remainder = true;
      }
      auto& row = rows_[r];
      row.erase(std::remove_if(row.begin(), row.end(), [](const Entry& e) { return sgn(e.val) == 0; }), row.end());
      if (remainder) {
        const Integer* smallest = nullptr;
        for (const auto& e : row) {
          if (e.col != c && (!smallest || cmpabs(e.val, *smallest) < 0)) {
            smallest = &e.val;
            c = e.col;
          }
        }
        continue;
      }
      break;
    }
    pivots_.push_back({r, c});
    active_.erase(std::find(active_.begin(), active_.end(), r));
    // rows that became empty drop out of the active set
    active_.erase(std::remove_if(active_.begin(), active_.end(), [&](std::uint32_t i) { return rows_[i].empty(); }),
                  active_.end());
  }

  SnfResult assemble() {
    const std::size_t rank = pivots_.size();
    std::vector<std::uint32_t> rperm, cperm;
    std::vector<char> rused(m_, 0), cused(n_, 0);
    for (const auto& p : pivots_) {
      rperm.push_back(p.row);
      cperm.push_back(p.col);
      rused[p.row] = 1;
      cused[p.col] = 1;
    }
    for (std::uint32_t i = 0; i < m_; ++i)
      if (!rused[i]) rperm.push_back(i);
    for (std::uint32_t j = 0; j < n_; ++j)
      if (!cused[j]) cperm.push_back(j);

    std::vector<Integer> diag(rank);
    for (std::size_t t = 0; t < rank; ++t) diag[t] = *find(rows_[pivots_[t].row], pivots_[t].col);

    std::vector<SparseRow> u, v;
    if (opts_.with_u)
      for (auto i : rperm) u.push_back(std::move(urows_[i]));
    if (opts_.with_v)
      for (auto j : cperm) v.push_back(std::move(vcols_[j]));
    if (left_) {
      for (auto& vec : *left_) {
        IntVector permuted(m_);
        for (std::size_t t = 0; t < m_; ++t) permuted[t] = std::move(vec[rperm[t]]);
        vec = std::move(permuted);
      }
    }

    for (std::size_t t = 0; t < rank; ++t) {
      if (sgn(diag[t]) < 0) {
        diag[t] = -diag[t];
        if (opts_.with_u)
          for (auto& e : u[t]) e.val = -e.val;
        if (left_)
          for (auto& vec : *left_) vec[t] = -vec[t];
      }
    }

    // divisibility chain via 2x2 transforms diag(a,b) -> diag(g, ab/g)
    for (std::size_t i = 0; i < rank; ++i) {
      for (std::size_t j = i + 1; j < rank; ++j) {
        const Integer a = diag[i], b = diag[j];
        if (b % a == 0) continue;
        Integer g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        const Integer bg = b / g, ag = a / g;
        if (opts_.with_u) combine(u[i], u[j], s, t, -bg, ag);
        if (left_) {
          for (auto& vec : *left_) {
            const Integer x = vec[i], y = vec[j];
            vec[i] = s * x + t * y;
            vec[j] = -bg * x + ag * y;
          }
        }
        if (opts_.with_v) combine(v[i], v[j], Integer(1), Integer(1), -t * bg, s * ag);
        diag[i] = g;
        diag[j] = a * bg;
      }
    }

    SnfResult res;
    res.rank = rank;
    res.d = IntMatrix(m_, n_);
    for (std::size_t t = 0; t < rank; ++t) res.d(t, t) = diag[t];
    if (opts_.with_u) {
      IntMatrix um(m_, m_);
      for (std::size_t i = 0; i < m_; ++i)
        for (const auto& e : u[i]) um(i, e.col) = e.val;
      res.u = std::move(um);
    }
    if (opts_.with_v) {
      IntMatrix vm(n_, n_);
      for (std::size_t j = 0; j < n_; ++j)
        for (const auto& e : v[j]) vm(e.col, j) = e.val;
      res.v = std::move(vm);
    }
    return res;
  }

  std::size_t m_, n_;
  SnfOptions opts_;
  std::vector<IntVector>* left_;
  bool modular_ = false;
  Integer modulus_, half_;
  std::vector<SparseRow> rows_;
  std::vector<SparseRow> urows_;  // rows of U
  std::vector<SparseRow> vcols_;  // columns of V
  std::vector<std::uint32_t> active_;
  std::vector<Pivot> pivots_;
};


// ---- arithmetic modulo word-size primes ----

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  for (; e; e >>= 1, a = mulmod(a, a, p))
    if (e & 1) r = mulmod(r, a, p);
  return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

// Primes in (2^61, 2^62), ascending.
u64 nth_prime(std::size_t i) {
  static std::vector<u64> cache;
  static std::mutex mu;
  std::lock_guard lock(mu);
  Integer x = Integer(1) << 61;
  if (!cache.empty()) x = Integer(static_cast<unsigned long>(cache.back()));
  while (cache.size() <= i) {
    mpz_nextprime(x.get_mpz_t(), x.get_mpz_t());
    cache.push_back(x.get_ui());
  }
  return cache[i];
}

constexpr double kPrimeBits = 61.0;

using ModRow = std::vector<std::pair<std::uint32_t, u64>>;

struct ModElimination {
  std::size_t rank = 0;
  std::vector<std::uint32_t> pivot_rows, pivot_cols;
  u64 pivot_product = 1;
  std::vector<bool> extra_independent;  // extra column j lies outside the span
};

// Gaussian elimination over F_p on sparse rows whose columns [0, n) may be
// pivots and columns [n, n + extras) are carried along.
ModElimination eliminate_mod_p(std::vector<ModRow> rows, std::uint32_t n, std::size_t extras, u64 p) {
  ModElimination out;
  std::vector<std::uint32_t> active;
  for (std::uint32_t r = 0; r < rows.size(); ++r)
    if (!rows[r].empty() && rows[r].front().first < n) active.push_back(r);
  std::vector<std::uint32_t> col_count(n);
  ModRow tmp;
  while (!active.empty()) {
    std::fill(col_count.begin(), col_count.end(), 0);
    for (auto r : active)
      for (const auto& [c, v] : rows[r])
        if (c < n) ++col_count[c];
    // shortest row, then its sparsest column
    std::uint32_t pr = active.front();
    for (auto r : active)
      if (rows[r].size() < rows[pr].size()) pr = r;
    std::uint32_t pc = UINT32_MAX;
    u64 pv = 0;
    for (const auto& [c, v] : rows[pr])
      if (c < n && (pc == UINT32_MAX || col_count[c] < col_count[pc])) {
        pc = c;
        pv = v;
      }
    out.pivot_rows.push_back(pr);
    out.pivot_cols.push_back(pc);
    out.pivot_product = mulmod(out.pivot_product, pv, p);
    const u64 inv = invmod(pv, p);
    std::vector<std::uint32_t> next;
    for (auto r : active) {
      if (r == pr) continue;
      auto it = std::lower_bound(rows[r].begin(), rows[r].end(), pc,
                                 [](const auto& e, std::uint32_t c) { return e.first < c; });
      if (it != rows[r].end() && it->first == pc) {
        const u64 f = p - mulmod(it->second, inv, p);  // row_r += f * row_pr
        tmp.clear();
        auto i = rows[r].begin();
        auto j = rows[pr].begin();
        while (i != rows[r].end() || j != rows[pr].end()) {
          if (j == rows[pr].end() || (i != rows[r].end() && i->first < j->first)) {
            tmp.push_back(*i++);
          } else if (i == rows[r].end() || j->first < i->first) {
            tmp.emplace_back(j->first, mulmod(f, j->second, p));
            ++j;
          } else {
            const u64 x = (i->second + mulmod(f, j->second, p)) % p;
            if (x) tmp.emplace_back(i->first, x);
            ++i;
            ++j;
          }
        }
        rows[r].swap(tmp);
      }
      if (!rows[r].empty() && rows[r].front().first < n) next.push_back(r);
    }
    active.swap(next);
  }
  // non-pivot rows are now free of pivot columns
  std::vector<char> is_pivot(rows.size(), 0);
  for (auto r : out.pivot_rows) is_pivot[r] = 1;
  out.extra_independent.assign(extras, false);
  for (std::uint32_t r = 0; r < rows.size(); ++r)
    if (!is_pivot[r])
      for (const auto& [c, v] : rows[r])
        if (c >= n) out.extra_independent[c - n] = true;
  out.rank = out.pivot_rows.size();
  return out;
}

u64 residue(const Integer& x, u64 p) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), Integer(static_cast<unsigned long>(p)).get_mpz_t());
  return r.get_ui();
}

// Rows of `a` modulo p, with the tracked vectors appended as extra columns.
std::vector<ModRow> residue_rows(const IntMatrix& a, const std::vector<IntVector>& extra, u64 p) {
  std::vector<ModRow> rows(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (sgn(a(r, c)) != 0)
        if (u64 x = residue(a(r, c), p)) rows[r].emplace_back(static_cast<std::uint32_t>(c), x);
    for (std::size_t j = 0; j < extra.size(); ++j)
      if (sgn(extra[j][r]) != 0)
        if (u64 x = residue(extra[j][r], p)) rows[r].emplace_back(static_cast<std::uint32_t>(a.cols() + j), x);
  }
  return rows;
}

// log2 of ||x||_2 for x given as (mantissa, exponent) parts.
double log2_norm(const std::vector<const Integer*>& xs) {
  long emax = LONG_MIN;
  std::vector<std::pair<double, long>> parts;
  for (const Integer* x : xs) {
    if (sgn(*x) == 0) continue;
    long e = 0;
    const double m = mpz_get_d_2exp(&e, x->get_mpz_t());
    parts.emplace_back(m, e);
    emax = std::max(emax, e);
  }
  if (parts.empty()) return 0;
  double sum = 0;
  for (const auto& [m, e] : parts) sum += std::ldexp(m * m, static_cast<int>(2 * (e - emax)));
  return static_cast<double>(emax) + 0.5 * std::log2(sum);
}

// Row and column norms of [a | extra], for Hadamard bounds on minors.
struct Norms {
  std::vector<double> rows, cols;

  Norms(const IntMatrix& a, const std::vector<const IntVector*>& extra) {
    for (std::size_t r = 0; r < a.rows(); ++r) {
      std::vector<const Integer*> xs;
      for (std::size_t c = 0; c < a.cols(); ++c) xs.push_back(&a(r, c));
      for (const auto* v : extra) xs.push_back(&(*v)[r]);
      rows.push_back(log2_norm(xs));
    }
    for (std::size_t c = 0; c < a.cols(); ++c) {
      std::vector<const Integer*> xs;
      for (std::size_t r = 0; r < a.rows(); ++r) xs.push_back(&a(r, c));
      cols.push_back(log2_norm(xs));
    }
    for (const auto* v : extra) {
      std::vector<const Integer*> xs;
      for (const auto& x : *v) xs.push_back(&x);
      cols.push_back(log2_norm(xs));
    }
    std::sort(rows.begin(), rows.end(), std::greater<>());
    std::sort(cols.begin(), cols.end(), std::greater<>());
  }

  // Bits bounding |any k x k minor|: the k largest row (or column) norms.
  double bound(std::size_t k) const {
    auto top = [k](const std::vector<double>& v) {
      double s = 0;
      for (std::size_t i = 0; i < std::min(k, v.size()); ++i) s += std::max(v[i], 0.0);
      return s;
    };
    return std::min(top(rows), top(cols)) + 1.0;
  }
};

struct RankCertificate {
  std::size_t rank = 0;
  Integer minor;                       // nonzero rank x rank minor
  std::vector<bool> outside_span;      // per tracked vector
};

// Exact rank of `a`, a nonzero maximal minor, and whether each vector lies
// outside the column span, from eliminations modulo enough primes that
// their product exceeds every relevant Hadamard bound.
RankCertificate certify_rank(const IntMatrix& a, const std::vector<IntVector>& vs, Exec exec) {
  struct PrimeRun {
    u64 p;
    ModElimination full;
  };
  RankCertificate cert;
  std::vector<std::uint32_t> prow, pcol;
  std::size_t rank = 0;
  bool have_ref = false;
  std::vector<bool> outside(vs.size(), false);

  Integer crt_value = 0, crt_mod = 1;
  double counted_bits = 0;
  std::size_t next_prime = 0;

  auto minor_residue = [&](u64 p) {
    std::vector<ModRow> sub(rank);
    std::vector<std::uint32_t> col_index(a.cols(), UINT32_MAX);
    for (std::uint32_t j = 0; j < rank; ++j) col_index[pcol[j]] = j;
    for (std::size_t i = 0; i < rank; ++i) {
      for (std::size_t c = 0; c < a.cols(); ++c)
        if (col_index[c] != UINT32_MAX && sgn(a(prow[i], c)) != 0)
          if (u64 x = residue(a(prow[i], c), p)) sub[i].emplace_back(col_index[c], x);
      std::sort(sub[i].begin(), sub[i].end());
    }
    const auto e = eliminate_mod_p(std::move(sub), static_cast<std::uint32_t>(rank), 0, p);
    if (e.rank < rank) return u64{0};
    // sign of the permutation row -> column
    std::vector<std::uint32_t> perm(rank);
    for (std::size_t t = 0; t < rank; ++t) perm[e.pivot_rows[t]] = e.pivot_cols[t];
    bool odd = false;
    std::vector<char> seen(rank, 0);
    for (std::size_t i = 0; i < rank; ++i) {
      if (seen[i]) continue;
      std::size_t len = 0;
      for (std::size_t j = i; !seen[j]; j = perm[j]) seen[j] = 1, ++len;
      if (len % 2 == 0) odd = !odd;
    }
    // pivots were taken in elimination order; the product is the determinant
    // up to that permutation's sign
    return odd ? (p - e.pivot_product) % p : e.pivot_product;
  };

  const std::size_t batch = exec == Exec::parallel ? static_cast<std::size_t>(std::max(1, omp_get_max_threads())) : 1;
  const Norms plain(a, {});
  std::vector<Norms> augmented;
  for (const auto& v : vs) augmented.emplace_back(a, std::vector<const IntVector*>{&v});
  for (;;) {
    // rank + 1 minors vanish, the CRT recovers the signed minor, and each
    // vector's rank + 1 minors vanish unless already shown independent
    double need = std::max(plain.bound(rank + 1), plain.bound(rank) + 1.0);
    for (std::size_t j = 0; j < vs.size(); ++j)
      if (!outside[j]) need = std::max(need, augmented[j].bound(rank + 1));
    if (have_ref && counted_bits > need) break;

    std::vector<PrimeRun> runs(batch);
    for (std::size_t b = 0; b < batch; ++b) runs[b].p = nth_prime(next_prime + b);
    next_prime += batch;
    const auto count = static_cast<std::int64_t>(batch);
#pragma omp parallel for schedule(dynamic, 1) if (batch > 1)
    for (std::int64_t b = 0; b < count; ++b) {
      auto& run = runs[static_cast<std::size_t>(b)];
      run.full = eliminate_mod_p(residue_rows(a, vs, run.p), static_cast<std::uint32_t>(a.cols()), vs.size(), run.p);
    }

    for (auto& run : runs) {
      if (!have_ref || run.full.rank > rank) {
        have_ref = true;
        rank = run.full.rank;
        prow = run.full.pivot_rows;
        pcol = run.full.pivot_cols;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
        for (std::size_t t = 0; t < rank; ++t) pairs.emplace_back(prow[t], pcol[t]);
        std::sort(pairs.begin(), pairs.end());
        for (std::size_t t = 0; t < rank; ++t) prow[t] = pairs[t].first, pcol[t] = pairs[t].second;
        crt_value = 0;
        crt_mod = 1;
        counted_bits = 0;
        std::fill(outside.begin(), outside.end(), false);
      }
      if (run.full.rank == rank)
        for (std::size_t j = 0; j < vs.size(); ++j)
          if (run.full.extra_independent[j]) outside[j] = true;
      // CRT step for the reference minor
      const u64 r = minor_residue(run.p);
      const u64 cur = residue(crt_value, run.p);
      const u64 inv = invmod(residue(crt_mod, run.p), run.p);
      const u64 t = mulmod((r + run.p - cur) % run.p, inv, run.p);
      crt_value += crt_mod * Integer(static_cast<unsigned long>(t));
      crt_mod *= Integer(static_cast<unsigned long>(run.p));
      counted_bits += kPrimeBits;
    }
  }
  if (crt_value > crt_mod / 2) crt_value -= crt_mod;
  cert.rank = rank;
  cert.minor = rank == 0 ? Integer(1) : crt_value;
  cert.outside_span = outside;
  if (sgn(cert.minor) == 0) throw std::logic_error("certified minor vanished");
  return cert;
}

// d_1 | d_2 | ... from a multiset of divisors of M via gcd/lcm exchanges.
IntVector divisor_chain(IntVector xs) {
  IntVector out;
  IntVector rest;
  std::size_t ones = 0;
  for (auto& x : xs) (x == 1 ? (void)++ones : rest.push_back(std::move(x)));
  for (std::size_t i = 0; i < rest.size(); ++i) {
    for (std::size_t j = i + 1; j < rest.size(); ++j) {
      if (rest[j] % rest[i] == 0) continue;
      const Integer g = gcd(rest[i], rest[j]);
      const Integer l = rest[i] / g * rest[j];
      rest[i] = g;
      rest[j] = l;
    }
  }
  out.assign(ones, Integer(1));
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

struct ModularSnf {
  std::size_t rank = 0;
  IntVector factors;                   // d_1 .. d_rank
  std::vector<ElementOrder> orders;    // per tracked vector
};

// Smith invariants of `a` and orders of vectors in Z^rows / colspan(a),
// computed modulo M = 2|minor|, which every d_i divides.
ModularSnf modular_snf(const IntMatrix& a, const std::vector<IntVector>& vs, const SnfOptions& opts) {
  const auto cert = certify_rank(a, vs, opts.exec);
  const Integer modulus = 2 * abs(cert.minor);

  std::vector<IntVector> tracked = vs;
  SnfOptions o = opts;
  o.with_u = false;
  o.with_v = false;
  SmithEngine engine(a, o, &tracked, &modulus);
  const auto st = engine.run_modular();

  IntVector gs(a.rows(), modulus);
  for (std::size_t t = 0; t < st.pivot_rows.size(); ++t) gs[st.pivot_rows[t]] = gcd(st.pivot_values[t], modulus);

  ModularSnf out;
  out.rank = cert.rank;
  for (auto& d : divisor_chain(gs))
    if (d != modulus) out.factors.push_back(d);
  if (out.factors.size() != cert.rank)
    throw std::logic_error("modular Smith form disagrees with the certified rank");

  for (std::size_t j = 0; j < vs.size(); ++j) {
    if (cert.outside_span[j]) {
      out.orders.push_back(ElementOrder::infinite_order());
      continue;
    }
    ElementOrder ord;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const Integer& g = gs[i];
      ord.value = lcm(ord.value, Integer(g / gcd(g, tracked[j][i])));
    }
    out.orders.push_back(ord);
  }
  return out;
}

}  // namespace

IntVector SnfResult::invariant_factors() const {
  IntVector out;
  for (std::size_t t = 0; t < rank; ++t) out.push_back(d(t, t));
  return out;
}

namespace {

bool use_modular(const SnfOptions& opts) {
  if (opts.method == SnfMethod::modular) return true;
  return opts.method == SnfMethod::automatic && !opts.with_u && !opts.with_v;
}

}  // namespace

SnfResult smith_normal_form(const IntMatrix& a, const SnfOptions& opts) {
  if (use_modular(opts)) {
    const auto m = modular_snf(a, {}, opts);
    SnfResult res;
    res.rank = m.rank;
    res.d = IntMatrix(a.rows(), a.cols());
    for (std::size_t t = 0; t < m.rank; ++t) res.d(t, t) = m.factors[t];
    return res;
  }
  auto res = SmithEngine(a, opts, nullptr).run();
  if (res.u && res.v && !(*res.u * a * *res.v == res.d)) throw std::logic_error("Smith form reconstruction failed");
  return res;
}

SnfResult smith_normal_form(const IntMatrix& a, const SnfOptions& opts, std::vector<IntVector>& left) {
  return SmithEngine(a, opts, &left).run();
}

QuotientData quotient_data(const IntMatrix& relations, const std::vector<IntVector>& vs, const SnfOptions& opts) {
  for (const auto& v : vs) {
    if (v.size() != relations.cols()) {
      throw std::invalid_argument("vector length " + std::to_string(v.size()) + " does not match " +
                                  std::to_string(relations.cols()) + " generators");
    }
  }
  SnfOptions o = opts;
  o.with_u = false;
  o.with_v = false;
  // Columns of R^T span the lattice.
  const IntMatrix at = relations.transpose();
  QuotientData out;
  if (o.method != SnfMethod::exact) {
    auto m = modular_snf(at, vs, o);
    out.rank = m.rank;
    out.invariant_factors = std::move(m.factors);
    out.orders = std::move(m.orders);
    return out;
  }
  std::vector<IntVector> w = vs;
  const auto snf = SmithEngine(at, o, &w).run();
  out.rank = snf.rank;
  out.invariant_factors = snf.invariant_factors();
  for (const auto& wi : w) {
    ElementOrder ord;
    for (std::size_t i = snf.rank; i < wi.size(); ++i) {
      if (sgn(wi[i]) != 0) {
        ord = ElementOrder::infinite_order();
        break;
      }
    }
    if (!ord.infinite) {
      for (std::size_t i = 0; i < snf.rank; ++i) {
        const Integer& d = snf.d(i, i);
        ord.value = lcm(ord.value, Integer(d / gcd(d, wi[i])));
      }
    }
    out.orders.push_back(ord);
  }
  return out;
}

std::vector<ElementOrder> element_orders(const IntMatrix& relations, const std::vector<IntVector>& vs,
                                         const SnfOptions& opts) {
  return quotient_data(relations, vs, opts).orders;
}

ElementOrder element_order(const IntMatrix& relations, const IntVector& v, const SnfOptions& opts) {
  return element_orders(relations, {v}, opts).front();
}

bool lattice_member(const IntMatrix& relations, const IntVector& v, const SnfOptions& opts) {
  const auto ord = element_order(relations, v, opts);
  return !ord.infinite && ord.value == 1;
}

}  // namespace a2k
