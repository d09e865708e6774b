#pragma once

// Exact integer lattice algebra over GMP integers: Smith normal form with
// unimodular transforms, element orders in finitely presented abelian groups
// and lattice membership.

#include <gmpxx.h>

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "a2k/exec.hpp"

namespace a2k {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> init);

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntMatrix transpose() const;
  bool is_zero() const;
  std::size_t nnz() const;

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  /// `rows cols nnz` header, then `row col value` lines in row-major order.
  std::string to_triplet() const;
  static IntMatrix from_triplet(const std::string& text);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntVector operator*(const IntMatrix& a, const IntVector& v);

/// Fraction-free (Bareiss) determinant of a square matrix.
Integer determinant(const IntMatrix& a);

enum class PivotStrategy {
  min_abs,       // smallest |entry| anywhere, Markowitz tie-break
  first_column,  // leftmost nonzero column, smallest |entry| in it
};

enum class SnfMethod {
  automatic,  // modular when no transforms are requested, else exact
  exact,      // elimination over Z; coefficients may grow
  modular,    // certified rank and minor, then elimination modulo 2|minor|
};

struct SnfOptions {
  SnfMethod method = SnfMethod::automatic;
  PivotStrategy strategy = PivotStrategy::min_abs;
  bool with_u = true;
  bool with_v = true;
  Exec exec = Exec::parallel;
};

struct SnfResult {
  IntMatrix d;
  std::optional<IntMatrix> u;  // U * A * V == D
  std::optional<IntMatrix> v;
  std::size_t rank = 0;

  /// d_1 | d_2 | ... | d_rank, all positive.
  IntVector invariant_factors() const;
};

SnfResult smith_normal_form(const IntMatrix& a, const SnfOptions& opts = {});

/// Exact elimination; each vector in `left` (length a.rows()) is replaced by
/// U * v without materialising U.
SnfResult smith_normal_form(const IntMatrix& a, const SnfOptions& opts, std::vector<IntVector>& left);

/// Order of an element of a finite or infinite cyclic subgroup.
struct ElementOrder {
  bool infinite = false;
  Integer value = 1;

  static ElementOrder infinite_order() { return {true, 0}; }
  bool operator==(const ElementOrder& o) const { return infinite == o.infinite && (infinite || value == o.value); }
  std::string to_string() const { return infinite ? "infinite" : value.get_str(); }
  /// Finite order dividing n.
  bool divides(const Integer& n) const { return !infinite && n % value == 0; }
};

/// Order of v in Z^cols / (row lattice of relations).
ElementOrder element_order(const IntMatrix& relations, const IntVector& v, const SnfOptions& opts = {});

/// Orders of several vectors sharing one Smith form computation.
std::vector<ElementOrder> element_orders(const IntMatrix& relations, const std::vector<IntVector>& vs,
                                         const SnfOptions& opts = {});

/// Invariant factors (d_i > 0, all of them) of the relation matrix and the
/// orders of `vs` in Z^cols / rowspace, from one Smith computation.
struct QuotientData {
  std::size_t rank = 0;
  IntVector invariant_factors;
  std::vector<ElementOrder> orders;
};

QuotientData quotient_data(const IntMatrix& relations, const std::vector<IntVector>& vs, const SnfOptions& opts = {});

bool lattice_member(const IntMatrix& relations, const IntVector& v, const SnfOptions& opts = {});

}  // namespace a2k
