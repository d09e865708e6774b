#pragma once

// Two-dimensional shift over the typed tiles. Entry (beta, alpha) of M1 is 1
// when beta can follow alpha in the first lattice direction: some tile
// psi = (x3, z, y1) glues the last letter x3 of alpha to the first letter y1
// of beta. M2 uses psi = (x2, y1, z) instead.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "a2k/exec.hpp"
#include "a2k/presentation.hpp"
#include "a2k/verification.hpp"

namespace a2k {

/// Square {0,1} matrix stored sparsely by rows and by columns.
/// Row index = successor, column index = source.
class BitMatrix {
 public:
  BitMatrix() = default;
  static BitMatrix from_columns(std::size_t dim, std::vector<std::vector<std::uint32_t>> cols);
  static BitMatrix from_rows(std::size_t dim, std::vector<std::vector<std::uint32_t>> rows);

  std::size_t dim() const { return dim_; }
  std::size_t nnz() const;
  bool at(std::uint32_t row, std::uint32_t col) const;
  /// Sources alpha with M(row, alpha) = 1.
  std::span<const std::uint32_t> row(std::uint32_t r) const { return rows_[r]; }
  /// Successors beta with M(beta, col) = 1.
  std::span<const std::uint32_t> col(std::uint32_t c) const { return cols_[c]; }

  bool operator==(const BitMatrix& o) const { return dim_ == o.dim_ && rows_ == o.rows_; }

  /// `dim nnz` header, then `row col` lines in row-major order.
  std::string to_triplet() const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::vector<std::uint32_t>> rows_;
  std::vector<std::vector<std::uint32_t>> cols_;
};

/// Product of two {0,1} matrices with integer entries, stored by columns as
/// sorted (row, count) lists.
struct CountMatrix {
  std::size_t dim = 0;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> cols;
  bool operator==(const CountMatrix&) const = default;
};

CountMatrix multiply(const BitMatrix& a, const BitMatrix& b, Exec exec = Exec::parallel);

/// Side conditions on the gluing tile psi.
///   exclude_psi_rotation : psi is not alpha itself read from x3 (resp. x2)
///   exclude_beta_rotation: beta is not psi itself read from y1
struct ShiftRule {
  bool exclude_psi_rotation = true;
  bool exclude_beta_rotation = true;

  bool operator==(const ShiftRule&) const = default;
  std::string to_string() const;  // "both-exclusions", "psi-only", "beta-only", "literal"
  static ShiftRule parse(const std::string& s);
  static ShiftRule literal() { return {false, false}; }
};

struct TransitionMatrices {
  BitMatrix m1;
  BitMatrix m2;
  ShiftRule rule;
};

/// Direction 1 follows the third edge, direction 2 the second edge.
BitMatrix build_transition_matrix(const TypedPresentation& t1, int direction, const ShiftRule& rule,
                                  Exec exec = Exec::parallel);
TransitionMatrices build_transition_matrices(const TypedPresentation& t1, const ShiftRule& rule,
                                             Exec exec = Exec::parallel);

/// Every row and column sum equals `expected`.
VerificationReport check_regularity(const BitMatrix& m, std::uint64_t expected, const std::string& name);

struct CalibrationCandidate {
  ShiftRule rule;
  bool accepted = false;
  VerificationReport gates;
};

struct Calibration {
  std::optional<ShiftRule> rule;
  std::vector<CalibrationCandidate> candidates;  // in trial order
};

/// Tries both, psi-only, beta-only, none. Gates: row and column sums q^2,
/// H1a, Lemma 2. H1b is evaluated and recorded but does not gate.
Calibration calibrate_shift_rule(const TypedPresentation& t1, const BasicSubset& s);

/// Same, returning the rule or throwing with the per-candidate failures.
ShiftRule calibrated_rule(const TypedPresentation& t1, const BasicSubset& s);

/// H0, H1a, H1b, H2 (one strongly connected component of the union digraph)
/// and the interchange square (exactly one commuting gamma per composite).
VerificationReport verify_H(const BitMatrix& m1, const BitMatrix& m2);

/// M1 and M2 move each pattern class cyclically in opposite directions.
VerificationReport check_pattern_cycle(const TypedPresentation& t1, const BitMatrix& m1, const BitMatrix& m2);

/// Number of strongly connected components of the digraph alpha -> beta for
/// M_i(beta, alpha) = 1 in either matrix.
std::size_t union_scc_count(const BitMatrix& m1, const BitMatrix& m2);

struct Window {
  std::uint32_t m1 = 0;  // extent along e1
  std::uint32_t m2 = 0;  // extent along e2
  std::size_t cells() const { return std::size_t{m1 + 1} * (m2 + 1); }
};

/// Word on [0,m]: cells stored row-major with the e1 coordinate fastest.
struct Word {
  Window window;
  std::vector<std::uint32_t> cells;
  std::uint32_t at(std::uint32_t i, std::uint32_t j) const { return cells[std::size_t{j} * (window.m1 + 1) + i]; }
};

struct WordCount {
  std::uint64_t count = 0;
  bool capped = false;
};

class WindowTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kWordWindowGuard = 16;

/// Counts words by backtracking in a fixed order; stops at `cap`. Windows with
/// more than kWordWindowGuard cells need `allow_large`. The optional sink sees
/// every word in enumeration order.
WordCount enumerate_words(const BitMatrix& m1, const BitMatrix& m2, Window m, std::uint64_t cap,
                          bool allow_large = false, const std::function<void(const Word&)>& sink = {});

/// For each nonzero p with max-norm <= bound, searches a word on the window
/// (|p1|+1, |p2|+1) with w(l) != w(l+p). Full H3 is not decided.
VerificationReport verify_H3_bounded(const BitMatrix& m1, const BitMatrix& m2, int bound);

/// Word on the given window that is not p-periodic, if one exists.
std::optional<std::pair<Word, std::pair<int, int>>> find_aperiodic_word(const BitMatrix& m1, const BitMatrix& m2,
                                                                         int p1, int p2);

/// Multiplicity of each tile in { beta : M(beta, alpha) = 1, alpha in sources }.
std::vector<std::uint32_t> shift_multiset(const BitMatrix& m, std::span<const std::uint32_t> sources);

/// Lemma 2 and its two rotated variants: shifting rho^r(S) gives q copies of
/// each tile of rho^{r+1}(S), q-1 of the remaining tiles of that pattern class,
/// none elsewhere, q^2 n in total.
VerificationReport verify_lemma2(const TypedPresentation& t1, const BasicSubset& s, const BitMatrix& m1);

/// Indices of rho^r(S) in T1.
std::vector<std::uint32_t> rotated_subset(const TypedPresentation& t1, const BasicSubset& s, int r);

std::string union_digraph_dot(const TypedPresentation& t1, const BitMatrix& m1, const BitMatrix& m2);

}  // namespace a2k
