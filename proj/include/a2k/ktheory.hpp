#pragma once

// The K0 model: the abelian group generated by the tiles of T1 subject to
// t = sum_s M(s,t) s, and the class of the identity, which is the sum of all
// tiles.

#include <string>
#include <vector>

#include "a2k/intlat.hpp"
#include "a2k/presentation.hpp"
#include "a2k/subshift.hpp"
#include "a2k/verification.hpp"

namespace a2k {

enum class RelationSet { m1_only, m2_only, both };

std::string to_string(RelationSet s);  // "m1", "m2", "both"
RelationSet parse_relation_set(const std::string& s);

/// One row per tile t and included matrix M: row(t)[s] = delta(t,s) - M(s,t),
/// i.e. I - M^T, stacked M1 over M2 for `both`.
IntMatrix relation_matrix(const BitMatrix& m1, const BitMatrix& m2, RelationSet set);

struct K0Group {
  IntVector invariant_factors;  // only those > 1
  std::size_t free_rank = 0;
  std::string to_string() const;  // e.g. "Z/2 + Z/2 + Z^1"
};

K0Group k0_group(const IntMatrix& relations, const SnfOptions& opts = {});

IntVector all_ones(std::size_t dim);

ElementOrder identity_order(const BitMatrix& m1, const BitMatrix& m2, RelationSet set, const SnfOptions& opts = {});

/// The three shifted-sum identities (each a sum of relation rows), their sum,
/// and (q-1) times the identity, checked as members of the M1 relation lattice.
VerificationReport verify_sum_identities(const TypedPresentation& t1, const BasicSubset& s, const BitMatrix& m1,
                                         const SnfOptions& opts = {});

/// Difference vectors of the three identities, in order a, b, c.
std::vector<IntVector> sum_identity_vectors(const TypedPresentation& t1, const BasicSubset& s);

struct KTheoryResult {
  RelationSet set = RelationSet::m1_only;
  K0Group group;
  ElementOrder identity_order;
  VerificationReport sum_identities{"sum identities"};
};

/// Group, identity order and sum identities, sharing one Smith form when the
/// relation set is M1 only.
KTheoryResult compute_ktheory(const TypedPresentation& t1, const BasicSubset& s, const BitMatrix& m1,
                              const BitMatrix& m2, RelationSet set, const SnfOptions& opts = {});

/// Group and identity order only; `sum_identities` is left empty.
KTheoryResult compute_k0(const BitMatrix& m1, const BitMatrix& m2, RelationSet set, const SnfOptions& opts = {});

}  // namespace a2k
