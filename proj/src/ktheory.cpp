#include "a2k/ktheory.hpp"

#include <stdexcept>

namespace a2k {

std::string to_string(RelationSet s) {
  switch (s) {
    case RelationSet::m1_only: return "m1";
    case RelationSet::m2_only: return "m2";
    case RelationSet::both: return "both";
  }
  return "?";
}

RelationSet parse_relation_set(const std::string& s) {
  if (s == "m1") return RelationSet::m1_only;
  if (s == "m2") return RelationSet::m2_only;
  if (s == "both") return RelationSet::both;
  throw std::invalid_argument("unknown relation set '" + s + "'");
}

IntMatrix relation_matrix(const BitMatrix& m1, const BitMatrix& m2, RelationSet set) {
  std::vector<const BitMatrix*> mats;
  if (set != RelationSet::m2_only) mats.push_back(&m1);
  if (set != RelationSet::m1_only) mats.push_back(&m2);
  const std::size_t dim = m1.dim();
  IntMatrix r(mats.size() * dim, dim);
  for (std::size_t k = 0; k < mats.size(); ++k) {
    for (std::uint32_t t = 0; t < dim; ++t) {
      const std::size_t row = k * dim + t;
      r(row, t) += 1;
      for (auto s : mats[k]->col(t)) r(row, s) -= 1;
    }
  }
  return r;
}

std::string K0Group::to_string() const {
  std::string out;
  for (const auto& d : invariant_factors) out += (out.empty() ? "" : " + ") + ("Z/" + d.get_str());
  if (free_rank > 0) out += (out.empty() ? "" : " + ") + ("Z^" + std::to_string(free_rank));
  return out.empty() ? "0" : out;
}

namespace {

K0Group group_from(const QuotientData& qd, std::size_t generators) {
  K0Group g;
  for (const auto& d : qd.invariant_factors)
    if (d > 1) g.invariant_factors.push_back(d);
  g.free_rank = generators - qd.rank;
  return g;
}

void add_identity_checks(VerificationReport& rep, const std::vector<ElementOrder>& orders) {
  // orders: identities a, b, c, their sum, (q-1) * 1
  static constexpr const char* names[] = {"identity_a", "identity_b", "identity_c", "identity_sum",
                                          "q_minus_1_times_identity"};
  for (std::size_t i = 0; i < 5; ++i) {
    const bool member = !orders[i].infinite && orders[i].value == 1;
    rep.add(names[i], member, member ? "in lattice" : "order " + orders[i].to_string());
  }
}

std::vector<IntVector> identity_check_vectors(const TypedPresentation& t1, const BasicSubset& s) {
  auto vs = sum_identity_vectors(t1, s);
  IntVector sum(t1.size());
  for (const auto& v : vs)
    for (std::size_t i = 0; i < v.size(); ++i) sum[i] += v[i];
  vs.push_back(std::move(sum));
  IntVector scaled(t1.size(), Integer(static_cast<unsigned long>(t1.q - 1)));
  vs.push_back(std::move(scaled));
  return vs;
}

}  // namespace

K0Group k0_group(const IntMatrix& relations, const SnfOptions& opts) {
  return group_from(quotient_data(relations, {}, opts), relations.cols());
}

IntVector all_ones(std::size_t dim) { return IntVector(dim, Integer(1)); }

ElementOrder identity_order(const BitMatrix& m1, const BitMatrix& m2, RelationSet set, const SnfOptions& opts) {
  return element_order(relation_matrix(m1, m2, set), all_ones(m1.dim()), opts);
}

std::vector<IntVector> sum_identity_vectors(const TypedPresentation& t1, const BasicSubset& s) {
  const Integer qm1(static_cast<unsigned long>(t1.q - 1));
  std::vector<IntVector> out;
  for (int r = 0; r < 3; ++r) {
    IntVector v(t1.size());
    for (auto i : rotated_subset(t1, s, r)) v[i] += 1;
    const auto [lo, hi] = t1.pattern_range(static_cast<Pattern>((r + 1) % 3));
    for (auto i = lo; i < hi; ++i) v[i] -= qm1;
    for (auto i : rotated_subset(t1, s, r + 1)) v[i] -= 1;
    out.push_back(std::move(v));
  }
  return out;
}

VerificationReport verify_sum_identities(const TypedPresentation& t1, const BasicSubset& s, const BitMatrix& m1,
                                         const SnfOptions& opts) {
  VerificationReport rep("sum identities");
  const auto r = relation_matrix(m1, m1, RelationSet::m1_only);
  add_identity_checks(rep, element_orders(r, identity_check_vectors(t1, s), opts));
  return rep;
}

KTheoryResult compute_ktheory(const TypedPresentation& t1, const BasicSubset& s, const BitMatrix& m1,
                              const BitMatrix& m2, RelationSet set, const SnfOptions& opts) {
  KTheoryResult res;
  res.set = set;
  const auto r = relation_matrix(m1, m2, set);
  std::vector<IntVector> tracked{all_ones(t1.size())};
  if (set == RelationSet::m1_only)
    for (auto& v : identity_check_vectors(t1, s)) tracked.push_back(std::move(v));

  const auto qd = quotient_data(r, tracked, opts);
  res.group = group_from(qd, r.cols());
  res.identity_order = qd.orders[0];
  if (set == RelationSet::m1_only)
    add_identity_checks(res.sum_identities, {qd.orders.begin() + 1, qd.orders.end()});
  else
    res.sum_identities = verify_sum_identities(t1, s, m1, opts);
  return res;
}

KTheoryResult compute_k0(const BitMatrix& m1, const BitMatrix& m2, RelationSet set, const SnfOptions& opts) {
  KTheoryResult res;
  res.set = set;
  const auto r = relation_matrix(m1, m2, set);
  const auto qd = quotient_data(r, {all_ones(m1.dim())}, opts);
  res.group = group_from(qd, r.cols());
  res.identity_order = qd.orders[0];
  return res;
}

}  // namespace a2k
