#pragma once

// PG(2,q) in Singer coordinates. Points of F*_{q^3}/F*_q are labelled by the
// exponent e in Z_n (n = q^2+q+1) of a primitive element g; lines are the
// translates of the trace-zero set Z = { e : Tr(g^e) = 0 }.

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "a2k/galois_field.hpp"
#include "a2k/verification.hpp"

namespace a2k {

class PlaneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PointId {
  std::uint32_t value = 0;
  auto operator<=>(const PointId&) const = default;
};

/// Lines are named by the point that lambda0 sends to them.
struct LineId {
  std::uint32_t value = 0;
  auto operator<=>(const LineId&) const = default;
};

/// Bilinear pairing used to turn the trace form into a point-line map.
///   tr_xy      : y on lambda0(x)  <=>  Tr(x y) = 0
///   tr_xinv_y  : y on lambda0(x)  <=>  Tr(x^{-1} y) = 0
enum class Pairing { tr_xy, tr_xinv_y };

std::string to_string(Pairing p);
Pairing parse_pairing(const std::string& s);

struct PlaneModel {
  std::uint64_t q = 0;
  std::uint32_t n = 0;
  std::vector<std::uint32_t> trace_zero;  // Z, sorted
  Pairing pairing = Pairing::tr_xinv_y;
  FieldPtr field;  // F_{q^3}; null for hand-built models

  bool in_trace_zero(std::uint32_t e) const { return zmask_[e % n]; }
  void set_trace_zero(std::vector<std::uint32_t> z);

 private:
  std::vector<bool> zmask_;
};

struct Line {
  LineId id;
  std::vector<PointId> points;  // sorted
};

/// Computes Z by direct trace evaluation and checks |Z| = q+1, Frobenius
/// closure and the planar difference property. `cubic` must be F_{p^{3k}}
/// with a primitive modulus.
PlaneModel build_plane(const FieldPtr& cubic, Pairing pairing = Pairing::tr_xinv_y);

/// Model from an explicit exponent set, no checks. Used to study broken inputs.
PlaneModel plane_from_difference_set(std::uint64_t q, std::vector<std::uint32_t> z,
                                     Pairing pairing = Pairing::tr_xinv_y);

Line lambda0(const PlaneModel& plane, PointId x);
bool incident(const PlaneModel& plane, PointId y, LineId line);

/// Point and line counts, line sizes, point degrees, and the two "exactly one"
/// axioms checked over all pairs.
VerificationReport verify_plane_axioms(const PlaneModel& plane);

/// Simple bipartite graph; black vertices are 0..black-1, white ones follow.
struct BipartiteGraph {
  std::size_t black = 0;
  std::size_t white = 0;
  std::vector<std::vector<std::uint32_t>> adjacency;  // sorted, no repeats
  std::vector<std::string> labels;
  std::size_t collapsed_edges = 0;  // repeated edges dropped on insertion

  std::size_t vertex_count() const { return black + white; }
  std::size_t edge_count() const;
  std::string to_dot(const std::string& name) const;

  /// Builds from a black-white edge list; duplicates collapse and are counted.
  static BipartiteGraph from_edges(std::size_t black, std::size_t white,
                                   const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                                   std::vector<std::string> labels = {});
};

/// Points black, lines white, one edge per incidence.
BipartiteGraph incidence_graph(const PlaneModel& plane);

/// Connected, bipartite, (q+1)-regular, diameter m, girth 2m.
VerificationReport verify_generalized_mgon(const BipartiteGraph& g, unsigned m, std::uint64_t q);

std::string export_plane_text(const PlaneModel& plane);

}  // namespace a2k
