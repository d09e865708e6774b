#pragma once

// Triangle presentations over the Singer-cyclic plane.
//
// T0 is the set of triples (i, i+s, i+(q+1)s) mod n with s in Z. The typed
// presentation T1 lives over three copies a_i, b_i, c_i of the point set: every
// T0 triple (k,l,m) contributes (a_k,b_l,c_m), (b_k,c_l,a_m) and (c_k,a_l,b_m).

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "a2k/projective_plane.hpp"
#include "a2k/verification.hpp"

namespace a2k {

class PresentationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tile {
  std::array<std::uint32_t, 3> v{};
  auto operator<=>(const Tile&) const = default;
};

struct TrianglePresentation {
  std::uint64_t q = 0;
  std::uint32_t n = 0;
  std::vector<Tile> tiles;  // sorted, unique

  bool contains(const Tile& t) const;
};

enum class Alphabet : std::uint8_t { a = 0, b = 1, c = 2 };

struct Letter {
  Alphabet alphabet = Alphabet::a;
  std::uint32_t index = 0;
  auto operator<=>(const Letter&) const = default;
  std::string to_string() const;
};

/// Alphabet sequence of a typed tile; the numeric value is the alphabet of
/// its first position.
enum class Pattern : std::uint8_t { abc = 0, bca = 1, cab = 2 };

std::string to_string(Pattern p);

struct TypedTile {
  Pattern pattern = Pattern::abc;
  std::array<std::uint32_t, 3> idx{};

  Letter letter(int pos) const {
    return {static_cast<Alphabet>((static_cast<int>(pattern) + pos) % 3), idx[static_cast<std::size_t>(pos)]};
  }
  auto operator<=>(const TypedTile&) const = default;
  std::string to_string() const;
};

/// Typed rotation rho: (l0,l1,l2) -> (l1,l2,l0).
TypedTile rotate(const TypedTile& t, int times = 1);

struct TypedPresentation {
  std::uint64_t q = 0;
  std::uint32_t n = 0;
  std::vector<std::uint32_t> trace_zero;  // Z of the underlying plane
  Pairing pairing = Pairing::tr_xinv_y;
  std::vector<TypedTile> tiles;  // sorted: pattern classes are contiguous blocks

  std::size_t size() const { return tiles.size(); }
  std::optional<std::uint32_t> index_of(const TypedTile& t) const;
  std::uint32_t at(const TypedTile& t) const;  // throws if absent
  /// Indices of the tiles whose first letter is `l`.
  std::span<const std::uint32_t> starting_with(const Letter& l) const;
  /// Index range [first, last) of one pattern class.
  std::pair<std::uint32_t, std::uint32_t> pattern_range(Pattern p) const;
  /// Index of rho(tiles[i]).
  std::uint32_t rotation_of(std::uint32_t i) const { return rotation_[i]; }

  void finalize();  // sorts and builds lookup tables

 private:
  std::vector<std::vector<std::uint32_t>> by_first_letter_;
  std::vector<std::uint32_t> rotation_;
};

struct BasicSubset {
  std::uint32_t x_exp = 1;
  std::uint32_t xi_exp = 0;
  std::vector<TypedTile> tiles;  // pattern ABC, ordered by i
};

TrianglePresentation build_T0(const PlaneModel& plane);

/// Conditions (1) rotation closure, (2) extendable pairs coincide with
/// incident pairs (both inclusions), (3) at most one third letter.
VerificationReport verify_polygonal_axioms(const TrianglePresentation& t0, const PlaneModel& plane);

TypedPresentation build_T1(const TrianglePresentation& t0, const PlaneModel& plane);

/// S = { (a_{ix}, b_{ix+s}, c_{ix+(q+1)s}) : i in Z_n }, checked to lie in T1
/// and to use every letter of each alphabet exactly once.
BasicSubset basic_subset(const TypedPresentation& t1, std::uint32_t x_exp, std::uint32_t xi_exp);

/// Defaults: x_exp = 1, s = min(Z).
BasicSubset basic_subset(const TypedPresentation& t1);

/// Membership in T1 plus the balanced certificate, as a report.
VerificationReport verify_basic_subset(const TypedPresentation& t1, const BasicSubset& s);

enum class Corner { ab, bc, ca };

std::string to_string(Corner c);

/// Link graph at one corner type: black = first letters, white = second
/// letters of consecutive pairs of that type, one edge per tile.
BipartiteGraph link_graph(const TypedPresentation& t1, Corner corner);

std::string export_tiles_text(const TrianglePresentation& t0);
std::string export_tiles_text(const TypedPresentation& t1);
std::string export_tiles_text(const BasicSubset& s);

}  // namespace a2k
