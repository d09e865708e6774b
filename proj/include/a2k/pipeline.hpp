#pragma once

// End-to-end runs: field -> plane -> T0 -> T1 -> S -> shift rule -> M1, M2,
// and the JSON reports built from them.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "a2k/galois_field.hpp"
#include "a2k/ktheory.hpp"
#include "a2k/presentation.hpp"
#include "a2k/projective_plane.hpp"
#include "a2k/subshift.hpp"

namespace a2k {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::optional<std::uint64_t> q;
  std::optional<unsigned> p;
  std::optional<unsigned> k;
  std::optional<std::string> modulus;  // "c0,...,c3k" for F_{q^3}
  Pairing pairing = Pairing::tr_xinv_y;
  std::string shift_rule = "auto";
  int h3_bound = 2;
  RelationSet relations = RelationSet::m1_only;
  Exec exec = Exec::parallel;
};

/// Fills q, p and k from whichever was given. Throws ConfigError for a q that
/// is not a prime power, missing values or a q that disagrees with p^k.
RunConfig resolve(RunConfig cfg);

struct Pipeline {
  RunConfig config;  // resolved
  FieldPtr field;    // F_{q^3}
  PlaneModel plane;
  TrianglePresentation t0;
  TypedPresentation t1;
  BasicSubset s;
  std::optional<Calibration> calibration;  // present when shift_rule is auto
  TransitionMatrices tm;

  std::uint64_t q() const { return *config.q; }
};

Pipeline build_pipeline(const RunConfig& cfg);

nlohmann::ordered_json config_json(const Pipeline& pl);

/// The shared `checks` block: h0, h1a, h1b, h2, h3_bound, lemma2, sum_identities.
nlohmann::ordered_json checks_json(const Pipeline& pl, const VerificationReport& h, const VerificationReport& h3,
                                   const VerificationReport& lemma2, const VerificationReport& sums);

struct Outcome {
  nlohmann::ordered_json report;
  bool passed = false;
};

/// Geometry, presentation, Lemma 1, calibration, regularity, H-suite, Lemma 2
/// and sum identities.
Outcome verify_run(const Pipeline& pl);

/// K0 report for the configured relation set. Passes when the identity order
/// divides q-1, and equals it when q is not 1 mod 3.
Outcome ktheory_run(const Pipeline& pl);

/// Verification plus K0 data for all three relation sets.
Outcome full_report(const Pipeline& pl);

/// Summary of a build: sizes and the chosen rule.
nlohmann::ordered_json build_summary(const Pipeline& pl);

/// Flattened `path: value` lines.
std::string to_text(const nlohmann::ordered_json& j);

/// Paths at which two reports differ, empty when equal.
std::vector<std::string> json_diff(const nlohmann::ordered_json& a, const nlohmann::ordered_json& b,
                                   const std::string& path = "");

}  // namespace a2k
