#include "a2k/pipeline.hpp"

#include <sstream>

namespace a2k {

using nlohmann::ordered_json;

RunConfig resolve(RunConfig cfg) {
  if (cfg.q) {
    if (*cfg.q < 2) throw ConfigError(std::to_string(*cfg.q) + " is not a prime power");
    const auto pk = prime_power(*cfg.q);
    if (!pk) throw ConfigError(std::to_string(*cfg.q) + " is not a prime power");
    if ((cfg.p && *cfg.p != pk->first) || (cfg.k && *cfg.k != pk->second))
      throw ConfigError("--q " + std::to_string(*cfg.q) + " conflicts with --p/--k");
    cfg.p = pk->first;
    cfg.k = pk->second;
  } else {
    if (!cfg.p || !cfg.k) throw ConfigError("either --q or both --p and --k are required");
    if (!is_prime(*cfg.p)) throw ConfigError(std::to_string(*cfg.p) + " is not prime");
    if (*cfg.k == 0) throw ConfigError("--k must be positive");
    std::uint64_t q = 1;
    for (unsigned i = 0; i < *cfg.k; ++i) {
      q *= *cfg.p;
      if (q > (1u << 12)) throw ConfigError("q = p^k is too large");
    }
    cfg.q = q;
  }
  if (cfg.h3_bound < 0) throw ConfigError("--h3-bound must be non-negative");
  if (cfg.shift_rule != "auto") {
    try {
      ShiftRule::parse(cfg.shift_rule);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  return cfg;
}

Pipeline build_pipeline(const RunConfig& raw) {
  Pipeline pl;
  pl.config = resolve(raw);
  std::optional<std::vector<unsigned>> modulus;
  if (pl.config.modulus) {
    try {
      modulus = parse_modulus(*pl.config.modulus);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  try {
    pl.field = make_field(*pl.config.p, 3 * *pl.config.k, modulus);
  } catch (const FieldError& e) {
    throw ConfigError(e.what());
  }
  pl.plane = build_plane(pl.field, pl.config.pairing);
  pl.t0 = build_T0(pl.plane);
  pl.t1 = build_T1(pl.t0, pl.plane);
  pl.s = basic_subset(pl.t1);

  ShiftRule rule;
  if (pl.config.shift_rule == "auto") {
    pl.calibration = calibrate_shift_rule(pl.t1, pl.s);
    if (!pl.calibration->rule) {
      std::string msg = "no shift rule passes calibration\n";
      for (const auto& c : pl.calibration->candidates) msg += c.gates.to_text();
      throw std::runtime_error(msg);
    }
    rule = *pl.calibration->rule;
  } else {
    rule = ShiftRule::parse(pl.config.shift_rule);
  }
  pl.tm = build_transition_matrices(pl.t1, rule, pl.config.exec);
  return pl;
}

ordered_json config_json(const Pipeline& pl) {
  const auto& c = pl.config;
  ordered_json j;
  j["q"] = *c.q;
  j["p"] = *c.p;
  j["k"] = *c.k;
  j["modulus"] = pl.field->modulus_string();
  j["modulus_polynomial"] = pl.field->polynomial_string();
  j["pairing"] = to_string(c.pairing);
  j["shift_rule_requested"] = c.shift_rule;
  j["shift_rule"] = pl.tm.rule.to_string();
  j["h3_bound"] = c.h3_bound;
  j["relation_set"] = to_string(c.relations);
  return j;
}

ordered_json checks_json(const Pipeline& pl, const VerificationReport& h, const VerificationReport& h3,
                         const VerificationReport& lemma2, const VerificationReport& sums) {
  ordered_json j;
  j["h0"] = h.passed("h0");
  j["h1a"] = h.passed("h1a");
  j["h1b"] = h.passed("h1b");
  j["h2"] = h.passed("h2");
  j["h3_bound"] = {{"bound", pl.config.h3_bound}, {"passed", h3.passed()}};
  j["lemma2"] = lemma2.passed();
  j["sum_identities"] = sums.passed();
  return j;
}

namespace {

struct Sections {
  ordered_json json;
  bool passed = true;
  ordered_json checks;
};

void put(Sections& out, const std::string& key, const VerificationReport& rep) {
  out.json[key] = rep.to_json();
  out.passed = out.passed && rep.passed();
}

Sections verify_sections(const Pipeline& pl, const VerificationReport& sums) {
  Sections out;
  out.json = ordered_json::object();
  const auto q = pl.q();

  ordered_json field;
  field["order"] = pl.field->order;
  field["degree"] = pl.field->k;
  field["modulus"] = pl.field->modulus_string();
  field["primitive"] = pl.field->primitive;
  out.json["field"] = field;

  ordered_json plane;
  plane["n"] = pl.plane.n;
  plane["trace_zero"] = pl.plane.trace_zero;
  out.json["difference_set"] = plane;

  put(out, "plane", verify_plane_axioms(pl.plane));
  put(out, "incidence_graph", verify_generalized_mgon(incidence_graph(pl.plane), 3, q));
  put(out, "polygonal", verify_polygonal_axioms(pl.t0, pl.plane));
  for (Corner c : {Corner::ab, Corner::bc, Corner::ca})
    put(out, "link_" + to_string(c), verify_generalized_mgon(link_graph(pl.t1, c), 3, q));

  out.json["t1_size"] = pl.t1.size();
  out.json["basic_subset"] = {{"x_exp", pl.s.x_exp}, {"xi_exp", pl.s.xi_exp}};
  put(out, "lemma1", verify_basic_subset(pl.t1, pl.s));

  if (pl.calibration) {
    ordered_json cal = ordered_json::array();
    for (const auto& c : pl.calibration->candidates)
      cal.push_back({{"rule", c.rule.to_string()}, {"accepted", c.accepted}, {"gates", c.gates.to_json()}});
    out.json["calibration"] = cal;
  }

  VerificationReport reg("regularity");
  reg.merge(check_regularity(pl.tm.m1, q * q, "m1"));
  reg.merge(check_regularity(pl.tm.m2, q * q, "m2"));
  put(out, "regularity", reg);
  put(out, "pattern_cycle", check_pattern_cycle(pl.t1, pl.tm.m1, pl.tm.m2));

  const auto h = verify_H(pl.tm.m1, pl.tm.m2);
  const auto h3 = verify_H3_bounded(pl.tm.m1, pl.tm.m2, pl.config.h3_bound);
  const auto l2 = verify_lemma2(pl.t1, pl.s, pl.tm.m1);
  put(out, "h", h);
  put(out, "h3", h3);
  put(out, "lemma2", l2);
  put(out, "sum_identities", sums);
  out.checks = checks_json(pl, h, h3, l2, sums);
  return out;
}

bool theorem_holds(const ElementOrder& ord, std::uint64_t q) {
  const Integer qm1(static_cast<unsigned long>(q - 1));
  if (!ord.divides(qm1)) return false;
  return q % 3 == 1 || ord.value == qm1;
}

ordered_json k0_json(const KTheoryResult& r, std::uint64_t q) {
  ordered_json j;
  j["relation_set"] = to_string(r.set);
  ordered_json factors = ordered_json::array();
  for (const auto& d : r.group.invariant_factors) factors.push_back(d.get_str());
  j["invariant_factors"] = factors;
  j["free_rank"] = r.group.free_rank;
  j["group"] = r.group.to_string();
  if (r.identity_order.infinite)
    j["identity_order"] = "infinite";
  else
    j["identity_order"] = r.identity_order.value.get_ui();
  j["divides_q_minus_1"] = r.identity_order.divides(Integer(static_cast<unsigned long>(q - 1)));
  return j;
}

SnfOptions snf_options(const Pipeline& pl) {
  SnfOptions o;
  o.exec = pl.config.exec;
  return o;
}

}  // namespace

Outcome verify_run(const Pipeline& pl) {
  const auto sums = verify_sum_identities(pl.t1, pl.s, pl.tm.m1, snf_options(pl));
  auto sec = verify_sections(pl, sums);
  Outcome out;
  out.report["config"] = config_json(pl);
  out.report["sections"] = sec.json;
  out.report["checks"] = sec.checks;
  out.report["passed"] = sec.passed;
  out.passed = sec.passed;
  return out;
}

Outcome ktheory_run(const Pipeline& pl) {
  const auto q = pl.q();
  const auto kt = compute_ktheory(pl.t1, pl.s, pl.tm.m1, pl.tm.m2, pl.config.relations, snf_options(pl));
  const auto h = verify_H(pl.tm.m1, pl.tm.m2);
  const auto h3 = verify_H3_bounded(pl.tm.m1, pl.tm.m2, pl.config.h3_bound);
  const auto l2 = verify_lemma2(pl.t1, pl.s, pl.tm.m1);

  Outcome out;
  auto& j = out.report;
  j["q"] = q;
  j["modulus"] = pl.field->modulus_string();
  j["pairing"] = to_string(pl.config.pairing);
  j["shift_rule"] = pl.tm.rule.to_string();
  j["dim"] = pl.t1.size();
  j["identity_vector"] = "all-ones over T1";
  const auto k0 = k0_json(kt, q);
  for (const auto& [key, value] : k0.items()) j[key] = value;
  j["checks"] = checks_json(pl, h, h3, l2, kt.sum_identities);
  j["sum_identities"] = kt.sum_identities.to_json();
  out.passed = theorem_holds(kt.identity_order, q);
  j["passed"] = out.passed;
  return out;
}

Outcome full_report(const Pipeline& pl) {
  const auto q = pl.q();
  const auto opts = snf_options(pl);
  const auto m1 = compute_ktheory(pl.t1, pl.s, pl.tm.m1, pl.tm.m2, RelationSet::m1_only, opts);
  auto sec = verify_sections(pl, m1.sum_identities);

  Outcome out;
  auto& j = out.report;
  j["config"] = config_json(pl);
  j["sections"] = sec.json;
  j["checks"] = sec.checks;
  ordered_json kt;
  kt["m1"] = k0_json(m1, q);
  for (RelationSet set : {RelationSet::m2_only, RelationSet::both})
    kt[to_string(set)] = k0_json(compute_k0(pl.tm.m1, pl.tm.m2, set, opts), q);
  j["ktheory"] = kt;
  const bool theorem = theorem_holds(m1.identity_order, q);
  j["theorem"] = theorem;
  out.passed = sec.passed && theorem;
  j["passed"] = out.passed;
  return out;
}

ordered_json build_summary(const Pipeline& pl) {
  ordered_json j;
  j["config"] = config_json(pl);
  j["n"] = pl.plane.n;
  j["trace_zero"] = pl.plane.trace_zero;
  j["t0_size"] = pl.t0.tiles.size();
  j["t1_size"] = pl.t1.size();
  j["basic_subset"] = {{"x_exp", pl.s.x_exp}, {"xi_exp", pl.s.xi_exp}, {"size", pl.s.tiles.size()}};
  j["m1_nnz"] = pl.tm.m1.nnz();
  j["m2_nnz"] = pl.tm.m2.nnz();
  return j;
}

namespace {

void flatten(const ordered_json& j, const std::string& path, std::ostringstream& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) flatten(value, path.empty() ? key : path + "." + key, out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
  } else {
    out << path << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

}  // namespace

std::string to_text(const ordered_json& j) {
  std::ostringstream out;
  flatten(j, "", out);
  return out.str();
}

std::vector<std::string> json_diff(const ordered_json& a, const ordered_json& b, const std::string& path) {
  std::vector<std::string> diffs;
  const std::string here = path.empty() ? "/" : path;
  // parsed files store nonnegative integers as unsigned, so numbers compare by value
  if (a.is_number() && b.is_number()) {
    if (a != b) diffs.push_back(here);
    return diffs;
  }
  if (a.type() != b.type()) {
    diffs.push_back(here);
    return diffs;
  }
  if (a.is_object()) {
    for (const auto& [key, value] : a.items()) {
      if (!b.contains(key)) {
        diffs.push_back(path + "/" + key + " (missing)");
        continue;
      }
      auto sub = json_diff(value, b.at(key), path + "/" + key);
      diffs.insert(diffs.end(), sub.begin(), sub.end());
    }
    for (const auto& [key, value] : b.items())
      if (!a.contains(key)) diffs.push_back(path + "/" + key + " (unexpected)");
  } else if (a.is_array()) {
    if (a.size() != b.size()) {
      diffs.push_back(here + " (length " + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
      return diffs;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto sub = json_diff(a[i], b[i], path + "/" + std::to_string(i));
      diffs.insert(diffs.end(), sub.begin(), sub.end());
    }
  } else if (a != b) {
    diffs.push_back(here);
  }
  return diffs;
}

}  // namespace a2k
