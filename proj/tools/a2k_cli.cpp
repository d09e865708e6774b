// a2k: build, verify and compute K0 data for the triangle presentations of a
// Singer-cyclic projective plane of order q.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "a2k/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Options {
  std::uint64_t q = 0;
  unsigned p = 0;
  unsigned k = 0;
  std::string modulus;
  std::string pairing = "tr-xinv-y";
  std::string shift_rule = "auto";
  int h3_bound = 2;
  std::string relations = "m1";
  std::string out;
  std::string format = "json";
  std::string golden;
  bool update = false;
  bool serial = false;

  // export selectors
  bool plane = false;
  bool t0 = false;
  bool t1 = false;
  bool basic = false;
  std::string matrix;
  std::string relation_matrix;
  std::string graph;
};

void add_common(CLI::App* cmd, Options& o) {
  auto* q = cmd->add_option("--q", o.q, "order of the projective plane (a prime power)");
  auto* p = cmd->add_option("--p", o.p, "characteristic");
  auto* k = cmd->add_option("--k", o.k, "q = p^k");
  q->excludes(p)->excludes(k);
  cmd->add_option("--modulus", o.modulus, "modulus of F_{q^3}, coefficients c0,...,c3k");
  cmd->add_option("--pairing", o.pairing, "point/line pairing")
      ->check(CLI::IsMember({"tr-xy", "tr-xinv-y"}));
  cmd->add_option("--shift-rule", o.shift_rule, "auto or an explicit shift rule")
      ->check(CLI::IsMember({"auto", "literal", "both-exclusions", "psi-only", "beta-only"}));
  cmd->add_option("--h3-bound", o.h3_bound, "largest |p|_inf for the aperiodicity search");
  cmd->add_option("--relations", o.relations, "relation set")->check(CLI::IsMember({"m1", "m2", "both"}));
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_flag("--serial", o.serial, "use the serial kernels");
}

a2k::RunConfig to_config(const Options& o) {
  a2k::RunConfig cfg;
  if (o.q) cfg.q = o.q;
  if (o.p) cfg.p = o.p;
  if (o.k) cfg.k = o.k;
  if (!o.modulus.empty()) cfg.modulus = o.modulus;
  cfg.pairing = a2k::parse_pairing(o.pairing);
  cfg.shift_rule = o.shift_rule;
  cfg.h3_bound = o.h3_bound;
  cfg.relations = a2k::parse_relation_set(o.relations);
  cfg.exec = o.serial ? a2k::Exec::serial : a2k::Exec::parallel;
  return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

std::string render(const ordered_json& j, const std::string& format) {
  return format == "text" ? a2k::to_text(j) : j.dump(2) + "\n";
}

// Prints to stdout, and also writes `name` under --out when given.
void emit(const Options& o, const std::string& name, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(o.out);
  write_file(fs::path(o.out) / name, text);
  std::cout << (fs::path(o.out) / name).string() << '\n';
}

int cmd_build(const Options& o) {
  const auto pl = a2k::build_pipeline(to_config(o));
  const auto summary = a2k::build_summary(pl);
  if (!o.out.empty()) {
    emit(o, "plane.txt", a2k::export_plane_text(pl.plane));
    emit(o, "t0.txt", a2k::export_tiles_text(pl.t0));
    emit(o, "t1.txt", a2k::export_tiles_text(pl.t1));
    emit(o, "basic.txt", a2k::export_tiles_text(pl.s));
    emit(o, "m1.triplet", pl.tm.m1.to_triplet());
    emit(o, "m2.triplet", pl.tm.m2.to_triplet());
  }
  emit(o, o.format == "text" ? "build.txt" : "build.json", render(summary, o.format));
  return 0;
}

int cmd_report(const Options& o, const std::string& name, a2k::Outcome (*run)(const a2k::Pipeline&)) {
  const auto pl = a2k::build_pipeline(to_config(o));
  const auto out = run(pl);
  emit(o, name + (o.format == "text" ? ".txt" : ".json"), render(out.report, o.format));
  return out.passed ? 0 : 1;
}

int cmd_export(const Options& o) {
  const auto pl = a2k::build_pipeline(to_config(o));
  int selected = 0;
  auto pick = [&](bool on, const std::string& name, auto&& make) {
    if (!on) return;
    ++selected;
    emit(o, name, make());
  };
  pick(o.plane, "plane.txt", [&] { return a2k::export_plane_text(pl.plane); });
  pick(o.t0, "t0.txt", [&] { return a2k::export_tiles_text(pl.t0); });
  pick(o.t1, "t1.txt", [&] { return a2k::export_tiles_text(pl.t1); });
  pick(o.basic, "basic.txt", [&] { return a2k::export_tiles_text(pl.s); });
  pick(!o.matrix.empty(), o.matrix + ".triplet",
       [&] { return (o.matrix == "m1" ? pl.tm.m1 : pl.tm.m2).to_triplet(); });
  pick(!o.relation_matrix.empty(), "relations_" + o.relation_matrix + ".triplet", [&] {
    return a2k::relation_matrix(pl.tm.m1, pl.tm.m2, a2k::parse_relation_set(o.relation_matrix)).to_triplet();
  });
  pick(!o.graph.empty(), o.graph + ".dot", [&]() -> std::string {
    if (o.graph == "incidence") return a2k::incidence_graph(pl.plane).to_dot("incidence");
    if (o.graph == "union") return a2k::union_digraph_dot(pl.t1, pl.tm.m1, pl.tm.m2);
    const auto corner = o.graph == "link-ab" ? a2k::Corner::ab : o.graph == "link-bc" ? a2k::Corner::bc : a2k::Corner::ca;
    return a2k::link_graph(pl.t1, corner).to_dot(o.graph);
  });
  if (selected == 0) throw a2k::ConfigError("export needs a selector (--plane, --t0, --t1, --basic, --matrix, --relation-matrix, --graph)");
  return 0;
}

int cmd_regress(const Options& o) {
  if (o.golden.empty()) throw a2k::ConfigError("regress needs --golden FILE");
  const auto pl = a2k::build_pipeline(to_config(o));
  const auto fresh = a2k::full_report(pl).report;
  if (o.update) {
    write_file(o.golden, fresh.dump(2) + "\n");
    std::cout << "wrote " << o.golden << '\n';
    return 0;
  }
  std::ifstream f(o.golden);
  if (!f) throw a2k::ConfigError("cannot read golden file " + o.golden);
  ordered_json golden;
  try {
    golden = ordered_json::parse(f);
  } catch (const std::exception& e) {
    throw a2k::ConfigError("malformed golden file " + o.golden + ": " + e.what());
  }
  const auto diffs = a2k::json_diff(golden, fresh);
  if (diffs.empty()) {
    std::cout << "match " << o.golden << '\n';
    return 0;
  }
  std::cout << "mismatch " << o.golden << " (" << diffs.size() << " paths)\n";
  for (const auto& d : diffs) std::cout << "  " << d << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triangle presentations, 2D subshifts and K0 of the identity class"};
  app.require_subcommand(1);
  Options o;

  auto* build = app.add_subcommand("build", "construct plane, T0, T1, basic subset and shift matrices");
  auto* verify = app.add_subcommand("verify", "run the axiom, H, Lemma 1 and Lemma 2 suites");
  auto* ktheory = app.add_subcommand("ktheory", "invariant factors and order of the identity class");
  auto* report = app.add_subcommand("report", "verification and K0 data for every relation set");
  auto* exp = app.add_subcommand("export", "write tiles, matrices or graphs");
  auto* regress = app.add_subcommand("regress", "compare a fresh report with a golden file");

  for (auto* cmd : {build, verify, ktheory, report, regress}) {
    add_common(cmd, o);
    cmd->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "text"}));
  }
  add_common(exp, o);
  std::string export_format = "triplet";
  exp->add_option("--format", export_format, "matrix format")->check(CLI::IsMember({"triplet"}));
  exp->add_flag("--plane", o.plane, "lines of the plane and Z");
  exp->add_flag("--t0", o.t0, "tiles of T0");
  exp->add_flag("--t1", o.t1, "typed tiles of T1");
  exp->add_flag("--basic", o.basic, "the basic subset");
  exp->add_option("--matrix", o.matrix, "transition matrix")->check(CLI::IsMember({"m1", "m2"}));
  exp->add_option("--relation-matrix", o.relation_matrix, "integer relation matrix")
      ->check(CLI::IsMember({"m1", "m2", "both"}));
  exp->add_option("--graph", o.graph, "DOT graph")
      ->check(CLI::IsMember({"incidence", "link-ab", "link-bc", "link-ca", "union"}));
  regress->add_option("--golden", o.golden, "golden report")->required();
  regress->add_flag("--update", o.update, "overwrite the golden file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*build) return cmd_build(o);
    if (*verify) return cmd_report(o, "verify", a2k::verify_run);
    if (*ktheory) return cmd_report(o, "ktheory", a2k::ktheory_run);
    if (*report) return cmd_report(o, "report", a2k::full_report);
    if (*exp) return cmd_export(o);
    if (*regress) return cmd_regress(o);
  } catch (const a2k::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
