#pragma once

// Command-line driver. run_cli() is the whole program; tools/ratpencil_cli.cpp
// only forwards argv. Exit codes: 0 success, 1 verification failure,
// 2 usage or parse error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ratpencil/catalog.hpp"
#include "ratpencil/fibres.hpp"
#include "ratpencil/model_file.hpp"
#include "ratpencil/numeric_types.hpp"

namespace ratpencil {

namespace cli_exit {
constexpr int ok = 0;
constexpr int verify_failed = 1;
constexpr int usage = 2;
}  // namespace cli_exit

namespace detail {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A catalog tag, or else a path to a model file.
inline LoadedModel load_source(const std::string& src) {
  if (auto t = parse_tag(src)) {
    CatalogEntry e = get(*t);
    return {e.fibration, e.curves};
  }
  std::ifstream in(src);
  if (!in) throw UsageError("'" + src + "' is neither a catalog tag nor a readable model file");
  try {
    return load_model(parse_model(in));
  } catch (const LatticeError& e) {
    throw UsageError(src + ": " + e.what());
  } catch (const ParseError& e) {
    throw UsageError(src + ": " + e.what());
  }
}

inline ModelFile model_file_for(const std::string& src) {
  if (auto t = parse_tag(src)) return to_model_file(get(*t));
  std::ifstream in(src);
  if (!in) throw UsageError("'" + src + "' is neither a catalog tag nor a readable model file");
  try {
    ModelFile mf = parse_model(in);
    load_model(mf);
    return mf;
  } catch (const LatticeError& e) {
    throw UsageError(src + ": " + e.what());
  } catch (const ParseError& e) {
    throw UsageError(src + ": " + e.what());
  }
}

/// Exact name, else the name with underscores dropped ("F_1" finds "F1").
inline const FibreDecomposition* find_fibre_loose(const FibrationModel& fib, const std::string& name) {
  if (auto* f = fib.find_fibre(name)) return f;
  std::string squeezed;
  for (char c : name)
    if (c != '_') squeezed += c;
  return fib.find_fibre(squeezed);
}

inline std::string join(const std::vector<Int>& v, const char* sep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? sep : "") << v[i];
  return os.str();
}

inline int cmd_canonical(const std::string& tag_s, std::ostream& out) {
  auto tag = parse_tag(tag_s);
  if (!tag || !(*tag == Tag::A || *tag == Tag::B1 || *tag == Tag::B2 || *tag == Tag::C))
    throw UsageError("canonical expects one of A, B1, B2, C; got '" + tag_s + "'");
  const CatalogEntry e = get(*tag);
  const FibrationModel& fib = e.fibration;
  const SurfaceModel& s = fib.surface();
  const KPlusF kf = selfint_k_plus_f(fib);
  const ReductionResult red = reduction(fib, e.curve_classes());
  const SharpResult sharp = greedy_sharp_minimal(red.model);
  NumericType t{sharp.data.a, sharp.data.twice_b_check, sharp.data.mults, red.model.ksq(), {}};
  out << "model " << tag_name(*tag) << " on " << s.describe() << '\n';
  out << "F = " << s.format(fib.fibre_class()) << '\n';
  out << "F^2 = " << self_intersection(s, fib.fibre_class()) << ", K.F = " << canonical_degree(s, fib.fibre_class())
      << ", genus " << fib.genus() << '\n';
  out << "numeric type " << t.tuple_string() << ", d = " << sharp.data.d << '\n';
  if (sharp.data.d == 1) {
    const PlaneCurveModel pm = canonical_p2_model(sharp.data);
    out << "degree " << pm.degree << ", singularities: " << pm.singularities() << ", ρ=" << kf.rho
        << ", (K+F)²=" << kf.ksq << '\n';
  } else {
    out << "no plane model (d = " << sharp.data.d << "), ρ=" << kf.rho << ", (K+F)²=" << kf.ksq << '\n';
  }
  return cli_exit::ok;
}

inline nlohmann::ordered_json report_json(Tag tag, const VerifyReport& r) {
  nlohmann::ordered_json j;
  j["tag"] = tag_name(tag);
  j["ok"] = r.ok;
  if (!r.ok) j["first_failure"] = r.first_failure;
  j["ksq"] = r.ksq;
  j["rho"] = r.rho;
  if (r.mw_rank) j["mordell_weil_rank"] = *r.mw_rank;
  if (r.determinant) j["determinant"] = *r.determinant;
  j["blocks"] = r.block_count;
  nlohmann::ordered_json fibres = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.fibre_components.size(); ++i) {
    nlohmann::ordered_json f;
    f["name"] = r.fibre_components[i].first;
    f["components"] = r.fibre_components[i].second;
    f["ade"] = i < r.ade.size() ? r.ade[i].second : std::vector<std::string>{};
    fibres.push_back(f);
  }
  j["fibres"] = fibres;
  if (r.numeric_type) j["numeric_type"] = r.numeric_type->tuple_string();
  if (r.minus_one_section) j["minus_one_section"] = *r.minus_one_section;
  if (r.plane) {
    j["plane_degree"] = r.plane->degree;
    j["plane_singularities"] = r.plane->singularities();
  }
  j["reduction_steps"] = r.reduction_steps;
  return j;
}

/// Checks the stored expectations of a catalog entry, against the stored
/// model or against a model file given with --model.
inline int cmd_verify(const std::string& tag_s, const std::string& model_path, bool report, std::ostream& out) {
  auto tag = parse_tag(tag_s);
  if (!tag) throw UsageError("unknown example tag '" + tag_s + "'");
  CatalogEntry entry = get(*tag);
  if (!model_path.empty()) {
    std::ifstream in(model_path);
    if (!in) throw UsageError("cannot read model file '" + model_path + "'");
    try {
      LoadedModel lm = load_model(parse_model(in), false);
      entry.fibration = std::move(lm.fibration);
      entry.curves = std::move(lm.curves);
    } catch (const LatticeError& e) {
      throw UsageError(model_path + ": " + e.what());
    } catch (const ParseError& e) {
      throw UsageError(model_path + ": " + e.what());
    }
  }
  const VerifyReport r = verify_entry(entry);
  out << "verify " << tag_name(*tag) << '\n';
  for (const auto& l : r.lines) out << "  " << l << '\n';
  if (report && r.mw_rank)
    out << "summary: Mordell-Weil rank " << *r.mw_rank << ", " << r.block_count << " blocks\n";
  if (report) out << report_json(*tag, r).dump(2) << '\n';
  out << (r.ok ? "PASS" : "FAIL") << '\n';
  return r.ok ? cli_exit::ok : cli_exit::verify_failed;
}

inline int cmd_search(Int g, std::optional<Int> lo_opt, std::optional<Int> hi_opt, bool exclude, std::ostream& out) {
  if (g < 2) throw UsageError("--genus must be at least 2");
  const Int lo = lo_opt.value_or(1);
  const Int hi = hi_opt.value_or(4 * g - 5);
  if (lo < 1) throw UsageError("--ksq-min must be at least 1");
  std::vector<NumericType> rows;
  if (lo <= hi) rows = search_general(g, lo, hi).types;
  out << "genus " << g << ", (K+F)^2 in [" << lo << ", " << hi << "]\n";
  if (exclude) {
    const ExclusionCertificate cert = excluded_type_certificate();
    for (const auto& t : rows)
      if (is_excluded_pattern(t) && cert.excluded())
        out << "excluded " << t.tuple_string() << ": minimum anticanonical degree " << cert.min_degree << " over "
            << cert.cases_checked << " cases, required " << cert.required << '\n';
    rows = apply_exclusion(rows);
  }
  out << std::left << std::setw(4) << "a" << std::setw(7) << "bcheck" << std::setw(4) << "N" << std::setw(24) << "mults"
      << std::setw(9) << "(K+F)^2" << std::setw(8) << "d" << "(-1)-section\n";
  for (const auto& t : rows) {
    std::ostringstream b;
    b << Rational(t.twice_b_check, 2);
    out << std::setw(4) << t.a << std::setw(7) << b.str() << std::setw(4) << t.N() << std::setw(24)
        << join(t.mults, ",") << std::setw(9) << t.ksq << std::setw(8)
        << (t.admissible_d.empty() ? std::string("-") : join(t.admissible_d, ",")) << (t.has_minus_one_section() ? "yes" : "no")
        << '\n';
  }
  out << rows.size() << " rows\n";
  return cli_exit::ok;
}

inline int cmd_dual_graph(const std::string& src, const std::string& fibre, bool dot, std::ostream& out) {
  const LoadedModel m = load_source(src);
  const FibreDecomposition* dec = find_fibre_loose(m.fibration, fibre);
  if (!dec) throw UsageError("no fibre named '" + fibre + "'");
  const DualGraph g = dual_graph(m.fibration, *dec);
  if (dot) {
    out << to_dot(g, dec->name);
    return cli_exit::ok;
  }
  out << "fibre " << dec->name << ": " << g.nodes.size() << " nodes, " << g.edges.size() << " edges\n";
  for (const auto& n : g.nodes)
    out << "  " << n.name << "  mult " << n.multiplicity << "  self " << n.self_int << "  genus " << n.genus << '\n';
  for (const auto& e : g.edges) {
    out << "  " << g.nodes[e.i].name << " -- " << g.nodes[e.j].name;
    if (e.weight != 1) out << "  (" << e.weight << ")";
    out << '\n';
  }
  const auto ade = ade_classify(g);
  out << "ADE:";
  if (ade.empty()) out << " none";
  for (const auto& c : ade) out << ' ' << c.label;
  out << '\n';
  return cli_exit::ok;
}

inline int cmd_show(const std::string& src, std::ostream& out) {
  out << serialize_model(model_file_for(src));
  return cli_exit::ok;
}

/// Reduction trace and #-minimal data for a model with an effective-curve list.
inline int cmd_pipeline(const std::string& src, std::ostream& out) {
  const LoadedModel m = load_source(src);
  std::vector<DivisorClass> curves;
  for (const auto& c : m.curves) curves.push_back(c.cls);
  const ReductionResult red = reduction(m.fibration, curves);
  out << "reduction: " << red.trace.steps.size() << " contractions\n";
  for (const auto& st : red.trace.steps) out << "  contract " << st.contracted << " on " << st.model << '\n';
  out << "  G^2 = " << red.model.pencil_self_intersection() << ", (K+G)^2 = " << red.model.ksq() << '\n';
  const SharpResult sharp = greedy_sharp_minimal(red.model);
  out << "greedy contraction: " << sharp.trace.steps.size() << " steps\n";
  for (const auto& st : sharp.trace.steps)
    out << "  contract " << st.contracted << " on " << st.model << ", G.E = " << st.pencil_intersection << '\n';
  const SharpModelData& d = sharp.data;
  out << "#-minimal: d = " << d.d << ", a = " << d.a << ", b = " << d.b << ", 2b-check = " << d.twice_b_check
      << ", mults " << (d.mults.empty() ? std::string("none") : join(d.mults, ",")) << ", " << to_string(d.type) << '\n';
  if (sharp.violation) {
    out << "normalization: " << *sharp.violation << '\n';
    return cli_exit::verify_failed;
  }
  out << "normalization: ok\n";
  return cli_exit::ok;
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Genus-two pencils on rational surfaces: lattice checks and numeric searches", "ratpencil"};
  app.require_subcommand(1);

  std::string canon_tag;
  auto* canon = app.add_subcommand("canonical", "Plane model report for A, B1, B2 or C");
  canon->add_option("tag", canon_tag)->required();

  std::string verify_tag;
  std::string verify_model;
  bool verify_report = false;
  auto* ver = app.add_subcommand("verify-example", "Check every stored identity of a catalog entry");
  ver->add_option("tag", verify_tag)->required();
  ver->add_flag("--report", verify_report, "Append a JSON summary");
  ver->add_option("--model", verify_model, "Check the expectations against this model file instead");

  Int genus = 0;
  std::optional<Int> ksq_min, ksq_max;
  bool apply_excl = false;
  auto* search = app.add_subcommand("search-types", "Enumerate numeric types of #-minimal models");
  search->add_option("--genus", genus)->required();
  search->add_option("--ksq-min", ksq_min);
  search->add_option("--ksq-max", ksq_max);
  search->add_flag("--apply-exclusion", apply_excl, "Drop the pattern ruled out by the anticanonical-degree check");

  std::string graph_src, graph_fibre;
  bool graph_dot = false;
  auto* graph = app.add_subcommand("dual-graph", "Dual graph of a fibre");
  graph->add_option("source", graph_src, "Catalog tag or model file")->required();
  graph->add_option("--fibre", graph_fibre)->required();
  graph->add_flag("--dot", graph_dot, "Emit Graphviz DOT");

  std::string show_src;
  auto* show = app.add_subcommand("show", "Print a catalog entry or model file in model-file format");
  show->add_option("source", show_src, "Catalog tag or model file")->required();

  std::string pipe_src;
  auto* pipe = app.add_subcommand("pipeline", "Run reduction and greedy contraction");
  pipe->add_option("source", pipe_src, "Catalog tag or model file")->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? cli_exit::ok : cli_exit::usage;
  }

  try {
    if (*canon) return detail::cmd_canonical(canon_tag, out);
    if (*ver) return detail::cmd_verify(verify_tag, verify_model, verify_report, out);
    if (*search) return detail::cmd_search(genus, ksq_min, ksq_max, apply_excl, out);
    if (*graph) return detail::cmd_dual_graph(graph_src, graph_fibre, graph_dot, out);
    if (*show) return detail::cmd_show(show_src, out);
    if (*pipe) return detail::cmd_pipeline(pipe_src, out);
  } catch (const detail::UsageError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return cli_exit::usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return cli_exit::verify_failed;
  }
  return cli_exit::usage;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace ratpencil
