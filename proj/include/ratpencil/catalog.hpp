#pragma once

// The four canonical plane models of genus-two pencils with (K+F)^2 > 0 and
// four fibrations with trivial Mordell-Weil group, with the expected values
// that verify() compares against.

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ratpencil/curve_classes.hpp"
#include "ratpencil/fibres.hpp"
#include "ratpencil/lattice.hpp"
#include "ratpencil/minimal_models.hpp"
#include "ratpencil/numeric_types.hpp"

namespace ratpencil {

enum class Tag { A, B1, B2, C, Ex4_3, Ex4_4, Ex4_5, Ex4_6 };

inline const std::vector<Tag>& all_tags() {
  static const std::vector<Tag> tags = {Tag::A,     Tag::B1,    Tag::B2,    Tag::C,
                                        Tag::Ex4_3, Tag::Ex4_4, Tag::Ex4_5, Tag::Ex4_6};
  return tags;
}

inline std::string tag_name(Tag t) {
  switch (t) {
    case Tag::A: return "A";
    case Tag::B1: return "B1";
    case Tag::B2: return "B2";
    case Tag::C: return "C";
    case Tag::Ex4_3: return "4.3";
    case Tag::Ex4_4: return "4.4";
    case Tag::Ex4_5: return "4.5";
    case Tag::Ex4_6: return "4.6";
  }
  return "?";
}

/// Accepts "A", "B1", "B2", "C", "4.3".."4.6" and "Ex4_3".."Ex4_6".
inline std::optional<Tag> parse_tag(const std::string& s) {
  for (Tag t : all_tags()) {
    if (s == tag_name(t)) return t;
    std::string ex = tag_name(t);
    if (ex.size() == 3 && ex[1] == '.') {
      ex[1] = '_';
      if (s == "Ex" + ex || s == "ex" + ex) return t;
    }
  }
  return std::nullopt;
}

/// A printed intersection number between two named classes ("F" allowed).
struct ExpectedIntersection {
  std::string lhs;
  std::string rhs;
  Int value;
};

/// A printed self-intersection / genus label for a named class.
struct ExpectedLabel {
  std::string name;
  Int self_int;
  Int genus;
};

struct ExpectedReport {
  Int ksq = 0;
  Int rho = 0;
  NumericType type;                                   // a, 2b-check, mults, ksq
  std::string type_label;                              // name of the matching numeric type
  std::optional<bool> minus_one_section;
  std::optional<PlaneCurveModel> plane;                // canonical models only
  std::vector<std::pair<std::string, std::size_t>> fibre_components;
  std::vector<std::vector<std::string>> blocks;        // orthogonal decomposition
  std::vector<ExpectedIntersection> intersections;
  std::vector<ExpectedLabel> labels;
  Int mw_rank = 0;
};

struct CatalogEntry {
  Tag tag;
  std::string title;
  FibrationModel fibration;
  std::vector<NamedClass> curves;  // irreducible curves known on the surface
  ExpectedReport expected;
  std::vector<std::string> notes;

  std::vector<DivisorClass> curve_classes() const {
    std::vector<DivisorClass> out;
    for (const auto& c : curves) out.push_back(c.cls);
    return out;
  }
  /// Class by name: "F", "K", a section, a named class or a curve.
  std::optional<DivisorClass> lookup(const std::string& name) const {
    if (name == "F") return fibration.fibre_class();
    if (name == "K") return fibration.surface().canonical();
    if (auto c = fibration.find_named(name)) return c;
    for (const auto& c : curves)
      if (c.name == name) return c.cls;
    return std::nullopt;
  }
};

namespace detail {

/// Plane class  deg * l + sum coef_i e_i  (coefficients as stored, i.e. signed).
inline DivisorClass pc(const SurfaceModel& m, Int deg, const std::map<std::size_t, Int>& e) {
  std::vector<Int> v(m.rank(), 0);
  v[0] = deg;
  for (const auto& [i, c] : e) v.at(i) += c;
  return m.make(std::move(v));
}

/// Coefficient map with `coef` on e_from..e_to.
inline std::map<std::size_t, Int> run(std::size_t from, std::size_t to, Int coef,
                                      std::map<std::size_t, Int> base = {}) {
  for (std::size_t i = from; i <= to; ++i) base[i] += coef;
  return base;
}

inline DivisorClass e_diff(const SurfaceModel& m, std::size_t i, std::size_t j) {
  return m.exceptional(i) - m.exceptional(j);
}

inline NumericType nt(Int a, Int tb, std::vector<Int> mults, Int ksq) {
  NumericType t{a, tb, std::move(mults), ksq, {}};
  t.admissible_d = admissible_degrees(t.a, t.twice_b_check, t.mults);
  return t;
}

inline std::vector<std::string> cat_names(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline std::vector<Int> rep(Int v, std::size_t n) { return std::vector<Int>(n, v); }

inline std::vector<Int> cat(std::vector<Int> a, const std::vector<Int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline const NamedClass& find(const std::vector<NamedClass>& v, const std::string& name) {
  for (const auto& c : v)
    if (c.name == name) return c;
  throw std::out_of_range("no class named " + name);
}

inline FibreComponent comp(const std::vector<NamedClass>& v, const std::string& name, Int mult,
                           const std::vector<ExpectedLabel>& labels) {
  FibreComponent c{name, find(v, name).cls, mult, std::nullopt, std::nullopt};
  for (const auto& l : labels)
    if (l.name == name) {
      c.self_int = l.self_int;
      c.genus = l.genus;
    }
  return c;
}

inline std::vector<NamedClass> exceptional_curves(const SurfaceModel& m) {
  std::vector<NamedClass> out;
  for (std::size_t i = 1; i <= m.exceptional_count(); ++i) out.push_back({"e" + std::to_string(i), m.exceptional(i)});
  return out;
}

inline CatalogEntry canonical_entry(Tag tag, const DivisorClass& f, const SurfaceModel& m, ExpectedReport exp,
                                    std::string title) {
  FibrationModel fib = FibrationModel::checked(m, f);
  return {tag, std::move(title), std::move(fib), exceptional_curves(m), std::move(exp), {}};
}

inline CatalogEntry build_A() {
  const SurfaceModel m = SurfaceModel::plane(12);
  const DivisorClass f = pc(m, 6, run(9, 12, -1, run(1, 8, -2)));
  ExpectedReport e;
  e.ksq = 1;
  e.rho = 13;
  e.type = nt(2, 0, rep(2, 7), 1);
  e.type_label = "A";
  e.minus_one_section = true;
  e.plane = PlaneCurveModel{6, rep(2, 8)};
  return canonical_entry(Tag::A, f, m, std::move(e), "sextic with eight double points");
}

inline CatalogEntry build_B1() {
  const SurfaceModel m = SurfaceModel::plane(11);
  const DivisorClass f = pc(m, 7, run(2, 11, -2, {{1, -3}}));
  ExpectedReport e;
  e.ksq = 2;
  e.rho = 12;
  e.type = nt(2, 2, rep(2, 10), 2);
  e.type_label = "B1";
  e.minus_one_section = false;
  e.plane = PlaneCurveModel{7, cat({3}, rep(2, 10))};
  return canonical_entry(Tag::B1, f, m, std::move(e), "septic with one triple and ten double points");
}

inline CatalogEntry build_B2() {
  const SurfaceModel m = SurfaceModel::plane(11);
  const DivisorClass f = pc(m, 9, run(1, 8, -3, {{9, -2}, {10, -2}, {11, -1}}));
  ExpectedReport e;
  e.ksq = 2;
  e.rho = 12;
  e.type = nt(4, 0, cat(rep(3, 7), {2, 2}), 2);
  e.type_label = "B2";
  e.minus_one_section = true;
  e.plane = PlaneCurveModel{9, cat(rep(3, 8), {2, 2})};
  return canonical_entry(Tag::B2, f, m, std::move(e), "nonic with eight triple and two double points");
}

inline CatalogEntry build_C() {
  const SurfaceModel m = SurfaceModel::plane(10);
  const DivisorClass f = pc(m, 13, run(2, 10, -4, {{1, -5}}));
  ExpectedReport e;
  e.ksq = 3;
  e.rho = 11;
  e.type = nt(6, 2, rep(4, 9), 3);
  e.type_label = "C";
  e.minus_one_section = false;
  e.plane = PlaneCurveModel{13, cat({5}, rep(4, 9))};
  return canonical_entry(Tag::C, f, m, std::move(e), "degree 13 curve with one quintuple and nine quadruple points");
}

inline std::vector<ExpectedLabel> labels_with_default(std::vector<ExpectedLabel> special,
                                                      const std::vector<std::string>& all_names) {
  std::vector<ExpectedLabel> out;
  for (const auto& n : all_names) {
    auto it = std::find_if(special.begin(), special.end(), [&](const ExpectedLabel& l) { return l.name == n; });
    out.push_back(it != special.end() ? *it : ExpectedLabel{n, -2, 0});
  }
  return out;
}

inline std::vector<std::string> theta_names(std::size_t from, std::size_t to) {
  std::vector<std::string> out;
  for (std::size_t i = from; i <= to; ++i) out.push_back("T" + std::to_string(i));
  return out;
}

/// The unique enumerated (-1)-class meeting F twice, T12 and T7 once, and no
/// other listed curve. Its coordinates are not printed; it must come out as e8.
inline DivisorClass reconstruct_ex43_e8(const SurfaceModel& m, const DivisorClass& f,
                                        const std::vector<NamedClass>& curves) {
  std::vector<DivisorClass> hits;
  for (const auto& c : enum_classes(m, minus_one_query(3))) {
    if (intersect(m, c, f) != 2) continue;
    bool good = true;
    for (const auto& nc : curves) {
      const Int want = (nc.name == "T12" || nc.name == "T7") ? 1 : 0;
      if (intersect(m, c, nc.cls) != want) {
        good = false;
        break;
      }
    }
    if (good) hits.push_back(c);
  }
  if (hits.size() != 1) throw LatticeError("e8 reconstruction is not unique");
  return hits.front();
}

inline CatalogEntry build_Ex4_3() {
  const SurfaceModel m = SurfaceModel::plane(12);
  const DivisorClass f = pc(m, 6, run(9, 12, -1, run(1, 8, -2)));
  std::vector<NamedClass> curves;
  curves.push_back({"O", m.exceptional(12)});
  curves.push_back({"T0", pc(m, 1, {{1, -1}, {9, -1}, {10, -1}, {11, -1}, {12, -1}})});
  for (std::size_t i : {1, 2, 3, 4, 5, 6, 7}) curves.push_back({"T" + std::to_string(i), e_diff(m, i, i + 1)});
  curves.push_back({"T8", pc(m, 1, {{1, -1}, {2, -1}, {3, -1}})});
  for (std::size_t i : {9, 10, 11}) curves.push_back({"T" + std::to_string(i), e_diff(m, i, i + 1)});
  curves.push_back({"T12", pc(m, 3, run(1, 10, -1))});
  curves.push_back({"e8", reconstruct_ex43_e8(m, f, curves)});

  ExpectedReport e;
  e.ksq = 1;
  e.rho = 13;
  e.type = nt(2, 0, rep(2, 7), 1);
  e.type_label = "A";
  e.minus_one_section = true;
  e.labels = labels_with_default({{"T0", -4, 0}, {"T12", -1, 1}, {"O", -1, 0}, {"e8", -1, 0}},
                                 cat_names(theta_names(0, 12), {"O", "e8"}));
  std::vector<FibreComponent> f0 = {comp(curves, "T11", 1, e.labels), comp(curves, "T9", 1, e.labels),
                                    comp(curves, "T10", 2, e.labels), comp(curves, "T12", 2, e.labels)};
  std::vector<FibreComponent> finf = {comp(curves, "T0", 1, e.labels), comp(curves, "T1", 4, e.labels),
                                      comp(curves, "T2", 7, e.labels), comp(curves, "T3", 10, e.labels),
                                      comp(curves, "T4", 8, e.labels), comp(curves, "T5", 6, e.labels),
                                      comp(curves, "T6", 4, e.labels), comp(curves, "T7", 2, e.labels),
                                      comp(curves, "T8", 5, e.labels)};
  e.fibre_components = {{"F0", 4}, {"Finf", 9}};
  e.blocks = {{"F", "O"}, {"T9", "T10", "T12"}, theta_names(1, 8)};
  e.intersections = {{"O", "T11", 1}, {"O", "T0", 1}, {"e8", "T12", 1}, {"e8", "T7", 1}, {"e8", "F", 2}};
  for (const auto& n : cat_names(theta_names(1, 10), {"T12"})) e.intersections.push_back({"O", n, 0});

  FibrationModel fib = FibrationModel::checked(m, f, {{"O", find(curves, "O").cls}},
                                               {{"F0", f0}, {"Finf", finf}}, curves);
  return {Tag::Ex4_3, "type (A) fibration with reducible fibres F0 and Finf", std::move(fib), curves, std::move(e),
          {"branch curve x^5 + t^3 + t^2 x = 0 plus a minimal section and a fibre",
           "e8 reconstructed: unique (-1)-class with e8.T12 = e8.T7 = 1, e8.F = 2 meeting no other listed curve"}};
}

inline CatalogEntry build_Ex4_4() {
  const SurfaceModel m = SurfaceModel::plane(11);
  const DivisorClass f = pc(m, 7, run(2, 11, -2, {{1, -3}}));
  std::vector<NamedClass> curves;
  curves.push_back({"O", e_diff(m, 1, 2)});
  curves.push_back({"T0", pc(m, 1, {{1, -1}, {7, -1}, {8, -1}})});
  curves.push_back({"T1", pc(m, 1, {{1, -1}, {2, -1}, {3, -1}})});
  for (std::size_t i : {2, 3, 4, 5}) curves.push_back({"T" + std::to_string(i), e_diff(m, i, i + 1)});
  curves.push_back({"T6", pc(m, 3, run(7, 11, -1, run(1, 5, -1)))});
  for (std::size_t i : {7, 8, 9, 10}) curves.push_back({"T" + std::to_string(i), e_diff(m, i, i + 1)});
  curves.push_back({"T11", pc(m, 3, run(1, 10, -1))});
  curves.push_back({"e6", m.exceptional(6)});
  curves.push_back({"e11", m.exceptional(11)});

  ExpectedReport e;
  e.ksq = 2;
  e.rho = 12;
  e.type = nt(2, 2, rep(2, 10), 2);
  e.type_label = "B1";
  e.minus_one_section = false;
  e.labels = labels_with_default({{"T6", -1, 1}, {"T11", -1, 1}, {"e6", -1, 0}, {"e11", -1, 0}},
                                 cat_names(theta_names(0, 11), {"O", "e6", "e11"}));
  std::vector<FibreComponent> f0 = {comp(curves, "T0", 1, e.labels), comp(curves, "T7", 1, e.labels)};
  for (const auto& n : theta_names(8, 11)) f0.push_back(comp(curves, n, 2, e.labels));
  std::vector<FibreComponent> finf = {comp(curves, "T1", 1, e.labels), comp(curves, "T2", 1, e.labels)};
  for (const auto& n : theta_names(3, 6)) finf.push_back(comp(curves, n, 2, e.labels));
  e.fibre_components = {{"F0", 6}, {"Finf", 6}};
  e.blocks = {{"F", "O"}, theta_names(7, 11), cat_names({"T1"}, theta_names(3, 6))};
  e.intersections = {{"O", "T0", 1}, {"O", "T2", 1}, {"e6", "T5", 1}, {"e11", "T10", 1},
                     {"e6", "F", 2},  {"e11", "F", 2}, {"O", "O", -2}, {"O", "F", 1}};

  FibrationModel fib = FibrationModel::checked(m, f, {{"O", find(curves, "O").cls}},
                                               {{"F0", f0}, {"Finf", finf}}, curves);
  return {Tag::Ex4_4, "type (B1) fibration with a (-2)-section", std::move(fib), curves, std::move(e),
          {"branch curve x^5 + t x^4 + t x^3 + t^2 x + t^3 = 0 plus a section and two fibres"}};
}

inline CatalogEntry build_Ex4_5() {
  const SurfaceModel m = SurfaceModel::plane(11);
  const DivisorClass f = pc(m, 9, run(1, 8, -3, {{9, -2}, {10, -2}, {11, -1}}));
  std::vector<NamedClass> curves;
  curves.push_back({"O", m.exceptional(11)});
  curves.push_back({"T0", pc(m, 1, {{1, -1}, {2, -1}, {3, -1}})});
  for (std::size_t i : {1, 2, 3, 4, 5, 6, 7}) curves.push_back({"T" + std::to_string(i), e_diff(m, i, i + 1)});
  curves.push_back({"T8", pc(m, 3, run(1, 7, -1, {{9, -2}, {10, -1}}))});
  curves.push_back({"T9", e_diff(m, 9, 10)});
  curves.push_back({"T10", pc(m, 3, run(1, 9, -1, {{11, -1}}))});
  curves.push_back({"e10", m.exceptional(10)});
  curves.push_back({"e8hat", e_diff(m, 8, 11)});

  ExpectedReport e;
  e.ksq = 2;
  e.rho = 12;
  e.type = nt(4, 0, cat(rep(3, 7), {2, 2}), 2);
  e.type_label = "B2";
  e.minus_one_section = true;
  e.labels = labels_with_default({{"T8", -3, 0}, {"T10", -1, 1}, {"O", -1, 0}, {"e10", -1, 0}},
                                 cat_names(theta_names(0, 10), {"O", "e10", "e8hat"}));
  std::vector<FibreComponent> f0 = {comp(curves, "T10", 1, e.labels), comp(curves, "T9", 1, e.labels)};
  for (std::size_t i = 3; i <= 8; ++i) f0.push_back(comp(curves, "T" + std::to_string(i), 9 - static_cast<Int>(i), e.labels));
  f0.push_back(comp(curves, "T2", 4, e.labels));
  f0.push_back(comp(curves, "T1", 2, e.labels));
  f0.push_back(comp(curves, "T0", 3, e.labels));
  e.fibre_components = {{"F0", 11}};
  e.blocks = {{"F", "O"}, theta_names(0, 9)};
  e.intersections = {{"O", "T10", 1},  {"e10", "T9", 1}, {"e10", "T8", 1}, {"e8hat", "O", 1},
                     {"e8hat", "T7", 1}, {"e10", "F", 2},  {"e8hat", "F", 2}};
  for (const auto& n : theta_names(0, 9)) e.intersections.push_back({"O", n, 0});

  FibrationModel fib = FibrationModel::checked(m, f, {{"O", find(curves, "O").cls}}, {{"F0", f0}}, curves);
  return {Tag::Ex4_5, "type (B2) fibration with a unique reducible fibre", std::move(fib), curves, std::move(e),
          {"branch curve of bidegree (5, 4) plus a minimal section",
           "e8hat = e8 - e11 reconstructed from its printed intersections with O, T7 and F"}};
}

inline CatalogEntry build_Ex4_6() {
  const SurfaceModel m = SurfaceModel::plane(10);
  const DivisorClass f = pc(m, 13, run(2, 10, -4, {{1, -5}}));
  std::vector<NamedClass> curves;
  curves.push_back({"O", pc(m, 1, {{2, -1}, {3, -1}, {4, -1}})});
  for (std::size_t i = 2; i <= 7; ++i) curves.push_back({"T" + std::to_string(i), e_diff(m, i, i + 3)});
  for (std::size_t i = 8; i <= 10; ++i) curves.push_back({"T" + std::to_string(i), pc(m, 6, run(1, 10, -2, {{i, 1}}))});
  for (std::size_t i = 2; i <= 4; ++i)
    curves.push_back({"T" + std::to_string(i + 9), pc(m, 1, {{1, -1}, {i, -1}, {i + 3, -1}})});
  for (std::size_t i : {1, 8, 9, 10}) curves.push_back({"e" + std::to_string(i), m.exceptional(i)});

  ExpectedReport e;
  e.ksq = 3;
  e.rho = 11;
  e.type = nt(6, 2, rep(4, 9), 3);
  e.type_label = "C";
  e.minus_one_section = false;
  e.labels = labels_with_default({{"T8", -1, 1}, {"T9", -1, 1}, {"T10", -1, 1},
                                  {"e1", -1, 0}, {"e8", -1, 0}, {"e9", -1, 0}, {"e10", -1, 0}},
                                 cat_names(theta_names(2, 13), {"O", "e1", "e8", "e9", "e10"}));
  auto fibre = [&](const char* a, const char* b, const char* c, const char* d) {
    return std::vector<FibreComponent>{comp(curves, a, 1, e.labels), comp(curves, b, 1, e.labels),
                                       comp(curves, c, 2, e.labels), comp(curves, d, 2, e.labels)};
  };
  e.fibre_components = {{"F0", 4}, {"F1", 4}, {"Finf", 4}};
  e.blocks = {{"F", "O"}, {"T5", "T8", "T11"}, {"T6", "T9", "T12"}, {"T7", "T10", "T13"}};
  e.intersections = {{"e8", "T5", 1},  {"e9", "T6", 1},  {"e10", "T7", 1}, {"e1", "T11", 1}, {"e1", "T12", 1},
                     {"e1", "T13", 1}, {"e1", "T8", 2},  {"e1", "T9", 2},  {"e1", "T10", 2}, {"e8", "F", 4},
                     {"e9", "F", 4},   {"e10", "F", 4},  {"e1", "F", 5},   {"O", "T2", 1},   {"O", "T3", 1},
                     {"O", "T4", 1}};

  FibrationModel fib = FibrationModel::checked(
      m, f, {{"O", find(curves, "O").cls}},
      {{"F0", fibre("T2", "T11", "T5", "T8")}, {"F1", fibre("T3", "T12", "T6", "T9")},
       {"Finf", fibre("T4", "T13", "T7", "T10")}},
      curves);
  return {Tag::Ex4_6, "type (C) fibration with three reducible fibres", std::move(fib), curves, std::move(e),
          {"branch curve of bidegree (5, 4) plus a section and three fibres"}};
}

}  // namespace detail

/// Fully built entry; construction checks F^2 = 0, K.F = 2 and F.O = 1.
inline CatalogEntry get(Tag tag) {
  switch (tag) {
    case Tag::A: return detail::build_A();
    case Tag::B1: return detail::build_B1();
    case Tag::B2: return detail::build_B2();
    case Tag::C: return detail::build_C();
    case Tag::Ex4_3: return detail::build_Ex4_3();
    case Tag::Ex4_4: return detail::build_Ex4_4();
    case Tag::Ex4_5: return detail::build_Ex4_5();
    case Tag::Ex4_6: return detail::build_Ex4_6();
  }
  throw std::invalid_argument("unknown tag");
}

inline CatalogEntry get(const std::string& tag) {
  auto t = parse_tag(tag);
  if (!t) throw std::invalid_argument("unknown tag: " + tag);
  return get(*t);
}

// ---------------------------------------------------------------------------
// Verification

struct VerifyReport {
  bool ok = true;
  std::string first_failure;
  std::vector<std::string> lines;  // human-readable progress, one per check
  Int ksq = 0;
  Int rho = 0;
  std::optional<Int> mw_rank;
  std::optional<Int> determinant;
  std::size_t block_count = 0;
  std::vector<std::pair<std::string, std::size_t>> fibre_components;
  std::vector<std::pair<std::string, std::vector<std::string>>> ade;  // fibre -> labels
  std::optional<NumericType> numeric_type;
  std::optional<PlaneCurveModel> plane;
  std::optional<bool> minus_one_section;
  std::size_t reduction_steps = 0;
};

/// Runs every check against the expected record. Stops at the first failure.
inline VerifyReport verify_entry(const CatalogEntry& entry) {
  VerifyReport rep;
  auto fail = [&](const std::string& why) {
    rep.ok = false;
    rep.first_failure = why;
    rep.lines.push_back("FAIL " + why);
    return rep;
  };
  auto pass = [&](const std::string& what) { rep.lines.push_back("ok   " + what); };
  const FibrationModel& fib = entry.fibration;
  const SurfaceModel& s = fib.surface();
  const ExpectedReport& ex = entry.expected;
  try {
    if (auto v = fib.first_violation()) return fail(*v);
    pass("F^2 = 0, K.F = " + std::to_string(canonical_degree(s, fib.fibre_class())) + ", sections meet F once");

    const KPlusF kf = selfint_k_plus_f(fib);
    rep.ksq = kf.ksq;
    rep.rho = kf.rho;
    if (kf.ksq != ex.ksq) return fail("(K+F)^2 = " + std::to_string(kf.ksq) + ", expected " + std::to_string(ex.ksq));
    if (kf.rho != ex.rho || static_cast<Int>(s.rank()) != ex.rho)
      return fail("rho = " + std::to_string(kf.rho) + " (lattice rank " + std::to_string(s.rank()) + "), expected " +
                  std::to_string(ex.rho));
    pass("(K+F)^2 = " + std::to_string(kf.ksq) + ", rho = " + std::to_string(kf.rho));

    for (const auto& l : ex.labels) {
      auto c = entry.lookup(l.name);
      if (!c) return fail("labelled class " + l.name + " missing");
      const Int si = self_intersection(s, *c);
      if (si != l.self_int)
        return fail(l.name + "^2 = " + std::to_string(si) + ", expected " + std::to_string(l.self_int));
      const Int pa = arithmetic_genus(s, *c);
      if (pa != l.genus) return fail("genus of " + l.name + " = " + std::to_string(pa) + ", expected " + std::to_string(l.genus));
    }
    if (!ex.labels.empty()) pass(std::to_string(ex.labels.size()) + " self-intersection/genus labels");

    for (const auto& it : ex.intersections) {
      auto a = entry.lookup(it.lhs);
      auto b = entry.lookup(it.rhs);
      if (!a || !b) return fail("intersection names " + it.lhs + ", " + it.rhs + " not found");
      const Int v = intersect(s, *a, *b);
      if (v != it.value)
        return fail(it.lhs + "." + it.rhs + " = " + std::to_string(v) + ", expected " + std::to_string(it.value));
    }
    if (!ex.intersections.empty()) pass(std::to_string(ex.intersections.size()) + " printed intersection numbers");

    if (fib.fibres().size() != ex.fibre_components.size())
      return fail("fibre count " + std::to_string(fib.fibres().size()) + ", expected " +
                  std::to_string(ex.fibre_components.size()));
    std::vector<Int> counts;
    for (std::size_t i = 0; i < fib.fibres().size(); ++i) {
      const auto& dec = fib.fibres()[i];
      if (dec.name != ex.fibre_components[i].first || dec.components.size() != ex.fibre_components[i].second)
        return fail("fibre " + dec.name + " has " + std::to_string(dec.components.size()) + " components, expected " +
                    ex.fibre_components[i].first + " with " + std::to_string(ex.fibre_components[i].second));
      const FibreReport fr = validate_fibre(fib, dec);
      if (!fr.ok) return fail(fr.failure);
      const DualGraph g = dual_graph(fib, dec);
      if (!g.connected()) return fail("dual graph of " + dec.name + " is disconnected");
      std::vector<std::string> labels;
      for (const auto& c : ade_classify(g)) labels.push_back(c.label);
      rep.ade.emplace_back(dec.name, labels);
      rep.fibre_components.emplace_back(dec.name, dec.components.size());
      counts.push_back(static_cast<Int>(dec.components.size()));
      pass("fibre " + dec.name + ": " + std::to_string(dec.components.size()) +
           " components, sums to F, negative semidefinite, F in radical");
    }
    if (!fib.fibres().empty()) {
      rep.mw_rank = shioda_rank(kf.rho, counts);
      if (*rep.mw_rank != ex.mw_rank)
        return fail("Mordell-Weil rank " + std::to_string(*rep.mw_rank) + ", expected " + std::to_string(ex.mw_rank));
      pass("Mordell-Weil rank " + std::to_string(*rep.mw_rank));
    }

    if (!ex.blocks.empty()) {
      std::vector<std::vector<NamedClass>> blocks;
      for (const auto& b : ex.blocks) {
        std::vector<NamedClass> nb;
        for (const auto& n : b) {
          auto c = entry.lookup(n);
          if (!c) return fail("block class " + n + " not found");
          nb.push_back({n, *c});
        }
        blocks.push_back(std::move(nb));
      }
      const DecompositionReport dr = orthogonal_decomposition_check(fib, blocks);
      rep.determinant = dr.determinant;
      rep.block_count = blocks.size();
      if (!dr.ok) return fail(dr.message);
      pass(dr.message + ": " + std::to_string(blocks.size()) + " blocks, det " + std::to_string(dr.determinant));
    }

    if (ex.minus_one_section) {
      const SectionVerdict sv = minus_one_section_exists(fib, 1);
      rep.minus_one_section = sv.exists;
      if (sv.exists != *ex.minus_one_section)
        return fail(std::string("(-1)-section ") + (sv.exists ? "found" : "not found") + ", expected the opposite");
      pass(std::string("(-1)-section ") + (sv.exists ? "exists" : "absent among classes of degree <= 1"));
    }

    const ReductionResult red = reduction(fib, entry.curve_classes());
    rep.reduction_steps = red.trace.steps.size();
    const Int g2 = red.model.pencil_self_intersection();
    if (red.model.ksq() != kf.ksq) return fail("reduction changed (K+F)^2");
    const SharpResult sharp = greedy_sharp_minimal(red.model);
    if (sharp.violation) return fail(*sharp.violation);
    if (!sharp.trace.non_decreasing()) return fail("greedy trace intersections decrease");
    NumericType t{sharp.data.a, sharp.data.twice_b_check, sharp.data.mults, red.model.ksq(), {}};
    t.admissible_d = admissible_degrees(t.a, t.twice_b_check, t.mults);
    rep.numeric_type = t;
    if (!(t == ex.type)) return fail("numeric type " + t.tuple_string() + ", expected " + ex.type.tuple_string());
    if (t.ksq_formula() != t.ksq || t.twice_genus() != 2 * fib.genus())
      return fail("numeric type does not satisfy the genus and (K+G)^2 formulas");
    if (kf.ksq + g2 + t.N() != 4 * fib.genus() + 4)
      return fail("(K+F)^2 + G^2 + N = " + std::to_string(kf.ksq + g2 + t.N()) + ", expected 4g+4");
    pass("reduction in " + std::to_string(rep.reduction_steps) + " steps, numeric type " + t.tuple_string() + " (type " +
         ex.type_label + ")");

    if (ex.plane) {
      const PlaneCurveModel pm = canonical_p2_model(sharp.data);
      rep.plane = pm;
      if (pm.degree != ex.plane->degree || pm.multiplicities != ex.plane->multiplicities)
        return fail("plane model degree " + std::to_string(pm.degree) + " with " + pm.singularities() + ", expected " +
                    std::to_string(ex.plane->degree) + " with " + ex.plane->singularities());
      pass("plane model: degree " + std::to_string(pm.degree) + ", singularities " + pm.singularities());
    }
  } catch (const std::exception& e) {
    return fail(e.what());
  }
  return rep;
}

inline VerifyReport verify(Tag tag) { return verify_entry(get(tag)); }

}  // namespace ratpencil
