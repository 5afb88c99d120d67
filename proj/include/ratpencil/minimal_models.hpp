#pragma once

// Reduction of a fibred surface and contraction to a #-minimal Hirzebruch
// model.
//
// Curves are supplied explicitly as irreducible classes (any self-
// intersection). At every step the contractible candidates are the current
// (-1)-classes among them; the rest are pushed forward and may become
// (-1)-classes later.

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ratpencil/curve_classes.hpp"
#include "ratpencil/lattice.hpp"

namespace ratpencil {

class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ContractionStep {
  std::string model;           // description of the model before the step
  std::string contracted;      // formatted class in that model
  std::vector<Int> coords;     // its coordinates
  Int pencil_intersection;     // G.E at contraction time
};

struct ContractionTrace {
  std::vector<ContractionStep> steps;
  ModelId start_id = 0;
  ModelId end_id = 0;

  bool non_decreasing() const {
    for (std::size_t i = 1; i < steps.size(); ++i)
      if (steps[i].pencil_intersection < steps[i - 1].pencil_intersection) return false;
    return true;
  }
};

/// Surface with the image of the pencil and the curves still known on it.
struct PencilModel {
  SurfaceModel surface;
  DivisorClass pencil;
  std::vector<DivisorClass> curves;
  Int genus;

  Int pencil_self_intersection() const { return self_intersection(surface, pencil); }
  Int ksq() const { return self_intersection(surface, surface.canonical() + pencil); }
};

struct ReductionResult {
  PencilModel model;
  ContractionTrace trace;
};

namespace detail {

inline void check_curve(const SurfaceModel& s, const DivisorClass& c, std::size_t index) {
  s.require_owned(c);
  if (c.is_zero()) throw PipelineError("curve " + std::to_string(index) + " is the zero class");
  Int pa = 0;
  try {
    pa = arithmetic_genus(s, c);
  } catch (const LatticeError&) {
    throw PipelineError("curve " + std::to_string(index) + " (" + s.format(c) + ") has non-integral genus");
  }
  if (pa < 0)
    throw PipelineError("curve " + std::to_string(index) + " (" + s.format(c) + ") has negative arithmetic genus");
}

/// Index of the chosen candidate among the current (-1)-classes, or npos.
inline std::size_t pick_candidate(const PencilModel& m, const std::function<bool(Int)>& admissible) {
  std::size_t best = static_cast<std::size_t>(-1);
  Int best_gi = 0;
  for (std::size_t i = 0; i < m.curves.size(); ++i) {
    const DivisorClass& c = m.curves[i];
    if (!is_minus_one_class(m.surface, c)) continue;
    const Int gi = intersect(m.surface, m.pencil, c);
    if (!admissible(gi)) continue;
    if (best == static_cast<std::size_t>(-1) || gi < best_gi ||
        (gi == best_gi && DivisorClass::lex_less(c, m.curves[best]))) {
      best = i;
      best_gi = gi;
    }
  }
  return best;
}

inline PencilModel contract(const PencilModel& m, std::size_t idx, ContractionTrace& trace) {
  const DivisorClass e = m.curves[idx];
  ContractionStep step{m.surface.describe(), m.surface.format(e), e.coords(), intersect(m.surface, m.pencil, e)};
  std::vector<DivisorClass> push;
  push.push_back(m.pencil);
  for (std::size_t i = 0; i < m.curves.size(); ++i)
    if (i != idx) push.push_back(m.curves[i]);
  BlowDownResult r = blow_down(m.surface, e, push);
  PencilModel next{r.model, r.classes.front(), {}, m.genus};
  for (std::size_t i = 1; i < r.classes.size(); ++i)
    if (!r.classes[i].is_zero()) next.curves.push_back(r.classes[i]);
  trace.steps.push_back(std::move(step));
  return next;
}

}  // namespace detail

/// Numerical (-1)-classes of degree <= cap, for use when no curve list is
/// known. Over-approximate: a numerical (-1)-class need not be irreducible,
/// so contractions driven by this list are only numerically meaningful.
struct NumericalCurveList {
  std::vector<DivisorClass> curves;
  bool over_approximate = true;
};

inline NumericalCurveList numerical_minus_one_curves(const SurfaceModel& s, Int cap = 3) {
  return {enum_classes(s, minus_one_query(cap)), true};
}

/// Contract supplied (-1)-curves meeting the fibre once until none is left.
inline ReductionResult reduction(const FibrationModel& fib, const std::vector<DivisorClass>& curves) {
  const SurfaceModel& s = fib.surface();
  for (std::size_t i = 0; i < curves.size(); ++i) detail::check_curve(s, curves[i], i);
  PencilModel m{s, fib.fibre_class(), curves, fib.genus()};
  ContractionTrace trace;
  trace.start_id = s.id();
  while (true) {
    const std::size_t idx = detail::pick_candidate(m, [](Int gi) { return gi == 1; });
    if (idx == static_cast<std::size_t>(-1)) break;
    m = detail::contract(m, idx, trace);
  }
  trace.end_id = m.surface.id();
  return {std::move(m), std::move(trace)};
}

enum class SharpType { general, special };

inline const char* to_string(SharpType t) { return t == SharpType::general ? "general" : "special"; }

struct SharpModelData {
  Int d = 0;
  Int a = 0;
  Int b = 0;
  Int twice_b_check = 0;
  std::vector<Int> mults;  // non-increasing, each >= 2
  SharpType type = SharpType::general;
  std::optional<Int> m0;   // special type only

  Int N() const { return static_cast<Int>(mults.size()); }
  Int m1() const { return mults.empty() ? 0 : mults.front(); }
};

/// General when 2b - (a+2)d >= 2(a+2); special only happens on Sigma_1.
inline SharpType classify_type(const SharpModelData& s) {
  const Int lhs = checked::sub(checked::mul(2, s.b), checked::mul(s.a + 2, s.d));
  if (lhs >= checked::mul(2, s.a + 2) || s.d != 1) return SharpType::general;
  return SharpType::special;
}

/// Build the record from (d, a, b, multiplicities), filling 2b-check, type and m0.
inline SharpModelData make_sharp_data(Int d, Int a, Int b, std::vector<Int> mults) {
  SharpModelData s;
  s.d = d;
  s.a = a;
  s.b = b;
  std::sort(mults.begin(), mults.end(), std::greater<>());
  s.mults = std::move(mults);
  s.twice_b_check = checked::sub(checked::mul(2, b), checked::mul(d + 2, a + 2));
  s.type = classify_type(s);
  if (s.type == SharpType::special) s.m0 = b - (a + 2);
  return s;
}

/// First violated normalization condition, with the elementary
/// transformation that repairs it.
inline std::optional<std::string> sharp_violation(const SharpModelData& s) {
  std::ostringstream os;
  if (s.d > 0 && s.b < (s.a + 2) * s.d) {
    os << "(#1) fails: b = " << s.b << " < (a+2)d = " << (s.a + 2) * s.d
       << "; repair by elementary transformations at points off the minimal section (d -> d-1)";
    return os.str();
  }
  if (s.d == 0 && s.b < s.a + 2) {
    os << "(#1) fails: b = " << s.b << " < a+2 = " << s.a + 2 << "; repair by exchanging the two rulings";
    return os.str();
  }
  if (2 * s.m1() > s.a + 2) {
    os << "(#2) fails: m1 = " << s.m1() << " > (a+2)/2"
       << "; repair by an elementary transformation centred at the point of multiplicity m1";
    return os.str();
  }
  if (s.d == 1 && s.m1() > s.b - (s.a + 2)) {
    os << "(#2) fails on Sigma_1: m1 = " << s.m1() << " > b-(a+2) = " << s.b - (s.a + 2)
       << "; repair by an elementary transformation centred at the point of multiplicity m1 (d -> 0)";
    return os.str();
  }
  if (s.type == SharpType::special && s.m0 && (*s.m0 < 2 || 2 * *s.m0 >= s.a + 2)) {
    os << "special type needs 2 <= m0 < (a+2)/2, got m0 = " << *s.m0;
    return os.str();
  }
  return std::nullopt;
}

struct SharpResult {
  SharpModelData data;
  ContractionTrace trace;
  SurfaceModel surface;  // Hirzebruch model of rank 2
  DivisorClass pencil;   // G# = (a+2) D0 + b G
  std::optional<std::string> violation;
};

namespace detail {

/// Rewrite a rank-2 model as Sigma_0 or Sigma_1 according to lattice parity.
/// Without curve data the lattice cannot tell Sigma_d from Sigma_{d+2}.
inline BasisChange normalize_rank_two(const SurfaceModel& m) {
  BasisChange frame = identity_change(m);
  if (m.is_plane()) return plane_to_hirzebruch(frame);
  const Int d = m.hirzebruch_degree();
  const Int k = d / 2;
  const Int target_d = d - 2 * k;
  std::vector<std::vector<Int>> basis = {{1, k}, {0, 1}};
  return {SurfaceModel::hirzebruch(target_d, 0), basis};
}

}  // namespace detail

/// Contract the supplied (-1)-curves, smallest G.E first (ties: smallest
/// coordinate vector), down to a rank-2 model and read off the #-minimal data.
inline SharpResult greedy_sharp_minimal(const PencilModel& start, const std::vector<DivisorClass>& extra_curves = {}) {
  PencilModel m = start;
  for (const auto& c : extra_curves) {
    m.surface.require_owned(c);
    m.curves.push_back(c);
  }
  for (std::size_t i = 0; i < m.curves.size(); ++i) detail::check_curve(m.surface, m.curves[i], i);
  for (const auto& c : m.curves)
    if (is_minus_one_class(m.surface, c) && intersect(m.surface, m.pencil, c) == 1)
      throw PipelineError("input is not a reduction: a (-1)-curve meets the pencil once");

  ContractionTrace trace;
  trace.start_id = m.surface.id();
  while (m.surface.rank() > 2) {
    const std::size_t idx = detail::pick_candidate(m, [](Int) { return true; });
    if (idx == static_cast<std::size_t>(-1))
      throw PipelineError("incomplete geometry: no (-1)-curve left on " + m.surface.describe());
    m = detail::contract(m, idx, trace);
  }
  trace.end_id = m.surface.id();

  const BasisChange to_ruled = detail::normalize_rank_two(m.surface);
  SurfaceModel sigma = to_ruled.target;
  DivisorClass g = apply_change(m.surface, to_ruled, m.pencil);
  if (sigma.hirzebruch_degree() == 0 &&
      intersect(sigma, sigma.ruling_fibre(), g) > intersect(sigma, sigma.min_section(), g)) {
    g = sigma.make({g[1], g[0]});
  }
  const Int d = sigma.hirzebruch_degree();
  const Int a = intersect(sigma, g, sigma.ruling_fibre()) - 2;
  const Int b = checked::add(checked::mul(a + 2, d), intersect(sigma, g, sigma.min_section()));
  std::vector<Int> mults;
  for (const auto& st : trace.steps)
    if (st.pencil_intersection >= 2) mults.push_back(st.pencil_intersection);
  SharpModelData data = make_sharp_data(d, a, b, std::move(mults));
  std::optional<std::string> violation = sharp_violation(data);
  return {std::move(data), std::move(trace), std::move(sigma), std::move(g), std::move(violation)};
}

/// Degree and multiplicities of the plane curve obtained by contracting the
/// minimal section of Sigma_1.
struct PlaneCurveModel {
  Int degree;
  std::vector<Int> multiplicities;  // non-increasing

  /// "5^1 4^9" style run-length listing.
  std::string singularities() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < multiplicities.size();) {
      std::size_t j = i;
      while (j < multiplicities.size() && multiplicities[j] == multiplicities[i]) ++j;
      if (i) os << ' ';
      os << multiplicities[i] << '^' << (j - i);
      i = j;
    }
    return os.str();
  }
};

inline PlaneCurveModel canonical_p2_model(const SharpModelData& s) {
  if (s.d != 1) throw PipelineError("not a plane-adjacent model");
  std::vector<Int> mult = s.mults;
  const Int extra = s.b - (s.a + 2);
  if (extra > 0) mult.push_back(extra);
  std::sort(mult.begin(), mult.end(), std::greater<>());
  return {s.b, std::move(mult)};
}

}  // namespace ratpencil
