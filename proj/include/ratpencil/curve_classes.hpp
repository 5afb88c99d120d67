#pragma once

// Enumeration of numerical curve classes with fixed C^2 and K.C, bounded by
// the degree against a fixed nef class H, plus the pencil-shift identities
// F.C = P.C - s K.C used to bound intersections with the fibre from below.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ratpencil/lattice.hpp"

namespace ratpencil {

struct ClassQuery {
  Int self_int = -1;
  Int k_deg = -1;
  Int degree_cap = 3;
};

inline ClassQuery minus_one_query(Int cap = 3) { return {-1, -1, cap}; }
inline ClassQuery minus_two_query(Int cap = 3) { return {-2, 0, cap}; }
inline ClassQuery pencil_query(Int cap = 3) { return {0, -2, cap}; }

/// Upper bound on search nodes visited by enum_classes before it gives up.
inline constexpr std::uint64_t default_enum_budget = 50'000'000;

namespace detail {

inline Int isqrt(Int v) {
  if (v <= 0) return 0;
  Int r = 0;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

/// All c in Z^n with sum c_i^2 = sq and sum c_i = lin, lexicographically
/// increasing in (-c_1, ..., -c_n). Emits into `out` as negated coordinates
/// so that callers can append them after the leading coordinates.
class MultiplicitySearch {
 public:
  MultiplicitySearch(std::size_t n, std::uint64_t budget) : n_(n), budget_(budget), cur_(n) {}

  template <class Emit>
  void run(Int sq, Int lin, Emit&& emit) {
    if (sq < 0) return;
    recurse(0, sq, lin, emit);
  }

  std::uint64_t visited() const { return visited_; }

 private:
  template <class Emit>
  void recurse(std::size_t pos, Int sq, Int lin, Emit& emit) {
    if (++visited_ > budget_) throw LatticeError("budget exceeded");
    const Int left = static_cast<Int>(n_ - pos);
    if (left == 0) {
      if (sq == 0 && lin == 0) emit(cur_);
      return;
    }
    // Cauchy-Schwarz and parity: lin^2 <= left * sq, lin = sq (mod 2).
    if (checked::mul(lin, lin) > checked::mul(left, sq)) return;
    if (((lin - sq) % 2 + 2) % 2 != 0) return;
    const Int bound = isqrt(sq);
    // Coordinate stored is -c, increasing, so c runs from bound down to -bound.
    for (Int c = bound; c >= -bound; --c) {
      cur_[pos] = -c;
      recurse(pos + 1, sq - c * c, lin - c, emit);
    }
  }

  std::size_t n_;
  std::uint64_t budget_;
  std::uint64_t visited_ = 0;
  std::vector<Int> cur_;
};

}  // namespace detail

/// Every class C with C^2 = q.self_int, K.C = q.k_deg and 0 <= C.H <= cap,
/// C != 0, in lexicographic order of coordinate vectors.
inline std::vector<DivisorClass> enum_classes(const SurfaceModel& model, const ClassQuery& q,
                                              std::uint64_t budget = default_enum_budget) {
  if (q.degree_cap < 1) throw LatticeError("degree cap must be positive");
  if (q.degree_cap > 1'000'000) throw LatticeError("budget exceeded");
  const std::size_t n = model.exceptional_count();
  detail::MultiplicitySearch search(n, budget);
  std::vector<DivisorClass> out;

  if (model.is_plane()) {
    // C = t l - sum c_i e_i:  sum c_i^2 = t^2 - s,  sum c_i = k + 3t.
    for (Int t = 0; t <= q.degree_cap; ++t) {
      const Int sq = checked::sub(checked::mul(t, t), q.self_int);
      const Int lin = checked::add(q.k_deg, checked::mul(3, t));
      search.run(sq, lin, [&](const std::vector<Int>& tail) {
        std::vector<Int> v;
        v.reserve(n + 1);
        v.push_back(t);
        v.insert(v.end(), tail.begin(), tail.end());
        DivisorClass c = model.make(std::move(v));
        if (!c.is_zero()) out.push_back(std::move(c));
      });
    }
  } else {
    // C = x D0 + y G - sum c_i e_i, h = C.H = x + y:
    //   sum c_i^2 = -(d+2) x^2 + 2 h x - s,  sum c_i = k - (d-2) x + 2 y.
    const Int d = model.hirzebruch_degree();
    for (Int h = 0; h <= q.degree_cap; ++h) {
      // Range of x with nonnegative square budget.
      const Int span = h + detail::isqrt(std::max<Int>(0, -q.self_int)) + 2;
      std::vector<std::pair<Int, std::vector<Int>>> batch;
      for (Int x = -span; x <= span; ++x) {
        const Int y = h - x;
        const Int sq = checked::sub(
            checked::add(checked::neg(checked::mul(d + 2, checked::mul(x, x))), checked::mul(2, checked::mul(h, x))),
            q.self_int);
        if (sq < 0) continue;
        const Int lin = checked::add(checked::sub(q.k_deg, checked::mul(d - 2, x)), checked::mul(2, y));
        search.run(sq, lin, [&](const std::vector<Int>& tail) {
          std::vector<Int> v;
          v.reserve(n + 2);
          v.push_back(x);
          v.push_back(y);
          v.insert(v.end(), tail.begin(), tail.end());
          DivisorClass c = model.make(std::move(v));
          if (!c.is_zero()) out.push_back(std::move(c));
        });
      }
    }
  }
  std::sort(out.begin(), out.end(), DivisorClass::lex_less);
  return out;
}

// ---------------------------------------------------------------------------
// Pencil-shift identities

/// Outcome of checking F.C = P.C - shift * K.C over an enumerated family.
struct IdentityReport {
  bool applicable = false;        // F = P - shift K holds as classes
  std::size_t checked = 0;        // classes examined
  std::size_t violations = 0;     // always 0 when applicable
  std::optional<Int> min_fibre;   // min F.C over the family
  std::optional<DivisorClass> argmin_fibre;
  std::optional<Int> min_pencil;  // min P.C over the family
};

/// Verify F = pencil - shift K, then check F.C against pencil.C - shift K.C
/// for every class of the query.
inline IdentityReport fibre_intersection_identity(const FibrationModel& fib, const DivisorClass& pencil, Int shift,
                                                  const ClassQuery& q) {
  const SurfaceModel& s = fib.surface();
  s.require_owned(pencil);
  const DivisorClass expected = pencil - shift * s.canonical();
  if (!(expected == fib.fibre_class())) throw LatticeError("identity inapplicable");
  IdentityReport rep;
  rep.applicable = true;
  for (const auto& c : enum_classes(s, q)) {
    const Int fc = intersect(s, fib.fibre_class(), c);
    const Int pc = intersect(s, pencil, c);
    const Int kc = canonical_degree(s, c);
    ++rep.checked;
    if (fc != checked::sub(pc, checked::mul(shift, kc))) ++rep.violations;
    if (!rep.min_fibre || fc < *rep.min_fibre) {
      rep.min_fibre = fc;
      rep.argmin_fibre = c;
    }
    if (!rep.min_pencil || pc < *rep.min_pencil) rep.min_pencil = pc;
  }
  return rep;
}

/// Pencil P and shift s with F = P - s K, P^2 = 0 and K.P = -2, if one exists.
/// From K.F = 2g - 2 this forces s = -(2g) / K^2.
struct PencilShift {
  DivisorClass pencil;
  Int shift;
};

inline std::optional<PencilShift> find_pencil_shift(const FibrationModel& fib) {
  const SurfaceModel& s = fib.surface();
  const Int k2 = self_intersection(s, s.canonical());
  if (k2 >= 0) return std::nullopt;
  const Int num = checked::mul(2, fib.genus());
  if (num % (-k2) != 0) return std::nullopt;
  const Int shift = num / (-k2);
  DivisorClass p = fib.fibre_class() + shift * s.canonical();
  if (self_intersection(s, p) != 0 || canonical_degree(s, p) != -2) return std::nullopt;
  return PencilShift{std::move(p), shift};
}

struct SectionVerdict {
  bool exists = false;
  std::vector<DivisorClass> witnesses;  // enumerated (-1)-classes with F.C = 1
  std::optional<Int> min_fibre;         // min F.C over enumerated (-1)-classes
  std::optional<PencilShift> decomposition;
  std::optional<IdentityReport> certificate;
  /// True when the pencil part meets every enumerated (-1)-class
  /// nonnegatively, so F.C >= shift is certified for all of them.
  bool lower_bound_certified = false;
};

/// Whether some enumerated (-1)-class meets F once. When F = P - s K with a
/// pencil P, also runs the identity check that bounds F.C below by s.
inline SectionVerdict minus_one_section_exists(const FibrationModel& fib, Int cap = 3) {
  const SurfaceModel& s = fib.surface();
  SectionVerdict v;
  for (const auto& c : enum_classes(s, minus_one_query(cap))) {
    const Int fc = intersect(s, fib.fibre_class(), c);
    if (!v.min_fibre || fc < *v.min_fibre) v.min_fibre = fc;
    if (fc == 1) v.witnesses.push_back(c);
  }
  v.exists = !v.witnesses.empty();
  v.decomposition = find_pencil_shift(fib);
  if (v.decomposition) {
    v.certificate = fibre_intersection_identity(fib, v.decomposition->pencil, v.decomposition->shift,
                                                minus_one_query(cap));
    v.lower_bound_certified = v.certificate->violations == 0 && v.certificate->min_pencil.has_value() &&
                              *v.certificate->min_pencil >= 0;
  }
  return v;
}

}  // namespace ratpencil
