#pragma once

// Neron-Severi lattices of blown-up planes and blown-up Hirzebruch surfaces.
//
// A SurfaceModel fixes a basis and its Gram matrix:
//   plane n=k        basis (l, e1..ek),        Gram diag(1, -1, ..., -1)
//   hirzebruch d, k  basis (D0, G, e1..ek),    D0^2 = -d, D0.G = 1, G^2 = 0
// DivisorClass values carry the id of the model whose basis they refer to;
// mixing classes from different models is an error.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ratpencil/checked.hpp"
#include "ratpencil/int_matrix.hpp"

namespace ratpencil {

class LatticeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ModelId = std::uint64_t;

inline ModelId next_model_id() {
  static std::atomic<ModelId> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

class DivisorClass {
 public:
  DivisorClass() = default;
  DivisorClass(ModelId owner, std::vector<Int> coords) : owner_(owner), coords_(std::move(coords)) {}

  ModelId owner() const { return owner_; }
  const std::vector<Int>& coords() const { return coords_; }
  std::size_t size() const { return coords_.size(); }
  Int operator[](std::size_t i) const { return coords_.at(i); }
  bool is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](Int c) { return c == 0; });
  }

  friend DivisorClass operator+(const DivisorClass& a, const DivisorClass& b) {
    require_same_owner(a, b);
    std::vector<Int> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = checked::add(a.coords_[i], b.coords_[i]);
    return {a.owner_, std::move(out)};
  }
  friend DivisorClass operator-(const DivisorClass& a, const DivisorClass& b) {
    require_same_owner(a, b);
    std::vector<Int> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = checked::sub(a.coords_[i], b.coords_[i]);
    return {a.owner_, std::move(out)};
  }
  friend DivisorClass operator-(const DivisorClass& a) { return checked_scale(-1, a); }
  friend DivisorClass operator*(Int k, const DivisorClass& a) { return checked_scale(k, a); }

  friend bool operator==(const DivisorClass&, const DivisorClass&) = default;

  /// Lexicographic order on coordinate vectors (owner ignored).
  static bool lex_less(const DivisorClass& a, const DivisorClass& b) {
    return std::lexicographical_compare(a.coords_.begin(), a.coords_.end(), b.coords_.begin(),
                                        b.coords_.end());
  }

  static void require_same_owner(const DivisorClass& a, const DivisorClass& b) {
    if (a.owner_ != b.owner_ || a.size() != b.size()) throw LatticeError("foreign class");
  }

 private:
  static DivisorClass checked_scale(Int k, const DivisorClass& a) {
    std::vector<Int> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = checked::mul(k, a.coords_[i]);
    return {a.owner_, std::move(out)};
  }

  ModelId owner_ = 0;
  std::vector<Int> coords_;
};

enum class Ambient { plane, hirzebruch };

class SurfaceModel {
 public:
  /// P^2 blown up at n points.
  static SurfaceModel plane(std::size_t n) { return SurfaceModel(Ambient::plane, 0, n); }
  /// Sigma_d blown up at n points.
  static SurfaceModel hirzebruch(Int d, std::size_t n) {
    if (d < 0) throw LatticeError("negative Hirzebruch degree");
    return SurfaceModel(Ambient::hirzebruch, d, n);
  }

  Ambient ambient() const { return ambient_; }
  bool is_plane() const { return ambient_ == Ambient::plane; }
  Int hirzebruch_degree() const { return d_; }
  std::size_t exceptional_count() const { return n_; }
  std::size_t exceptional_offset() const { return is_plane() ? 1 : 2; }
  std::size_t rank() const { return n_ + exceptional_offset(); }
  ModelId id() const { return id_; }
  const IntMatrix& gram() const { return gram_; }
  const DivisorClass& canonical() const { return canonical_; }

  DivisorClass make(std::vector<Int> coords) const {
    if (coords.size() != rank()) throw LatticeError("class has wrong length for " + describe());
    return {id_, std::move(coords)};
  }
  DivisorClass zero() const { return make(std::vector<Int>(rank(), 0)); }
  DivisorClass basis(std::size_t i) const {
    std::vector<Int> v(rank(), 0);
    v.at(i) = 1;
    return {id_, std::move(v)};
  }
  DivisorClass line() const {
    if (!is_plane()) throw LatticeError("line class requested on a Hirzebruch model");
    return basis(0);
  }
  DivisorClass min_section() const {
    if (is_plane()) throw LatticeError("minimal section requested on a plane model");
    return basis(0);
  }
  DivisorClass ruling_fibre() const {
    if (is_plane()) throw LatticeError("ruling fibre requested on a plane model");
    return basis(1);
  }
  /// Exceptional class e_i, 1-based as in the usual notation.
  DivisorClass exceptional(std::size_t i) const {
    if (i < 1 || i > n_) throw LatticeError("exceptional index out of range");
    return basis(exceptional_offset() + i - 1);
  }
  /// Fixed nef reference class H: l on planes, D0 + (d+1)G on Hirzebruch models.
  DivisorClass reference_nef() const {
    if (is_plane()) return line();
    std::vector<Int> v(rank(), 0);
    v[0] = 1;
    v[1] = checked::add(d_, 1);
    return make(std::move(v));
  }

  /// Inverse of the Gram matrix (all models here are unimodular).
  IntMatrix inverse_gram() const {
    IntMatrix inv(rank(), rank());
    std::size_t off = exceptional_offset();
    if (is_plane()) {
      inv(0, 0) = 1;
    } else {
      inv(0, 1) = inv(1, 0) = 1;
      inv(1, 1) = d_;
    }
    for (std::size_t i = off; i < rank(); ++i) inv(i, i) = -1;
    return inv;
  }

  std::string basis_label(std::size_t i) const {
    if (i < exceptional_offset()) {
      if (is_plane()) return "l";
      return i == 0 ? "D0" : "G";
    }
    return "e" + std::to_string(i - exceptional_offset() + 1);
  }

  std::string describe() const {
    std::ostringstream os;
    if (is_plane())
      os << "plane n=" << n_;
    else
      os << "hirzebruch d=" << d_ << " n=" << n_;
    return os.str();
  }

  /// Human-readable linear combination, e.g. "6l - 2e1 - e9".
  std::string format(const DivisorClass& c) const {
    require_owned(c);
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c.size(); ++i) {
      Int v = c[i];
      if (v == 0) continue;
      if (first) {
        if (v < 0) os << '-';
      } else {
        os << (v < 0 ? " - " : " + ");
      }
      const Int mag = v < 0 ? -v : v;
      if (mag != 1) os << mag;
      os << basis_label(i);
      first = false;
    }
    if (first) os << '0';
    return os.str();
  }

  void require_owned(const DivisorClass& c) const {
    if (c.owner() != id_ || c.size() != rank()) throw LatticeError("foreign class");
  }

  /// Same ambient kind, degree and exceptional count (ids may differ).
  bool same_shape(const SurfaceModel& o) const {
    return ambient_ == o.ambient_ && d_ == o.d_ && n_ == o.n_;
  }

 private:
  SurfaceModel(Ambient ambient, Int d, std::size_t n)
      : ambient_(ambient), d_(d), n_(n), id_(next_model_id()) {
    const std::size_t r = rank();
    gram_ = IntMatrix(r, r);
    std::vector<Int> k(r, 1);
    if (is_plane()) {
      gram_(0, 0) = 1;
      k[0] = -3;
    } else {
      gram_(0, 0) = -d;
      gram_(0, 1) = gram_(1, 0) = 1;
      k[0] = -2;
      k[1] = checked::neg(checked::add(d, 2));
    }
    for (std::size_t i = exceptional_offset(); i < r; ++i) gram_(i, i) = -1;
    canonical_ = DivisorClass(id_, std::move(k));
  }

  Ambient ambient_;
  Int d_;
  std::size_t n_;
  ModelId id_;
  IntMatrix gram_;
  DivisorClass canonical_;
};

/// Raw bilinear form on coordinate vectors of a model (no ownership check).
inline Int pair_coords(const SurfaceModel& model, const std::vector<Int>& x, const std::vector<Int>& y) {
  const IntMatrix& g = model.gram();
  Int total = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      const Int gij = g(i, j);
      if (gij == 0 || y[j] == 0) continue;
      total = checked::add(total, checked::mul(checked::mul(x[i], gij), y[j]));
    }
  }
  return total;
}

inline Int intersect(const SurfaceModel& model, const DivisorClass& c, const DivisorClass& d) {
  model.require_owned(c);
  model.require_owned(d);
  return pair_coords(model, c.coords(), d.coords());
}

inline Int self_intersection(const SurfaceModel& model, const DivisorClass& c) {
  return intersect(model, c, c);
}

/// K . c
inline Int canonical_degree(const SurfaceModel& model, const DivisorClass& c) {
  return intersect(model, model.canonical(), c);
}

/// p_a(c) = (c^2 + K.c)/2 + 1. Odd c^2 + K.c cannot happen for a genuine
/// lattice class, so it is reported as an error.
inline Int arithmetic_genus(const SurfaceModel& model, const DivisorClass& c) {
  const Int twice = checked::add(self_intersection(model, c), canonical_degree(model, c));
  if (twice % 2 != 0) throw LatticeError("non-integral genus");
  return checked::add(twice / 2, 1);
}

/// C^2 = -1 and K.C = -1.
inline bool is_minus_one_class(const SurfaceModel& model, const DivisorClass& c) {
  return self_intersection(model, c) == -1 && canonical_degree(model, c) == -1;
}

/// k with c = k K, if such an integer exists.
inline std::optional<Int> multiple_of_canonical(const SurfaceModel& model, const DivisorClass& c) {
  model.require_owned(c);
  const auto& k = model.canonical().coords();
  std::optional<Int> factor;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] == 0) {
      if (c[i] != 0) return std::nullopt;
      continue;
    }
    if (c[i] % k[i] != 0) return std::nullopt;
    const Int f = c[i] / k[i];
    if (factor && *factor != f) return std::nullopt;
    factor = f;
  }
  return factor;
}

// ---------------------------------------------------------------------------
// Fibrations

struct NamedClass {
  std::string name;
  DivisorClass cls;
};

struct FibreComponent {
  std::string name;
  DivisorClass cls;
  Int multiplicity = 1;
  std::optional<Int> self_int;  // printed label, checked by validate_fibre
  std::optional<Int> genus;
};

struct FibreDecomposition {
  std::string name;
  std::vector<FibreComponent> components;
};

/// A surface with a genus-g pencil |F|. F^2 = 0, K.F = 2g - 2 and every
/// listed section meets F once. checked() enforces these; unchecked() exists
/// so that verification code can be fed deliberately broken data.
class FibrationModel {
 public:
  static FibrationModel checked(SurfaceModel surface, DivisorClass fibre,
                                std::vector<NamedClass> sections = {},
                                std::vector<FibreDecomposition> fibres = {},
                                std::vector<NamedClass> named = {}) {
    FibrationModel m = unchecked(std::move(surface), std::move(fibre), std::move(sections),
                                 std::move(fibres), std::move(named));
    if (auto v = m.first_violation()) throw LatticeError(*v);
    return m;
  }

  static FibrationModel unchecked(SurfaceModel surface, DivisorClass fibre,
                                  std::vector<NamedClass> sections = {},
                                  std::vector<FibreDecomposition> fibres = {},
                                  std::vector<NamedClass> named = {}) {
    return FibrationModel(std::move(surface), std::move(fibre), std::move(sections), std::move(fibres),
                          std::move(named));
  }

  const SurfaceModel& surface() const { return surface_; }
  const DivisorClass& fibre_class() const { return fibre_; }
  const std::vector<NamedClass>& sections() const { return sections_; }
  const std::vector<FibreDecomposition>& fibres() const { return fibres_; }
  const std::vector<NamedClass>& named_classes() const { return named_; }

  /// Genus of the general fibre, from the genus formula applied to F.
  Int genus() const { return arithmetic_genus(surface_, fibre_); }

  std::optional<DivisorClass> find_named(const std::string& name) const {
    for (const auto& nc : named_)
      if (nc.name == name) return nc.cls;
    for (const auto& nc : sections_)
      if (nc.name == name) return nc.cls;
    return std::nullopt;
  }

  const FibreDecomposition* find_fibre(const std::string& name) const {
    for (const auto& f : fibres_)
      if (f.name == name) return &f;
    return nullptr;
  }

  /// First broken structural identity, if any.
  std::optional<std::string> first_violation() const {
    try {
      surface_.require_owned(fibre_);
      const Int f2 = self_intersection(surface_, fibre_);
      if (f2 != 0) return "F^2 = " + std::to_string(f2) + ", expected 0";
      const Int twice = canonical_degree(surface_, fibre_);
      if (twice % 2 != 0) return "K.F = " + std::to_string(twice) + " is odd";
      if (twice < 2) return "K.F = " + std::to_string(twice) + " gives genus below 2";
      for (const auto& s : sections_) {
        const Int fs = intersect(surface_, fibre_, s.cls);
        if (fs != 1) return "section " + s.name + " has F." + s.name + " = " + std::to_string(fs);
      }
      for (const auto& nc : named_) surface_.require_owned(nc.cls);
      for (const auto& fd : fibres_)
        for (const auto& c : fd.components) surface_.require_owned(c.cls);
    } catch (const LatticeError& e) {
      return std::string(e.what());
    }
    return std::nullopt;
  }

 private:
  FibrationModel(SurfaceModel surface, DivisorClass fibre, std::vector<NamedClass> sections,
                 std::vector<FibreDecomposition> fibres, std::vector<NamedClass> named)
      : surface_(std::move(surface)),
        fibre_(std::move(fibre)),
        sections_(std::move(sections)),
        fibres_(std::move(fibres)),
        named_(std::move(named)) {}

  SurfaceModel surface_;
  DivisorClass fibre_;
  std::vector<NamedClass> sections_;
  std::vector<FibreDecomposition> fibres_;
  std::vector<NamedClass> named_;
};

struct KPlusF {
  Int ksq;  // (K+F)^2
  Int rho;  // 4g + 6 - (K+F)^2
};

inline KPlusF selfint_k_plus_f(const FibrationModel& fib) {
  const auto& s = fib.surface();
  const DivisorClass kf = s.canonical() + fib.fibre_class();
  const Int ksq = self_intersection(s, kf);
  const Int rho = checked::sub(checked::add(checked::mul(4, fib.genus()), 6), ksq);
  return {ksq, rho};
}

// ---------------------------------------------------------------------------
// Basis changes

/// A change of basis into `target`: basis[i] holds the source coordinates of
/// the i-th basis vector of the target model. Valid changes are isometries
/// carrying the source canonical class to the target one.
struct BasisChange {
  SurfaceModel target;
  std::vector<std::vector<Int>> basis;
};

inline BasisChange identity_change(const SurfaceModel& model) {
  std::vector<std::vector<Int>> b;
  for (std::size_t i = 0; i < model.rank(); ++i) b.push_back(model.basis(i).coords());
  return {model, std::move(b)};
}

/// Re-express a source class in target coordinates: x' = G_t^{-1} (b_i . x)_i.
inline DivisorClass apply_change(const SurfaceModel& source, const BasisChange& change,
                                 const DivisorClass& x) {
  source.require_owned(x);
  const std::size_t r = change.target.rank();
  std::vector<Int> pairings(r);
  for (std::size_t i = 0; i < r; ++i) pairings[i] = pair_coords(source, change.basis[i], x.coords());
  const IntMatrix inv = change.target.inverse_gram();
  std::vector<Int> out(r, 0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      if (inv(i, j) != 0) out[i] = checked::add(out[i], checked::mul(inv(i, j), pairings[j]));
  return change.target.make(std::move(out));
}

/// Map target coordinates back to the source: x = sum t_i b_i.
inline DivisorClass lift_change(const SurfaceModel& source, const BasisChange& change,
                                const DivisorClass& t) {
  change.target.require_owned(t);
  std::vector<Int> out(source.rank(), 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == 0) continue;
    for (std::size_t j = 0; j < out.size(); ++j)
      out[j] = checked::add(out[j], checked::mul(t[i], change.basis[i][j]));
  }
  return source.make(std::move(out));
}

/// True when the change is an isometry carrying K to K.
inline bool is_valid_change(const SurfaceModel& source, const BasisChange& change) {
  const std::size_t r = change.target.rank();
  if (r != source.rank() || change.basis.size() != r) return false;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      if (pair_coords(source, change.basis[i], change.basis[j]) != change.target.gram()(i, j)) return false;
  return apply_change(source, change, source.canonical()).coords() == change.target.canonical().coords();
}

namespace detail {

/// Compose a step given as target vectors in the current frame's coordinates.
inline BasisChange compose(const BasisChange& frame, SurfaceModel next,
                           const std::vector<std::vector<Int>>& step) {
  std::vector<std::vector<Int>> basis;
  const std::size_t src_rank = frame.basis.empty() ? 0 : frame.basis.front().size();
  for (const auto& v : step) {
    std::vector<Int> out(src_rank, 0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == 0) continue;
      for (std::size_t j = 0; j < src_rank; ++j)
        out[j] = checked::add(out[j], checked::mul(v[i], frame.basis[i][j]));
    }
    basis.push_back(std::move(out));
  }
  return {std::move(next), std::move(basis)};
}

inline std::vector<Int> unit(std::size_t r, std::size_t i) {
  std::vector<Int> v(r, 0);
  v[i] = 1;
  return v;
}

/// Quadratic transformation centred at exceptional indices i, j, k (1-based).
inline BasisChange cremona_step(const BasisChange& frame, std::size_t i, std::size_t j, std::size_t k) {
  const SurfaceModel& m = frame.target;
  const std::size_t r = m.rank();
  std::vector<std::vector<Int>> step;
  for (std::size_t b = 0; b < r; ++b) step.push_back(unit(r, b));
  step[0] = unit(r, 0);
  step[0][0] = 2;
  step[0][i] = step[0][j] = step[0][k] = -1;
  auto line_minus = [&](std::size_t p, std::size_t q) {
    std::vector<Int> v(r, 0);
    v[0] = 1;
    v[p] = v[q] = -1;
    return v;
  };
  step[i] = line_minus(j, k);
  step[j] = line_minus(i, k);
  step[k] = line_minus(i, j);
  return compose(frame, SurfaceModel::plane(m.exceptional_count()), step);
}

/// Plane(n) viewed as Sigma_1 blown up at n-1 points: D0 = e1, G = l - e1.
inline BasisChange plane_to_hirzebruch(const BasisChange& frame) {
  const SurfaceModel& m = frame.target;
  const std::size_t r = m.rank();
  std::vector<std::vector<Int>> step;
  step.push_back(unit(r, 1));
  std::vector<Int> g = unit(r, 0);
  g[1] = -1;
  step.push_back(g);
  for (std::size_t b = 2; b < r; ++b) step.push_back(unit(r, b));
  return compose(frame, SurfaceModel::hirzebruch(1, m.exceptional_count() - 1), step);
}

/// Sigma_1 blown up at n points viewed as Plane(n+1): l = D0 + G, e1 = D0.
inline BasisChange hirzebruch1_to_plane(const BasisChange& frame) {
  const SurfaceModel& m = frame.target;
  const std::size_t r = m.rank();
  std::vector<std::vector<Int>> step;
  std::vector<Int> l = unit(r, 0);
  l[1] = 1;
  step.push_back(l);
  step.push_back(unit(r, 0));
  for (std::size_t b = 2; b < r; ++b) step.push_back(unit(r, b));
  return compose(frame, SurfaceModel::plane(m.exceptional_count() + 1), step);
}

/// Lattice form of the elementary transformation at exceptional index i
/// (1-based). Toward d-1 the blown-up point is off D0; toward d+1 it is on it.
inline BasisChange elementary_step(const BasisChange& frame, std::size_t i, bool toward_lower) {
  const SurfaceModel& m = frame.target;
  const std::size_t r = m.rank();
  const std::size_t ei = 1 + i;
  const Int d = m.hirzebruch_degree();
  if (toward_lower && d == 0) throw LatticeError("ruling choice required");
  std::vector<std::vector<Int>> step;
  for (std::size_t b = 0; b < r; ++b) step.push_back(unit(r, b));
  if (toward_lower) {
    step[0][1] = 1;
    step[0][ei] = -1;
  } else {
    step[0][ei] = -1;
  }
  step[ei] = unit(r, 1);
  step[ei][ei] = -1;
  const Int next_d = toward_lower ? d - 1 : d + 1;
  return compose(frame, SurfaceModel::hirzebruch(next_d, m.exceptional_count()), step);
}

inline BasisChange swap_rulings(const BasisChange& frame) {
  const SurfaceModel& m = frame.target;
  if (m.hirzebruch_degree() != 0) throw LatticeError("ruling swap needs d = 0");
  const std::size_t r = m.rank();
  std::vector<std::vector<Int>> step;
  step.push_back(unit(r, 1));
  step.push_back(unit(r, 0));
  for (std::size_t b = 2; b < r; ++b) step.push_back(unit(r, b));
  return compose(frame, SurfaceModel::hirzebruch(0, m.exceptional_count()), step);
}

/// Index of the exceptional basis vector equal to x, if x is one.
inline std::optional<std::size_t> exceptional_unit_index(const SurfaceModel& m, const std::vector<Int>& x) {
  std::optional<std::size_t> hit;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    if (x[i] != 1 || i < m.exceptional_offset() || hit) return std::nullopt;
    hit = i;
  }
  return hit;
}

}  // namespace detail

/// Result of searching for a basis in which a (-1)-class is a basis vector.
struct ExceptionalFrame {
  BasisChange change;
  std::size_t index;  // coordinate position of the class in change.target
};

/// Bounded search for an integral isometry (Cremona reflections, index
/// permutations, elementary transformations, plane/Sigma_1 identifications)
/// bringing the (-1)-class e to an exceptional basis vector.
inline ExceptionalFrame find_exceptional_frame(const SurfaceModel& model, const DivisorClass& e,
                                               int max_steps = 64) {
  if (!is_minus_one_class(model, e)) throw LatticeError("not contractible: not a (-1)-class");
  BasisChange frame = identity_change(model);
  auto current = [&]() { return apply_change(model, frame, e).coords(); };

  if (auto idx = detail::exceptional_unit_index(model, e.coords())) return {frame, *idx};

  if (!model.is_plane()) {
    const std::size_t r = model.rank();
    const auto& x = e.coords();
    // G - e_i: the elementary transformation at e_i swaps the two curves.
    // On Sigma_0, D0 - e_i is the same situation for the other ruling.
    for (std::size_t i = 1; i <= model.exceptional_count(); ++i) {
      std::vector<Int> g_minus = detail::unit(r, 1);
      g_minus[1 + i] = -1;
      std::vector<Int> d_minus = detail::unit(r, 0);
      d_minus[1 + i] = -1;
      if (x == g_minus) {
        frame = detail::elementary_step(frame, i, model.hirzebruch_degree() >= 1);
        return {frame, 1 + i};
      }
      if (model.hirzebruch_degree() == 0 && x == d_minus) {
        frame = detail::swap_rulings(frame);
        frame = detail::elementary_step(frame, i, false);
        return {frame, 1 + i};
      }
    }
    // Otherwise pass to a plane model.
    if (model.exceptional_count() == 0 && model.hirzebruch_degree() != 1)
      throw LatticeError("not contractible: no exceptional curve on a minimal ruled surface");
    while (frame.target.hirzebruch_degree() != 1) {
      frame = detail::elementary_step(frame, 1, frame.target.hirzebruch_degree() >= 2);
    }
    frame = detail::hirzebruch1_to_plane(frame);
  }

  for (int step = 0; step <= max_steps; ++step) {
    const std::vector<Int> x = current();
    if (auto idx = detail::exceptional_unit_index(frame.target, x)) return {frame, *idx};
    const std::size_t n = frame.target.exceptional_count();
    if (n == 2 && x == std::vector<Int>{1, -1, -1}) {
      // l - e1 - e2 on Plane(2): contracting it leaves P1 x P1.
      std::vector<std::vector<Int>> to_sigma0 = {{1, -1, 0}, {1, 0, -1}, {1, -1, -1}};
      frame = detail::compose(frame, SurfaceModel::hirzebruch(0, 1), to_sigma0);
      return {frame, 2};
    }
    if (n < 3 || x[0] <= 0) break;
    // Three largest multiplicities (multiplicity = minus the coordinate).
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i + 1;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return -x[a] > -x[b]; });
    const Int excess = checked::sub(x[0], checked::neg(checked::add(checked::add(x[idx[0]], x[idx[1]]), x[idx[2]])));
    if (excess >= 0) break;  // the quadratic transform would not lower the degree
    frame = detail::cremona_step(frame, idx[0], idx[1], idx[2]);
  }
  throw LatticeError("not contractible: no isometry to a basis vector found within search depth");
}

struct BlowDownResult {
  SurfaceModel model;                 // contracted surface
  std::vector<DivisorClass> classes;  // pushforwards, in input order
  ExceptionalFrame frame;             // basis in which e was a basis vector

  /// Pull a class on the contracted surface back to the original model.
  DivisorClass pullback_to(const SurfaceModel& source, const DivisorClass& y) const {
    model.require_owned(y);
    std::vector<Int> t;
    t.reserve(y.size() + 1);
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (i == frame.index) t.push_back(0);
      t.push_back(y[i]);
    }
    if (frame.index == y.size()) t.push_back(0);
    return lift_change(source, frame.change, frame.change.target.make(std::move(t)));
  }
};

/// Contract the (-1)-class e and push the given classes forward.
inline BlowDownResult blow_down(const SurfaceModel& model, const DivisorClass& e,
                                const std::vector<DivisorClass>& classes) {
  model.require_owned(e);
  if (!is_minus_one_class(model, e)) throw LatticeError("not contractible");
  ExceptionalFrame frame = find_exceptional_frame(model, e);
  if (!is_valid_change(model, frame.change)) throw LatticeError("internal: invalid basis change");
  const SurfaceModel& t = frame.change.target;
  std::optional<SurfaceModel> contracted;
  if (t.is_plane()) {
    contracted = SurfaceModel::plane(t.exceptional_count() - 1);
  } else {
    contracted = SurfaceModel::hirzebruch(t.hirzebruch_degree(), t.exceptional_count() - 1);
  }
  std::vector<DivisorClass> out;
  out.reserve(classes.size());
  for (const auto& c : classes) {
    auto coords = apply_change(model, frame.change, c).coords();
    coords.erase(coords.begin() + static_cast<std::ptrdiff_t>(frame.index));
    out.push_back(contracted->make(std::move(coords)));
  }
  return {std::move(*contracted), std::move(out), std::move(frame)};
}

/// Blow up one more point: the new model has an extra exceptional class at the end.
inline SurfaceModel blow_up(const SurfaceModel& model) {
  return model.is_plane() ? SurfaceModel::plane(model.exceptional_count() + 1)
                          : SurfaceModel::hirzebruch(model.hirzebruch_degree(), model.exceptional_count() + 1);
}

/// Total transform of a class under blow_up(model).
inline DivisorClass pullback(const SurfaceModel& model, const SurfaceModel& blown_up, const DivisorClass& c) {
  model.require_owned(c);
  auto coords = c.coords();
  coords.push_back(0);
  return blown_up.make(std::move(coords));
}

// ---------------------------------------------------------------------------
// Hirzebruch curve data and plane Cremona maps

/// Class alpha D0 + beta G on Sigma_d.
struct RuledClass {
  Int alpha;
  Int beta;
  friend bool operator==(const RuledClass&, const RuledClass&) = default;
};

struct ElementaryResult {
  Int d;
  RuledClass cls;
  Int new_point_multiplicity;  // multiplicity at the point created by the transform
};

/// Elementary transformation at a point of multiplicity `mult` on a curve of
/// class cls on Sigma_d. A point on the minimal section leads to Sigma_{d+1},
/// any other point to Sigma_{d-1}.
inline ElementaryResult elementary_transform(Int d, RuledClass cls, Int mult, bool on_minimal_section) {
  if (d < 0) throw LatticeError("negative Hirzebruch degree");
  if (mult < 0 || mult > cls.alpha) throw LatticeError("multiplicity outside [0, alpha]");
  if (!on_minimal_section && d == 0) throw LatticeError("ruling choice required");
  const Int new_mult = checked::sub(cls.alpha, mult);
  if (on_minimal_section) {
    return {d + 1, {cls.alpha, checked::sub(checked::add(cls.beta, cls.alpha), mult)}, new_mult};
  }
  return {d - 1, {cls.alpha, checked::sub(cls.beta, mult)}, new_mult};
}

/// Quadratic transformation of P^2 centred at e_i, e_j, e_k: the reflection
/// in l - e_i - e_j - e_k applied to every class.
inline std::vector<DivisorClass> cremona(const SurfaceModel& model, std::size_t i, std::size_t j, std::size_t k,
                                         const std::vector<DivisorClass>& classes) {
  if (!model.is_plane()) throw LatticeError("Cremona transformation needs a plane model");
  const std::size_t n = model.exceptional_count();
  if (i == j || j == k || i == k) throw LatticeError("Cremona centres must be distinct");
  for (std::size_t v : {i, j, k})
    if (v < 1 || v > n) throw LatticeError("Cremona centre out of range");
  std::vector<DivisorClass> out;
  out.reserve(classes.size());
  for (const auto& c : classes) {
    model.require_owned(c);
    auto x = c.coords();
    // x . r with r = l - e_i - e_j - e_k, using e-coordinates directly: e-coef is -mult.
    const Int xr = checked::add(x[0], checked::add(checked::add(x[i], x[j]), x[k]));
    x[0] = checked::add(x[0], xr);
    for (std::size_t v : {i, j, k}) x[v] = checked::sub(x[v], xr);
    out.push_back(model.make(std::move(x)));
  }
  return out;
}

}  // namespace ratpencil
