#pragma once

// Reducible fibres: validation of printed decompositions, dual graphs, ADE
// recognition, the Shioda rank count, and the orthogonal-basis certificate
// for a trivial Mordell-Weil group.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ratpencil/int_matrix.hpp"
#include "ratpencil/lattice.hpp"

namespace ratpencil {

struct FibreReport {
  bool ok = true;
  std::string failure;                 // first violated identity
  std::vector<Int> residual;           // sum - F when the sum check fails
  bool semidefinite = false;
  bool fibre_in_radical = false;
};

/// Sum of multiplicity * class, F.Theta = 0, pairwise intersections >= 0,
/// printed self-intersection/genus labels, and negative semidefiniteness.
inline FibreReport validate_fibre(const FibrationModel& fib, const FibreDecomposition& dec) {
  const SurfaceModel& s = fib.surface();
  FibreReport rep;
  auto fail = [&](std::string why) {
    if (rep.ok) {
      rep.ok = false;
      rep.failure = std::move(why);
    }
  };
  DivisorClass sum = s.zero();
  for (const auto& c : dec.components) {
    s.require_owned(c.cls);
    if (c.multiplicity < 1) fail(dec.name + ": component " + c.name + " has nonpositive multiplicity");
    sum = sum + c.multiplicity * c.cls;
  }
  if (!(sum == fib.fibre_class())) {
    const DivisorClass diff = sum - fib.fibre_class();
    rep.residual = diff.coords();
    fail(dec.name + ": decomposition does not sum to F (residual " + s.format(diff) + ")");
  }
  for (const auto& c : dec.components) {
    const Int ci = self_intersection(s, c.cls);
    if (c.self_int && *c.self_int != ci)
      fail(dec.name + ": " + c.name + "^2 = " + std::to_string(ci) + ", labelled " + std::to_string(*c.self_int));
    if (c.genus) {
      Int pa = 0;
      try {
        pa = arithmetic_genus(s, c.cls);
      } catch (const LatticeError&) {
        fail(dec.name + ": " + c.name + " has non-integral genus");
        continue;
      }
      if (pa != *c.genus)
        fail(dec.name + ": genus of " + c.name + " is " + std::to_string(pa) + ", labelled " +
             std::to_string(*c.genus));
    }
  }
  const std::size_t k = dec.components.size();
  IntMatrix neg(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const Int v = intersect(s, dec.components[i].cls, dec.components[j].cls);
      neg(i, j) = -v;
      if (i < j && v < 0)
        fail(dec.name + ": " + dec.components[i].name + "." + dec.components[j].name + " = " + std::to_string(v) +
             " < 0");
    }
  rep.semidefinite = is_positive_semidefinite(neg);
  if (!rep.semidefinite) fail(dec.name + ": component Gram is not negative semidefinite");
  rep.fibre_in_radical = true;
  for (const auto& c : dec.components) {
    const Int fc = intersect(s, fib.fibre_class(), c.cls);
    if (fc != 0) {
      rep.fibre_in_radical = false;
      fail(dec.name + ": F." + c.name + " = " + std::to_string(fc) + ", expected 0");
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Dual graphs

struct GraphNode {
  std::string name;
  Int self_int;
  Int genus;
  Int multiplicity = 1;
};

struct GraphEdge {
  std::size_t i;
  std::size_t j;
  Int weight;
};

struct DualGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;  // i < j, weight > 0

  Int weight(std::size_t i, std::size_t j) const {
    for (const auto& e : edges)
      if ((e.i == i && e.j == j) || (e.i == j && e.j == i)) return e.weight;
    return 0;
  }
  std::size_t degree(std::size_t i) const {
    std::size_t d = 0;
    for (const auto& e : edges)
      if (e.i == i || e.j == i) ++d;
    return d;
  }
  bool connected() const {
    if (nodes.empty()) return true;
    std::vector<bool> seen(nodes.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (const auto& e : edges) {
        std::size_t w = e.i == v ? e.j : (e.j == v ? e.i : nodes.size());
        if (w < nodes.size() && !seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  }
};

inline DualGraph dual_graph(const FibrationModel& fib, const FibreDecomposition& dec) {
  const SurfaceModel& s = fib.surface();
  DualGraph g;
  for (const auto& c : dec.components) {
    Int pa = 0;
    try {
      pa = arithmetic_genus(s, c.cls);
    } catch (const LatticeError&) {
      pa = -1;
    }
    g.nodes.push_back({c.name, self_intersection(s, c.cls), pa, c.multiplicity});
  }
  for (std::size_t i = 0; i < dec.components.size(); ++i)
    for (std::size_t j = i + 1; j < dec.components.size(); ++j) {
      const Int w = intersect(s, dec.components[i].cls, dec.components[j].cls);
      if (w > 0) g.edges.push_back({i, j, w});
    }
  return g;
}

/// DOT rendering. Elliptic components get a double border.
inline std::string to_dot(const DualGraph& g, const std::string& name) {
  std::ostringstream os;
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  os << "graph " << quote(name) << " {\n";
  os << "  node [shape=circle];\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& n = g.nodes[i];
    os << "  n" << i << " [label=" << quote(n.name + " (" + std::to_string(n.self_int) + ")");
    if (n.multiplicity != 1) os << ", xlabel=" << quote(std::to_string(n.multiplicity));
    if (n.genus == 1) os << ", peripheries=2";
    os << "];\n";
  }
  for (const auto& e : g.edges) {
    os << "  n" << e.i << " -- n" << e.j;
    if (e.weight != 1) os << " [label=" << quote(std::to_string(e.weight)) << "]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// ADE recognition

struct AdeComponent {
  std::vector<std::size_t> nodes;  // indices into the input graph
  std::string label;               // "A_3", "E_8", "~D_4", or "unclassified"
};

/// Label a connected simple graph on its own (adjacency lists).
inline std::string ade_label(const std::vector<std::vector<std::size_t>>& adj, bool multi_edge) {
  const std::size_t n = adj.size();
  if (multi_edge) return "unclassified";
  std::size_t edges = 0;
  for (const auto& a : adj) edges += a.size();
  edges /= 2;
  if (edges == n) {
    // Connected with one cycle: affine A only when the cycle is everything.
    for (const auto& a : adj)
      if (a.size() != 2) return "unclassified";
    return "~A_" + std::to_string(n - 1);
  }
  if (edges != n - 1) return "unclassified";
  std::vector<std::size_t> branch;
  for (std::size_t i = 0; i < n; ++i) {
    if (adj[i].size() > 4) return "unclassified";
    if (adj[i].size() >= 3) branch.push_back(i);
  }
  if (branch.empty()) return "A_" + std::to_string(n);
  // Length of the arm starting at `next` coming from `from`, stopping at a branch node.
  auto arm = [&](std::size_t from, std::size_t next, std::size_t& end) {
    std::size_t len = 1;
    while (adj[next].size() == 2) {
      const std::size_t nn = adj[next][0] == from ? adj[next][1] : adj[next][0];
      from = next;
      next = nn;
      ++len;
    }
    end = next;
    return len;
  };
  if (branch.size() == 1) {
    const std::size_t c = branch[0];
    std::vector<std::size_t> arms;
    for (std::size_t w : adj[c]) {
      std::size_t end;
      arms.push_back(arm(c, w, end));
    }
    std::sort(arms.begin(), arms.end());
    if (arms.size() == 4) return arms == std::vector<std::size_t>{1, 1, 1, 1} ? "~D_4" : "unclassified";
    const std::size_t p = arms[0], q = arms[1], r = arms[2];
    if (p == 1 && q == 1) return "D_" + std::to_string(r + 3);
    if (p == 1 && q == 2 && r == 2) return "E_6";
    if (p == 1 && q == 2 && r == 3) return "E_7";
    if (p == 1 && q == 2 && r == 4) return "E_8";
    if (p == 2 && q == 2 && r == 2) return "~E_6";
    if (p == 1 && q == 3 && r == 3) return "~E_7";
    if (p == 1 && q == 2 && r == 5) return "~E_8";
    return "unclassified";
  }
  if (branch.size() == 2) {
    // Affine D_n: two degree-3 nodes joined by a path, each carrying two leaves.
    for (std::size_t b : branch) {
      if (adj[b].size() != 3) return "unclassified";
      std::size_t leaves = 0;
      for (std::size_t w : adj[b])
        if (adj[w].size() == 1) ++leaves;
      if (leaves != 2) return "unclassified";
    }
    return "~D_" + std::to_string(n - 1);
  }
  return "unclassified";
}

/// Connected components of the subgraph on (-2)-curves of genus 0, each labelled.
inline std::vector<AdeComponent> ade_classify(const DualGraph& g) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    if (g.nodes[i].self_int == -2 && g.nodes[i].genus == 0) keep.push_back(i);
  std::vector<AdeComponent> out;
  std::set<std::size_t> done;
  for (std::size_t start : keep) {
    if (done.count(start)) continue;
    std::vector<std::size_t> comp{start};
    done.insert(start);
    for (std::size_t k = 0; k < comp.size(); ++k)
      for (const auto& e : g.edges) {
        std::size_t w = e.i == comp[k] ? e.j : (e.j == comp[k] ? e.i : g.nodes.size());
        if (w == g.nodes.size() || done.count(w)) continue;
        if (std::find(keep.begin(), keep.end(), w) == keep.end()) continue;
        done.insert(w);
        comp.push_back(w);
      }
    std::sort(comp.begin(), comp.end());
    std::vector<std::vector<std::size_t>> adj(comp.size());
    bool multi = false;
    for (const auto& e : g.edges) {
      auto ia = std::find(comp.begin(), comp.end(), e.i);
      auto ib = std::find(comp.begin(), comp.end(), e.j);
      if (ia == comp.end() || ib == comp.end()) continue;
      if (e.weight > 1) multi = true;
      const auto a = static_cast<std::size_t>(ia - comp.begin());
      const auto b = static_cast<std::size_t>(ib - comp.begin());
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    out.push_back({comp, ade_label(adj, multi)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mordell-Weil rank and trivial-lattice certificates

class FibreDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// rho - 2 - sum (components - 1).
inline Int shioda_rank(Int rho, const std::vector<Int>& component_counts) {
  if (rho < 2) throw FibreDataError("inconsistent fibre data: rho < 2");
  Int r = rho - 2;
  for (Int c : component_counts) {
    if (c < 1) throw FibreDataError("inconsistent fibre data: component count < 1");
    r -= c - 1;
  }
  if (r < 0) throw FibreDataError("inconsistent fibre data");
  return r;
}

struct DecompositionReport {
  bool ok = false;
  std::string message;
  Int determinant = 0;
  std::size_t rank = 0;
};

/// Blocks must be pairwise orthogonal, the first block must be {F, section},
/// and together they must form a Z-basis of the lattice.
inline DecompositionReport orthogonal_decomposition_check(const FibrationModel& fib,
                                                         const std::vector<std::vector<NamedClass>>& blocks) {
  const SurfaceModel& s = fib.surface();
  DecompositionReport rep;
  if (blocks.empty() || blocks.front().size() != 2) {
    rep.message = "first block must be (F, section)";
    return rep;
  }
  const auto& first = blocks.front();
  if (!(first[0].cls == fib.fibre_class())) {
    rep.message = "first block does not start with F";
    return rep;
  }
  if (intersect(s, first[0].cls, first[1].cls) != 1) {
    rep.message = "second class of the first block is not a section";
    return rep;
  }
  for (std::size_t x = 0; x < blocks.size(); ++x)
    for (std::size_t y = x + 1; y < blocks.size(); ++y)
      for (const auto& p : blocks[x])
        for (const auto& q : blocks[y]) {
          s.require_owned(p.cls);
          s.require_owned(q.cls);
          const Int v = intersect(s, p.cls, q.cls);
          if (v != 0) {
            rep.message = "blocks not orthogonal: " + p.name + "." + q.name + " = " + std::to_string(v);
            return rep;
          }
        }
  std::vector<std::vector<Int>> rows;
  for (const auto& b : blocks)
    for (const auto& c : b) rows.push_back(c.cls.coords());
  rep.rank = rows.size();
  if (rows.size() != s.rank()) {
    rep.message = "not a basis: " + std::to_string(rows.size()) + " classes for rank " + std::to_string(s.rank());
    return rep;
  }
  rep.determinant = determinant(IntMatrix::from_rows(rows));
  if (rep.determinant != 1 && rep.determinant != -1) {
    rep.message = "not a basis: index " + std::to_string(rep.determinant < 0 ? -rep.determinant : rep.determinant);
    return rep;
  }
  rep.ok = true;
  rep.message = "trivial Mordell-Weil certificate";
  return rep;
}

struct ComplementLattice {
  std::vector<DivisorClass> basis;
  IntMatrix gram;
  Int discriminant = 0;  // |det gram|, 1 for rank 0
};

/// Orthogonal complement of the span of `sub`, read off an integer kernel.
inline ComplementLattice complement_lattice(const SurfaceModel& model, const std::vector<DivisorClass>& sub) {
  std::vector<std::vector<Int>> rows;
  for (const auto& c : sub) {
    model.require_owned(c);
    rows.push_back(c.coords());
  }
  const std::size_t r = model.rank();
  if (!rows.empty()) {
    if (matrix_rank(IntMatrix::from_rows(rows)) != rows.size())
      throw LatticeError("dependent input to complement_lattice");
  }
  // x is orthogonal to c when (c^T Gram) x = 0.
  IntMatrix constraints = rows.empty() ? IntMatrix(0, r) : IntMatrix::from_rows(rows) * model.gram();
  const IntMatrix ker = integer_kernel(constraints);
  ComplementLattice out;
  for (std::size_t j = 0; j < ker.cols(); ++j) out.basis.push_back(model.make(ker.col(j)));
  const std::size_t k = out.basis.size();
  out.gram = IntMatrix(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) out.gram(i, j) = intersect(model, out.basis[i], out.basis[j]);
  const Int det = determinant(out.gram);
  out.discriminant = det < 0 ? -det : det;
  return out;
}

/// Whether `classes` is a Z-basis of the (unimodular) complement lattice:
/// each class is rebuilt from its coordinates in the complement basis, and
/// the coordinate matrix must be unimodular.
inline bool spans_equal(const SurfaceModel& model, const std::vector<DivisorClass>& classes,
                        const ComplementLattice& lattice) {
  const std::size_t k = lattice.basis.size();
  if (classes.size() != k) return false;
  if (lattice.discriminant != 1) throw LatticeError("span comparison needs a unimodular complement");
  std::vector<std::vector<Int>> coords;
  for (const auto& cls : classes) {
    // Solve gram * y = (cls . basis_r)_r over the rationals.
    std::vector<std::vector<Rational>> aug(k, std::vector<Rational>(k + 1));
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) aug[r][c] = lattice.gram(r, c);
      aug[r][k] = intersect(model, cls, lattice.basis[r]);
    }
    for (std::size_t col = 0; col < k; ++col) {
      std::size_t p = col;
      while (p < k && aug[p][col] == Rational(0)) ++p;
      if (p == k) return false;
      std::swap(aug[p], aug[col]);
      for (std::size_t r = 0; r < k; ++r) {
        if (r == col || aug[r][col] == Rational(0)) continue;
        const Rational f = aug[r][col] / aug[col][col];
        for (std::size_t c = col; c <= k; ++c) aug[r][c] -= f * aug[col][c];
      }
    }
    std::vector<Int> y(k);
    DivisorClass rebuilt = model.zero();
    for (std::size_t r = 0; r < k; ++r) {
      const Rational v = aug[r][k] / aug[r][r];
      if (!v.is_integer()) return false;
      y[r] = v.num();
      rebuilt = rebuilt + y[r] * lattice.basis[r];
    }
    if (!(rebuilt == cls)) return false;
    coords.push_back(std::move(y));
  }
  if (k == 0) return true;
  const Int det = determinant(IntMatrix::from_rows(coords));
  return det == 1 || det == -1;
}

}  // namespace ratpencil
