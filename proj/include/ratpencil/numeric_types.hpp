#pragma once

// Numerical types of #-minimal models: the exact feasibility search, the
// lower bounds used to prune it, the special-type search, the finite check
// excluding the (8, 0, 9, 5^7 4 3) pattern, and branch-count arithmetic.
//
// b-check may be a half-integer when a is odd, so it is stored doubled.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ratpencil/checked.hpp"

namespace ratpencil {

/// (a, 2b-check, multiplicities, (K+F)^2) of a general-type #-minimal model.
struct NumericType {
  Int a = 0;
  Int twice_b_check = 0;
  std::vector<Int> mults;  // non-increasing, each >= 2
  Int ksq = 0;
  std::vector<Int> admissible_d;  // d in {0,1,2} compatible with (#1)/(#2)

  Int N() const { return static_cast<Int>(mults.size()); }

  /// 2g = (a+1)(2a+2+2b) - sum m(m-1)
  Int twice_genus() const {
    Int s = checked::mul(a + 1, 2 * a + 2 + twice_b_check);
    for (Int m : mults) s = checked::sub(s, checked::mul(m, m - 1));
    return s;
  }
  /// (K+G)^2 = a(2a+2b) - sum (m-1)^2
  Int ksq_formula() const {
    Int s = checked::mul(a, 2 * a + twice_b_check);
    for (Int m : mults) s = checked::sub(s, checked::mul(m - 1, m - 1));
    return s;
  }
  /// G^2 = (a+2)(2a+4+2b) - sum m^2
  Int pencil_square() const {
    Int s = checked::mul(a + 2, 2 * a + 4 + twice_b_check);
    for (Int m : mults) s = checked::sub(s, checked::mul(m, m));
    return s;
  }
  /// A (-1)-section survives the reduction exactly when the pencil has base points.
  bool has_minus_one_section() const { return pencil_square() > 0; }

  /// "(a, b, N, m..., ksq)" with b printed as an integer or half-integer.
  std::string tuple_string() const {
    std::ostringstream os;
    os << '(' << a << ", " << Rational(twice_b_check, 2) << ", " << N();
    for (Int m : mults) os << ", " << m;
    os << ", " << ksq << ')';
    return os.str();
  }

  friend bool operator==(const NumericType& x, const NumericType& y) {
    return x.a == y.a && x.twice_b_check == y.twice_b_check && x.mults == y.mults && x.ksq == y.ksq;
  }
};

/// Values of d in {0,1,2} for which b is integral and (#1), (#2) hold.
inline std::vector<Int> admissible_degrees(Int a, Int twice_b_check, const std::vector<Int>& mults) {
  std::vector<Int> out;
  const Int m1 = mults.empty() ? 0 : mults.front();
  for (Int d = 0; d <= 2; ++d) {
    const Int twice_b = checked::add(twice_b_check, checked::mul(d + 2, a + 2));
    if (twice_b % 2 != 0) continue;
    const Int b = twice_b / 2;
    if (d > 0 && b < (a + 2) * d) continue;
    if (d == 0 && b < a + 2) continue;
    if (2 * m1 > a + 2) continue;
    if (d == 1 && m1 > b - (a + 2)) continue;
    out.push_back(d);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lower bounds for (K_Y+G)^2

/// Bound from known leading multiplicities m_1..m_n when m_{n+1} <= m <= m_n:
///   2(m-1)/m (g - (a+1)(a+1+b) + 1/2 sum m_i(m_i-1)) + 2a(a+b) - sum (m_i-1)^2
inline Rational bound_known_prefix(Int g, Int a, Int twice_b_check, const std::vector<Int>& prefix, Int m) {
  if (m == 0) throw std::domain_error("bound undefined for m = 0");
  const Rational b(twice_b_check, 2);
  Rational inner = Rational(g) - Rational(a + 1) * (Rational(a + 1) + b);
  Rational tail = Rational(2 * a) * (Rational(a) + b);
  for (Int mi : prefix) {
    inner += Rational(mi * (mi - 1), 2);
    tail -= Rational((mi - 1) * (mi - 1));
  }
  return Rational(2 * (m - 1), m) * inner + tail;
}

/// Leading n multiplicities at their maximum (a+2)/2, a even:
///   2(m-1)/m (g - (a+1)(a+1+b) + n a(a+2)/8) + 2a(a+b) - n a^2/4
inline Rational bound_max_mult_prefix(Int g, Int a, Int twice_b_check, Int n, Int m) {
  if (a % 2 != 0) throw std::domain_error("bound needs a even");
  if (m == 0) throw std::domain_error("bound undefined for m = 0");
  const Rational b(twice_b_check, 2);
  const Rational inner = Rational(g) - Rational(a + 1) * (Rational(a + 1) + b) + Rational(n * a * (a + 2), 8);
  return Rational(2 * (m - 1), m) * inner + Rational(2 * a) * (Rational(a) + b) - Rational(n * a * a, 4);
}

/// Equality in bound_max_mult_prefix forces m_n = (a+2)/2 and m_N = m.
struct EqualityConditions {
  Int m_n;
  Int m_N;
};
inline EqualityConditions max_mult_prefix_equality(Int a, Int m) { return {(a + 2) / 2, m}; }

/// n = 0, m = (a+2)/2 specialization: 2a(g-1+b)/(a+2).
inline Rational bound_max_mult_simple(Int g, Int a, Int twice_b_check) {
  return Rational(2 * a) * (Rational(g - 1) + Rational(twice_b_check, 2)) / Rational(a + 2);
}

/// General type, a odd: 2g(a-1)/(a+1) + 2.
inline Rational bound_odd_general(Int g, Int a) {
  if (a % 2 == 0) throw std::domain_error("bound needs a odd");
  return Rational(2 * g * (a - 1), a + 1) + Rational(2);
}

/// Special type, a even, g < a(a+3)/2: 2g(a-2)/a + 4.
inline std::optional<Rational> bound_special_even(Int g, Int a) {
  if (a % 2 != 0 || a == 0) throw std::domain_error("bound needs a even and positive");
  if (!(2 * g < a * (a + 3))) return std::nullopt;
  return Rational(2 * g * (a - 2), a) + Rational(4);
}

/// Special type, a odd, g < (a+1)(a+2)/2: 2g(a-1)/(a+1) + 1.
inline std::optional<Rational> bound_special_odd(Int g, Int a) {
  if (a % 2 == 0) throw std::domain_error("bound needs a odd");
  if (!(2 * g < (a + 1) * (a + 2))) return std::nullopt;
  return Rational(2 * g * (a - 1), a + 1) + Rational(1);
}

/// Genus two, a even: 3 + 2a(b-1)/(a+2) + (a-6)/(a+2).
inline Rational bound_genus_two_even(Int a, Int twice_b_check) {
  return Rational(3) + Rational(2 * a) * (Rational(twice_b_check, 2) - Rational(1)) / Rational(a + 2) +
         Rational(a - 6, a + 2);
}

/// Special type: G^2 >= (a+2)^2 + 2 m0 (a+2) - N m0^2.
inline Int special_pencil_square_floor(Int a, Int m0, Int n) {
  return checked::sub(checked::add(checked::mul(a + 2, a + 2), checked::mul(2 * m0, a + 2)), checked::mul(n, m0 * m0));
}

/// Valid lower bound for every a: since (m-1)/m grows with m and m <= M,
/// sum (m-1)^2 <= (M-1)/M sum m(m-1). For a even this is bound_max_mult_simple.
inline Rational bound_ratio(Int g, Int a, Int twice_b_check) {
  const Int big_m = (a + 2) / 2;
  const Int s1 = checked::sub(checked::mul(a + 1, 2 * a + 2 + twice_b_check), 2 * g);
  return Rational(checked::mul(a, 2 * a + twice_b_check)) - Rational(big_m - 1, big_m) * Rational(s1);
}

// ---------------------------------------------------------------------------
// Search

struct SearchLimits {
  Int a_max;    // 2g + 6
  Int n_max;    // 4g + 4
  static SearchLimits for_genus(Int g) { return {2 * g + 6, 4 * g + 4}; }
};

struct SearchResult {
  std::vector<NumericType> types;
  bool a_ceiling_hit = false;  // a solution sits at the a ceiling
};

namespace detail {

/// Non-increasing multisets in [2, top] with sum m(m-1) = target, at most
/// n_max entries and sum m^2 <= sq_cap.
inline void multisets(Int top, Int target, Int n_max, Int sq_cap, std::vector<Int>& cur,
                      const std::function<void(const std::vector<Int>&)>& emit) {
  if (target == 0) {
    emit(cur);
    return;
  }
  if (static_cast<Int>(cur.size()) >= n_max) return;
  for (Int m = std::min(top, cur.empty() ? top : cur.back()); m >= 2; --m) {
    const Int w = m * (m - 1);
    if (w > target || m * m > sq_cap) continue;
    // Remaining slots must be able to absorb what is left.
    const Int slots = n_max - static_cast<Int>(cur.size());
    if (w * slots < target) break;
    cur.push_back(m);
    multisets(m, target - w, n_max, sq_cap - m * m, cur, emit);
    cur.pop_back();
  }
}

inline bool type_less(const NumericType& x, const NumericType& y) {
  if (x.a != y.a) return x.a < y.a;
  if (x.twice_b_check != y.twice_b_check) return x.twice_b_check < y.twice_b_check;
  if (x.N() != y.N()) return x.N() < y.N();
  return std::lexicographical_compare(y.mults.begin(), y.mults.end(), x.mults.begin(), x.mults.end());
}

}  // namespace detail

/// All general-type numerical types of genus g with ksq in [lo, hi] and G^2 >= 0,
/// ordered by (a, 2b-check, N, multiplicities descending).
inline SearchResult search_general(Int g, Int ksq_lo, Int ksq_hi) {
  if (g < 2 || ksq_lo < 1 || ksq_lo > ksq_hi) throw std::invalid_argument("search needs g >= 2 and 1 <= lo <= hi");
  const SearchLimits lim = SearchLimits::for_genus(g);
  SearchResult res;
  for (Int a = 1; a <= lim.a_max; ++a) {
    const Int top = (a + 2) / 2;
    const Int step = (a % 2 == 0) ? 2 : 1;
    for (Int tb = 0;; tb += step) {
      // ksq is bounded below by bound_ratio, which grows with b.
      if (bound_ratio(g, a, tb) > Rational(ksq_hi)) break;
      if (a % 2 == 0 && bound_max_mult_simple(g, a, tb) > Rational(ksq_hi)) break;
      const Int s1 = checked::sub(checked::mul(a + 1, 2 * a + 2 + tb), 2 * g);
      if (s1 < 0) continue;
      const Int sq_cap = checked::mul(a + 2, 2 * a + 4 + tb);
      std::vector<Int> cur;
      detail::multisets(top, s1, lim.n_max, sq_cap, cur, [&](const std::vector<Int>& ms) {
        NumericType t{a, tb, ms, 0, {}};
        t.ksq = t.ksq_formula();
        if (t.ksq < ksq_lo || t.ksq > ksq_hi || t.pencil_square() < 0) return;
        t.admissible_d = admissible_degrees(a, tb, ms);
        if (a == lim.a_max) res.a_ceiling_hit = true;
        res.types.push_back(std::move(t));
      });
    }
  }
  std::sort(res.types.begin(), res.types.end(), detail::type_less);
  return res;
}

/// Special-type datum: plane curve of degree a+2+m0 with an m0-fold point.
struct SpecialType {
  Int a = 0;
  Int m0 = 0;
  std::vector<Int> mults;  // other singular points, non-increasing
  Int ksq = 0;

  Int N() const { return static_cast<Int>(mults.size()); }
  Int twice_b_check() const { return 2 * m0 - (a + 2); }
  Int twice_genus() const {
    Int s = checked::mul(a + 1, a + 2 * m0);
    for (Int m : mults) s -= m * (m - 1);
    return s;
  }
  Int ksq_formula() const {
    Int s = checked::mul(a, a - 2 + 2 * m0);
    for (Int m : mults) s -= (m - 1) * (m - 1);
    return s;
  }
  Int pencil_square() const {
    Int s = checked::add(checked::mul(a + 2, a + 2), checked::mul(2 * (a + 2), m0));
    for (Int m : mults) s -= m * m;
    return s;
  }
};

inline std::vector<SpecialType> search_special(Int g, Int ksq_lo, Int ksq_hi) {
  if (g < 2 || ksq_lo < 1 || ksq_lo > ksq_hi) throw std::invalid_argument("search needs g >= 2 and 1 <= lo <= hi");
  const SearchLimits lim = SearchLimits::for_genus(g);
  std::vector<SpecialType> out;
  for (Int a = 1; a <= lim.a_max; ++a) {
    for (Int m0 = 2; 2 * m0 < a + 2; ++m0) {
      const Int top = std::min((a + 2) / 2, m0);
      const Int s1 = checked::sub(checked::mul(a + 1, a + 2 * m0), 2 * g);
      if (s1 < 0) continue;
      const Int sq_cap = checked::add(checked::mul(a + 2, a + 2), checked::mul(2 * (a + 2), m0));
      std::vector<Int> cur;
      detail::multisets(top, s1, lim.n_max, sq_cap, cur, [&](const std::vector<Int>& ms) {
        SpecialType t{a, m0, ms, 0};
        t.ksq = t.ksq_formula();
        if (t.ksq < ksq_lo || t.ksq > ksq_hi || t.pencil_square() < 0) return;
        out.push_back(std::move(t));
      });
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reduction surfaces P^2 and Sigma_d

struct GenusContext {
  Int g;
  Int c;  // Clifford index
};

struct ReductionSurfaceVerdict {
  bool plane_possible = false;
  std::optional<Int> plane_degree;  // b with g = (b-1)(b-2)/2, b >= 4
  bool hirzebruch_possible = false;
  Rational hirzebruch_value;        // 2c(g-c-1)/(c+1)
};

/// Whether Y = P^2 or Y = Sigma_d is numerically compatible with (g, c, ksq).
inline ReductionSurfaceVerdict exclude_p2_and_hirzebruch(const GenusContext& ctx, Int ksq) {
  ReductionSurfaceVerdict v;
  for (Int b = 4; (b - 1) * (b - 2) / 2 <= ctx.g; ++b) {
    if ((b - 1) * (b - 2) / 2 == ctx.g) {
      v.plane_degree = b;
      v.plane_possible = (ksq == (b - 3) * (b - 3));
    }
  }
  v.hirzebruch_value = Rational(2 * ctx.c * (ctx.g - ctx.c - 1), ctx.c + 1);
  v.hirzebruch_possible = v.hirzebruch_value == Rational(ksq);
  return v;
}

// ---------------------------------------------------------------------------
// Exclusion of (a, 2b, N, mults, ksq) = (8, 0, 9, 5^7 4 3, 3)

struct ExclusionCase {
  Int delta_coef;              // 3
  Int gamma_coef;              // 1 or 2
  std::vector<Int> mults;      // six multiplicities
  Int anticanonical_degree;    // -K . (pushforward)
};

struct ExclusionCertificate {
  std::size_t cases_checked = 0;
  Int min_degree_case1 = 0;
  Int min_degree_case2 = 0;
  Int min_degree = 0;
  Int required = 1;
  ExclusionCase witness_case1;
  ExclusionCase witness_case2;
  bool excluded() const { return min_degree != required; }
};

/// On Sigma_0 blown up at six points, -K = 2 D0 + 2 G - sum E_i. The image of
/// the relevant curve is 3 D0 + G with multiplicities in {0,1}, or 3 D0 + 2 G
/// with multiplicities in {0,1,2} and exactly two 2's (arithmetic genus two).
/// The anticanonical degree never reaches 1.
inline ExclusionCertificate excluded_type_certificate() {
  ExclusionCertificate cert;
  cert.min_degree_case1 = INT64_MAX;
  cert.min_degree_case2 = INT64_MAX;
  std::vector<Int> m(6, 0);
  std::function<void(std::size_t, Int)> walk = [&](std::size_t pos, Int top) {
    if (pos == m.size()) {
      Int sum = 0;
      Int twos = 0;
      for (Int v : m) {
        sum += v;
        if (v == 2) ++twos;
      }
      // -K.(3D0 + yG) on Sigma_0 is 2y + 6, less the multiplicities.
      if (top == 1) {
        const Int deg = 8 - sum;
        ++cert.cases_checked;
        if (deg < cert.min_degree_case1) {
          cert.min_degree_case1 = deg;
          cert.witness_case1 = {3, 1, m, deg};
        }
      } else if (twos == 2) {
        const Int deg = 10 - sum;
        ++cert.cases_checked;
        if (deg < cert.min_degree_case2) {
          cert.min_degree_case2 = deg;
          cert.witness_case2 = {3, 2, m, deg};
        }
      }
      return;
    }
    for (Int v = 0; v <= top; ++v) {
      m[pos] = v;
      walk(pos + 1, top);
    }
  };
  walk(0, 1);
  walk(0, 2);
  cert.min_degree = std::min(cert.min_degree_case1, cert.min_degree_case2);
  return cert;
}

/// The excluded pattern: a = 8, 2b = 0, mults 5^7 4 3.
inline bool is_excluded_pattern(const NumericType& t) {
  return t.a == 8 && t.twice_b_check == 0 && t.mults == std::vector<Int>{5, 5, 5, 5, 5, 5, 5, 4, 3};
}

/// search_general with the excluded pattern removed when the certificate holds.
inline std::vector<NumericType> apply_exclusion(const std::vector<NumericType>& types) {
  if (!excluded_type_certificate().excluded()) return types;
  std::vector<NumericType> out;
  for (const auto& t : types)
    if (!is_excluded_pattern(t)) out.push_back(t);
  return out;
}

// ---------------------------------------------------------------------------
// Branch-curve singularity counts

struct BranchNumerics {
  std::map<Int, Int> n_I, n_II, n_III, n_IV;  // keyed by k >= 1
  Int n_V = 0;
  Int epsilon = 0;

  static Int count(const std::map<Int, Int>& m, Int k) {
    auto it = m.find(k);
    return it == m.end() ? 0 : it->second;
  }
  Int epsilon_formula() const {
    Int e = n_V;
    for (const auto& [k, v] : n_I) e += v;
    for (const auto& [k, v] : n_III) e += v;
    return e;
  }
  Int ksq_formula() const {
    Int s = n_V;
    for (const auto& [k, v] : n_I) s += (2 * k - 1) * v;
    for (const auto& [k, v] : n_III) s += (2 * k - 1) * v;
    for (const auto& [k, v] : n_II) s += 2 * k * v;
    for (const auto& [k, v] : n_IV) s += 2 * k * v;
    return s;
  }
};

struct BranchVerdict {
  bool epsilon_ok;
  bool ksq_ok;
  bool consistent() const { return epsilon_ok && ksq_ok; }
};

inline BranchVerdict branch_consistency(const BranchNumerics& bn, Int ksq) {
  for (const auto* m : {&bn.n_I, &bn.n_II, &bn.n_III, &bn.n_IV})
    for (const auto& [k, v] : *m)
      if (k < 1 || v < 0) throw std::invalid_argument("branch counts need k >= 1 and nonnegative values");
  if (bn.n_V < 0) throw std::invalid_argument("branch counts must be nonnegative");
  return {bn.epsilon == bn.epsilon_formula(), bn.ksq_formula() == ksq};
}

/// Every count vector with the given (K+F)^2 (epsilon filled in).
inline std::vector<BranchNumerics> enumerate_branch_numerics(Int ksq) {
  if (ksq < 0) throw std::invalid_argument("ksq must be nonnegative");
  // Items: (family, k, weight). Family 0..3 = I, II, III, IV; 4 = V.
  struct Item {
    int family;
    Int k;
    Int weight;
  };
  std::vector<Item> items;
  for (Int k = 1; 2 * k - 1 <= ksq; ++k) {
    items.push_back({0, k, 2 * k - 1});
    items.push_back({2, k, 2 * k - 1});
    if (2 * k <= ksq) {
      items.push_back({1, k, 2 * k});
      items.push_back({3, k, 2 * k});
    }
  }
  if (ksq >= 1) items.push_back({4, 0, 1});
  std::vector<BranchNumerics> out;
  std::vector<Int> counts(items.size(), 0);
  std::function<void(std::size_t, Int)> walk = [&](std::size_t pos, Int left) {
    if (pos == items.size()) {
      if (left != 0) return;
      BranchNumerics bn;
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (counts[i] == 0) continue;
        const Item& it = items[i];
        switch (it.family) {
          case 0: bn.n_I[it.k] = counts[i]; break;
          case 1: bn.n_II[it.k] = counts[i]; break;
          case 2: bn.n_III[it.k] = counts[i]; break;
          case 3: bn.n_IV[it.k] = counts[i]; break;
          default: bn.n_V = counts[i]; break;
        }
      }
      bn.epsilon = bn.epsilon_formula();
      out.push_back(std::move(bn));
      return;
    }
    for (Int c = 0; c * items[pos].weight <= left; ++c) {
      counts[pos] = c;
      walk(pos + 1, left - c * items[pos].weight);
    }
    counts[pos] = 0;
  };
  walk(0, ksq);
  return out;
}

}  // namespace ratpencil
