/**
 * @file shuffle.hpp
 * @brief Shuffle elements, the shuffle product, wheel conditions, slope
 *        tests, the sigma shift, and graded bases of filtered cells.
 *
 * An element of V_n is stored as its color-symmetric Laurent numerator; the
 * denominator is implicit and canonical for the multidegree:
 *  - loop mode: prod over color pairs i < j of prod_{a,b} (z_{ia} - z_{jb});
 *  - toroidal mode: for every unordered variable pair a < b, the two monic
 *    factors (z_a - q1^-1 q2^-1 z_b) and (z_a - q1 q2 z_b) — the monic
 *    normalization of prod_{a != b} (z_a q1 q2 - z_b).  Units differing from
 *    the textbook normalization are global per multidegree and are folded
 *    consistently into products, so all kernels and ranks are unaffected.
 *
 * The shuffle product is computed over shuffle-coset representatives (one
 * subset choice per color); the apparent same-color poles (z_a - z_b) must
 * cancel after summation, enforced by exact division.
 */
#pragma once

#include <qshuffle/algebra_data.hpp>
#include <qshuffle/linalg.hpp>

namespace qsh {

struct PoleCancellationFailure : std::runtime_error {
  PoleCancellationFailure()
      : std::runtime_error("shuffle product poles failed to cancel") {}
};

struct WindowExhausted : std::runtime_error {
  WindowExhausted()
      : std::runtime_error("exponent window exhausted without stabilizing") {}
};

struct ShuffleElt {
  int sign = +1;       ///< +1 for S^+, -1 for S^-
  std::vector<int> n;  ///< multidegree in N^I
  LaurentPoly num;     ///< color-symmetric numerator

  ShuffleElt(int s, std::vector<int> deg, LaurentPoly p)
      : sign(s), n(std::move(deg)), num(std::move(p)) {}
};

/* ---- canonical variable / denominator conventions ----------------------- */

inline VarSet flat_vars(const CartanData& c, const std::vector<int>& n) {
  VarSet v;
  for (int i = 0; i < c.ncolors(); ++i)
    v.colors.insert(v.colors.end(), n[i], i);
  return v;
}

inline int total_vars(const std::vector<int>& n) {
  int t = 0;
  for (int x : n) t += x;
  return t;
}

inline std::vector<DenFactor> canonical_den(const CartanData& c,
                                            const std::vector<int>& n) {
  VarSet vars = flat_vars(c, n);
  const int N = vars.nvars();
  std::vector<DenFactor> den;
  if (c.is_loop()) {
    for (int a = 0; a < N; ++a)
      for (int b = a + 1; b < N; ++b)
        if (vars.colors[a] != vars.colors[b])
          den.push_back(DenFactor::zz(a, b, GammaPoint::one(c.arity())));
  } else {
    for (int a = 0; a < N; ++a)
      for (int b = a + 1; b < N; ++b) {
        den.push_back(DenFactor::zz(a, b, c.q12(-1, -1)));
        den.push_back(DenFactor::zz(a, b, c.q12(1, 1)));
      }
  }
  std::sort(den.begin(), den.end());
  return den;
}

inline int den_degree(const CartanData& c, const std::vector<int>& n) {
  return static_cast<int>(canonical_den(c, n).size());
}

inline FactoredRat as_factored(const CartanData& c, const ShuffleElt& x) {
  return FactoredRat(x.num, canonical_den(c, x.n));
}

inline ShuffleElt unit_elt(const CartanData& c, int sign) {
  return ShuffleElt(sign, std::vector<int>(c.ncolors(), 0),
                    LaurentPoly::constant(0, c.one()));
}

/// Generator e_{i,d}: one variable of color i, numerator z^d.
inline ShuffleElt generator(const CartanData& c, int sign, int color, int d) {
  std::vector<int> n(c.ncolors(), 0);
  n[color] = 1;
  return ShuffleElt(sign, n,
                    LaurentPoly::monomial(1, ZExpo{d}, c.one()));
}

/// Stored vertical degree: deg(numerator) - deg(canonical denominator).
/// Requires a homogeneous numerator.
inline int vdeg(const CartanData& c, const ShuffleElt& x) {
  if (x.num.is_zero()) return 0;
  if (!x.num.is_homogeneous())
    throw std::runtime_error("vdeg of inhomogeneous element");
  return LaurentPoly::total_degree(x.num.terms().begin()->first) -
         den_degree(c, x.n);
}

/* ---- shuffle product ---------------------------------------------------- */

/// Re-index a polynomial into a larger variable space: old variable a
/// becomes new variable map[a].
inline LaurentPoly embed_poly(const LaurentPoly& p, int new_nvars,
                              const std::vector<int>& map) {
  LaurentPoly r(new_nvars, p.arity());
  for (auto& [e, c] : p.terms()) {
    ZExpo f(new_nvars, 0);
    for (std::size_t a = 0; a < map.size(); ++a) f[map[a]] = e[a];
    r.add_term(f, c);
  }
  return r;
}

namespace detail {

/// The plus-side product over coset representatives.
inline ShuffleElt shuffle_mul_plus(const CartanData& c, const ShuffleElt& A,
                                   const ShuffleElt& B) {
  const int I = c.ncolors();
  std::vector<int> n(I);
  for (int i = 0; i < I; ++i) n[i] = A.n[i] + B.n[i];
  VarSet vars = flat_vars(c, n);
  const int N = vars.nvars();
  if (A.num.is_zero() || B.num.is_zero())
    return ShuffleElt(+1, n, LaurentPoly(N, c.arity()));

  // Color-block offsets in the result's flat variable list.
  std::vector<int> offset(I + 1, 0);
  for (int i = 0; i < I; ++i) offset[i + 1] = offset[i] + n[i];

  // Enumerate one subset choice per color (A's variables; B gets the rest).
  std::vector<std::vector<std::vector<int>>> per_color_choices(I);
  for (int i = 0; i < I; ++i) {
    std::vector<int> idx(A.n[i]);
    std::iota(idx.begin(), idx.end(), 0);
    if (A.n[i] == 0) {
      per_color_choices[i].push_back({});
      continue;
    }
    while (true) {
      per_color_choices[i].push_back(idx);
      int k = A.n[i] - 1;
      while (k >= 0 && idx[k] == n[i] - A.n[i] + k) --k;
      if (k < 0) break;
      ++idx[k];
      for (int j = k + 1; j < A.n[i]; ++j) idx[j] = idx[j - 1] + 1;
    }
  }

  FactoredRat sum(N, c.arity());
  std::vector<int> which(I, 0);
  while (true) {
    // Build A's and B's flat index maps for this coset.
    std::vector<int> mapA, mapB;
    std::vector<bool> inA(N, false);
    for (int i = 0; i < I; ++i) {
      std::vector<bool> used(n[i], false);
      for (int k : per_color_choices[i][which[i]]) {
        mapA.push_back(offset[i] + k);
        used[k] = true;
        inA[offset[i] + k] = true;
      }
      for (int k = 0; k < n[i]; ++k)
        if (!used[k]) mapB.push_back(offset[i] + k);
    }
    std::vector<int> avars, bvars;
    for (int a = 0; a < N; ++a) (inA[a] ? avars : bvars).push_back(a);

    FactoredRat term(embed_poly(A.num, N, mapA) * embed_poly(B.num, N, mapB));
    for (int a : avars)
      for (int b : bvars) {
        int i = vars.colors[a], j = vars.colors[b];
        if (c.is_loop()) {
          // zeta_ij(z_a/z_b) = (z_a - q^{-d_ij} z_b)/(z_a - z_b).
          LaurentPoly zn(N, c.arity());
          ZExpo ea(N, 0), eb(N, 0);
          ea[a] = 1;
          eb[b] = 1;
          zn.add_term(ea, c.one());
          zn.add_term(eb, -KScalar::from_gamma(c.qpow(-c.d(i, j))));
          term.mul_num(zn);
          if (i == j) {
            term.push_den_zz(a, b, GammaPoint::one(c.arity()));
          } else if (a > b) {
            // Canonical factor is (z_b - z_a); flip orientation sign.
            term.mul_scalar(-c.one());
          }
        } else {
          // zeta(z_a/z_b) = (z_a q1 - z_b)(z_a q2 - z_b)
          //               / ((z_a - z_b)(z_a q1 q2 - z_b)).
          ZExpo ea(N, 0), eb(N, 0);
          ea[a] = 1;
          eb[b] = 1;
          for (int which_q = 0; which_q < 2; ++which_q) {
            LaurentPoly zn(N, c.arity());
            zn.add_term(ea, KScalar::from_gamma(
                                which_q == 0 ? c.q12(1, 0) : c.q12(0, 1)));
            zn.add_term(eb, -c.one());
            term.mul_num(zn);
          }
          term.push_den_zz(a, b, GammaPoint::one(c.arity()));
          // (z_a q1 q2 - z_b) cancels one canonical factor of the result's
          // denominator up to a unit; the partner factor for the pair
          // (b, a) is not cancelled and multiplies the numerator.
          LaurentPoly partner(N, c.arity());
          if (b < a) {
            // canonical(b,a) = (z_b - q1^-1 q2^-1 z_a)
            partner.add_term(eb, c.one());
            partner.add_term(ea, -KScalar::from_gamma(c.q12(-1, -1)));
          } else {
            // pair (b,a) with b > a normalizes to (z_a - q1 q2 z_b)
            partner.add_term(ea, c.one());
            partner.add_term(eb, -KScalar::from_gamma(c.q12(1, 1)));
          }
          term.mul_num(partner);
          // (z_a q1 q2 - z_b) = u * canonical(a,b):
          //   a < b: u = q1 q2;  a > b: u = -1.
          KScalar u = a < b ? KScalar::from_gamma(c.q12(1, 1)) : -c.one();
          term.mul_scalar(u.inverse());
        }
      }
    sum = sum + term;

    int i = I - 1;
    while (i >= 0 &&
           which[i] + 1 == static_cast<int>(per_color_choices[i].size())) {
      which[i] = 0;
      --i;
    }
    if (i < 0) break;
    ++which[i];
  }

  sum.simplify();
  if (!sum.den().empty()) throw PoleCancellationFailure();
  return ShuffleElt(+1, n, sum.num());
}

}  // namespace detail

/// Sign-aware product: S^- is the opposite algebra.
inline ShuffleElt shuffle_mul(const CartanData& c, const ShuffleElt& a,
                              const ShuffleElt& b) {
  if (a.sign != b.sign)
    throw std::runtime_error("shuffle_mul: mixed signs");
  if (a.sign > 0) return detail::shuffle_mul_plus(c, a, b);
  ShuffleElt r = detail::shuffle_mul_plus(c, b, a);
  r.sign = -1;
  return r;
}

inline ShuffleElt shuffle_product(const CartanData& c,
                                  const std::vector<ShuffleElt>& factors) {
  if (factors.empty()) return unit_elt(c, +1);
  ShuffleElt r = factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i)
    r = shuffle_mul(c, r, factors[i]);
  return r;
}

/* ---- wheel conditions --------------------------------------------------- */

namespace detail {

/// One wheel specialization: substitutions z_var -> g * z_target applied to
/// the numerator, which must then vanish.
struct WheelInstance {
  std::vector<std::tuple<int, int, GammaPoint>> subs;  // (var, target, g)
};

inline std::vector<WheelInstance> wheel_instances(const CartanData& c,
                                                  const std::vector<int>& n) {
  VarSet vars = flat_vars(c, n);
  const int N = vars.nvars();
  std::vector<WheelInstance> out;
  if (c.is_loop()) {
    for (int i = 0; i < c.ncolors(); ++i)
      for (int j = 0; j < c.ncolors(); ++j) {
        if (i == j || c.d(i, j) == 0) continue;
        int m = 1 - 2 * c.d(i, j) / c.d(i, i);
        if (n[i] < m || n[j] < 1) continue;
        // All ordered m-tuples of distinct color-i variables and a color-j
        // variable (robust also for non-symmetric numerators).
        std::vector<int> ivars, jvars;
        for (int a = 0; a < N; ++a) {
          if (vars.colors[a] == i) ivars.push_back(a);
          if (vars.colors[a] == j) jvars.push_back(a);
        }
        std::vector<int> tup;
        std::function<void()> rec = [&]() {
          if (static_cast<int>(tup.size()) == m) {
            for (int b : jvars) {
              WheelInstance w;
              for (int k = 1; k < m; ++k)
                w.subs.emplace_back(tup[k], tup[0], c.qpow(k * c.d(i, i)));
              w.subs.emplace_back(b, tup[0], c.qpow(-c.d(i, j)));
              out.push_back(std::move(w));
            }
            return;
          }
          for (int a : ivars) {
            if (std::find(tup.begin(), tup.end(), a) != tup.end()) continue;
            tup.push_back(a);
            rec();
            tup.pop_back();
          }
        };
        rec();
      }
  } else {
    if (N < 3) return out;
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        for (int e = 0; e < N; ++e) {
          if (a == b || a == e || b == e) continue;
          // (z_a, z_b, z_e) = (w, w q_i, w q1 q2) for i = 1, 2.
          for (int which_q = 0; which_q < 2; ++which_q) {
            WheelInstance w;
            w.subs.emplace_back(
                b, a, which_q == 0 ? c.q12(1, 0) : c.q12(0, 1));
            w.subs.emplace_back(e, a, c.q12(1, 1));
            out.push_back(std::move(w));
          }
        }
  }
  return out;
}

inline LaurentPoly apply_wheel(const LaurentPoly& num,
                               const WheelInstance& w) {
  LaurentPoly p = num;
  for (auto& [var, target, g] : w.subs) p = p.substitute_scaled(var, target, g);
  return p;
}

}  // namespace detail

/// True iff the numerator vanishes under every wheel specialization.
inline bool wheel_check(const CartanData& c, const ShuffleElt& x) {
  if (c.is_loop()) {
    // The wheel description is available for finite type only.
    (void)c.positive_roots();  // throws NotFiniteType otherwise
  }
  for (const auto& w : detail::wheel_instances(c, x.n))
    if (!detail::apply_wheel(x.num, w).is_zero()) return false;
  return true;
}

/* ---- slope filtration --------------------------------------------------- */

enum class SlopeRel { GE, GT, LE, LT };

struct SlopeConstraint {
  SlopeRel rel;
  int p = 0, q = 1;    ///< slope mu = p / q, q > 0
  std::vector<int> r;  ///< positive color weights (Def. of the filtration)
};

namespace detail {

struct SubsetData {
  long w;        // sum of r over the subset's colors
  int cnt_both;  // denominator factors with both endpoints in the subset
  int cnt_any;   // denominator factors with some endpoint in the subset
  int mask;
};

inline std::vector<SubsetData> subset_data(const CartanData& c,
                                           const std::vector<int>& n,
                                           const std::vector<int>& r) {
  VarSet vars = flat_vars(c, n);
  auto den = canonical_den(c, n);
  const int N = vars.nvars();
  std::vector<SubsetData> out;
  for (int mask = 1; mask < (1 << N); ++mask) {
    SubsetData s{0, 0, 0, mask};
    for (int a = 0; a < N; ++a)
      if (mask & (1 << a)) s.w += r[vars.colors[a]];
    for (const auto& d : den) {
      bool bu = mask & (1 << d.u), bv = mask & (1 << d.v);
      if (bu && bv) ++s.cnt_both;
      if (bu || bv) ++s.cnt_any;
    }
    out.push_back(s);
  }
  return out;
}

/// Per-monomial slope predicate over one subset; exact integer arithmetic.
inline bool monomial_subset_ok(const ZExpo& e, const SubsetData& s, int sign,
                               const SlopeConstraint& k) {
  long se = 0;
  for (std::size_t a = 0; a < e.size(); ++a)
    if (s.mask & (1 << a)) se += e[a];
  long v0 = se - s.cnt_both;   // xi-valuation at 0 under subset scaling
  long vi = se - s.cnt_any;    // xi-degree at infinity
  long pw = (long)k.p * s.w;
  if (sign > 0) {
    switch (k.rel) {
      case SlopeRel::GE: return (long)k.q * v0 >= pw;
      case SlopeRel::GT: return (long)k.q * v0 > pw;
      case SlopeRel::LE: return (long)k.q * vi <= pw;
      case SlopeRel::LT: return (long)k.q * vi < pw;
    }
  } else {
    switch (k.rel) {
      case SlopeRel::LE: return (long)k.q * v0 >= -pw;
      case SlopeRel::LT: return (long)k.q * v0 > -pw;
      case SlopeRel::GE: return (long)k.q * vi <= -pw;
      case SlopeRel::GT: return (long)k.q * vi < -pw;
    }
  }
  return false;
}

}  // namespace detail

/// slope_test(x, mu = p/q, rel, r): AND over all nonempty variable subsets
/// and all numerator monomials (exact; no cancellation can occur between
/// distinct Laurent monomials).
inline bool slope_test(const CartanData& c, const ShuffleElt& x, int p, int q,
                       SlopeRel rel, const std::vector<int>& r) {
  SlopeConstraint k{rel, p, q, r};
  auto subs = detail::subset_data(c, x.n, r);
  for (auto& [e, coef] : x.num.terms())
    for (const auto& s : subs)
      if (!detail::monomial_subset_ok(e, s, x.sign, k)) return false;
  return true;
}

/// The sigma automorphism power: multiplies the numerator by
/// prod z_{ia}^{sign * k * r_i}; maps B_mu to B_{mu+k} on both signs.
inline ShuffleElt sigma_shift(const CartanData& c, const ShuffleElt& x, int k,
                              const std::vector<int>& r) {
  VarSet vars = flat_vars(c, x.n);
  ZExpo shift(vars.nvars(), 0);
  for (int a = 0; a < vars.nvars(); ++a)
    shift[a] = x.sign * k * r[vars.colors[a]];
  return ShuffleElt(x.sign, x.n, x.num.shifted(shift));
}

/* ---- exact rank of element families ------------------------------------- */

inline KMatrix coefficient_matrix(const std::vector<ShuffleElt>& elts,
                                  int arity) {
  std::set<ZExpo> monos;
  for (const auto& x : elts)
    for (auto& [e, c] : x.num.terms()) monos.insert(e);
  std::vector<ZExpo> cols(monos.begin(), monos.end());
  KMatrix m;
  for (const auto& x : elts) {
    KVector row(cols.size(), KScalar(arity));
    for (auto& [e, c] : x.num.terms()) {
      auto it = std::lower_bound(cols.begin(), cols.end(), e);
      row[it - cols.begin()] = c;
    }
    m.push_back(std::move(row));
  }
  return m;
}

inline int elt_rank(const CartanData& c, const std::vector<ShuffleElt>& elts) {
  if (elts.empty()) return 0;
  return rank(coefficient_matrix(elts, c.arity()));
}

/* ---- graded cell bases -------------------------------------------------- */

namespace detail {

inline long ceil_div(long a, long b) {  // b > 0
  return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}
inline long floor_div(long a, long b) {  // b > 0
  return a >= 0 ? a / b : -(((-a) + b - 1) / b);
}

}  // namespace detail

/**
 * Basis of the cell {x in V_{sign n, d} : all slope constraints}, solving
 * wheel conditions exactly inside the span of slope-admissible symmetric
 * monomial orbits (the wheel_solve strategy).  Throws WindowExhausted when
 * the constraints fail to bound the exponent box.
 */
inline std::vector<ShuffleElt> cell_basis(
    const CartanData& c, int sign, const std::vector<int>& n, int d,
    const std::vector<SlopeConstraint>& constraints, bool solve_wheels = true) {
  VarSet vars = flat_vars(c, n);
  const int N = vars.nvars();
  const int dnum = d + den_degree(c, n);
  if (N == 0)
    return d == 0 ? std::vector<ShuffleElt>{unit_elt(c, sign)}
                  : std::vector<ShuffleElt>{};

  // Per-variable bounds from singleton subsets of each constraint.
  auto den = canonical_den(c, n);
  const long INF = 1000000;
  std::vector<long> lo(N, -INF), hi(N, INF);
  for (int a = 0; a < N; ++a) {
    int cnt_a = 0;
    for (const auto& f : den)
      if (f.involves(a)) ++cnt_a;
    for (const auto& k : constraints) {
      long rw = k.r[vars.colors[a]];
      bool zero_side;  // constraint on the valuation at 0 (lower bound)
      if (sign > 0)
        zero_side = k.rel == SlopeRel::GE || k.rel == SlopeRel::GT;
      else
        zero_side = k.rel == SlopeRel::LE || k.rel == SlopeRel::LT;
      long pw = sign > 0 ? (long)k.p * rw : -(long)k.p * rw;
      bool strict = k.rel == SlopeRel::GT || k.rel == SlopeRel::LT;
      if (zero_side) {
        long b = strict ? detail::floor_div(pw, k.q) + 1
                        : detail::ceil_div(pw, k.q);
        lo[a] = std::max(lo[a], b);
      } else {
        long b = (strict ? detail::ceil_div(pw, k.q) - 1
                         : detail::floor_div(pw, k.q)) +
                 cnt_a;
        hi[a] = std::min(hi[a], b);
      }
    }
  }
  // Tighten via the fixed total degree.
  for (int rounds = 0; rounds < 2; ++rounds)
    for (int a = 0; a < N; ++a) {
      long others_hi = 0, others_lo = 0;
      bool hi_fin = true, lo_fin = true;
      for (int b = 0; b < N; ++b) {
        if (b == a) continue;
        if (hi[b] >= INF) hi_fin = false;
        if (lo[b] <= -INF) lo_fin = false;
        others_hi += hi[b];
        others_lo += lo[b];
      }
      if (hi_fin) lo[a] = std::max(lo[a], dnum - others_hi);
      if (lo_fin) hi[a] = std::min(hi[a], dnum - others_lo);
    }
  for (int a = 0; a < N; ++a)
    if (lo[a] <= -INF || hi[a] >= INF) throw WindowExhausted();

  // Enumerate admissible exponent vectors with the exact total degree.
  auto subs = detail::subset_data(c, n, constraints.empty()
                                            ? std::vector<int>(c.ncolors(), 1)
                                            : constraints[0].r);
  std::vector<std::vector<detail::SubsetData>> sub_per;
  for (const auto& k : constraints)
    sub_per.push_back(detail::subset_data(c, n, k.r));

  std::vector<ZExpo> admitted;
  ZExpo e(N, 0);
  std::function<void(int, long)> enumerate = [&](int a, long rem) {
    if (a == N) {
      if (rem != 0) return;
      for (std::size_t ki = 0; ki < constraints.size(); ++ki)
        for (const auto& s : sub_per[ki])
          if (!detail::monomial_subset_ok(e, s, sign, constraints[ki]))
            return;
      admitted.push_back(e);
      return;
    }
    long rest_lo = 0, rest_hi = 0;
    for (int b = a + 1; b < N; ++b) {
      rest_lo += lo[b];
      rest_hi += hi[b];
    }
    for (long v = std::max(lo[a], rem - rest_hi);
         v <= std::min(hi[a], rem - rest_lo); ++v) {
      e[a] = static_cast<int>(v);
      enumerate(a + 1, rem - v);
    }
  };
  enumerate(0, dnum);

  // Group into color-symmetric orbits (canonical representative: exponents
  // sorted descending within each color block).
  auto canonical_rep = [&](ZExpo x) {
    int pos = 0;
    for (int i = 0; i < c.ncolors(); ++i) {
      std::sort(x.begin() + pos, x.begin() + pos + n[i],
                std::greater<int>());
      pos += n[i];
    }
    return x;
  };
  std::set<ZExpo> reps;
  for (const auto& x : admitted) reps.insert(canonical_rep(x));
  std::vector<LaurentPoly> orbits;
  for (const auto& rep : reps) {
    LaurentPoly orbit(N, c.arity());
    std::set<ZExpo> seen;
    for (const auto& perm : color_permutations(vars)) {
      ZExpo f(N, 0);
      for (int a = 0; a < N; ++a) f[perm[a]] = rep[a];
      if (seen.insert(f).second) orbit.add_term(f, c.one());
    }
    orbits.push_back(std::move(orbit));
  }

  std::vector<ShuffleElt> out;
  auto wheels = detail::wheel_instances(c, n);
  if (!solve_wheels || wheels.empty()) {
    for (auto& o : orbits) out.emplace_back(sign, n, std::move(o));
    return out;
  }

  // Linear wheel system on the orbit span: one condition row per
  // (wheel instance, monomial of the specialized image).
  std::vector<KVector> rows;
  for (const auto& w : wheels) {
    std::vector<LaurentPoly> imgs;
    std::set<ZExpo> monos;
    for (const auto& o : orbits) {
      imgs.push_back(detail::apply_wheel(o, w));
      for (auto& [m, coef] : imgs.back().terms()) monos.insert(m);
    }
    for (const auto& m : monos) {
      KVector row;
      for (const auto& img : imgs) {
        auto it = img.terms().find(m);
        row.push_back(it == img.terms().end() ? c.zero() : it->second);
      }
      rows.push_back(std::move(row));
    }
  }
  if (rows.empty()) {
    for (auto& o : orbits) out.emplace_back(sign, n, std::move(o));
    return out;
  }
  auto combos = nullspace(rows, static_cast<int>(orbits.size()), c.arity());
  for (const auto& v : combos) {
    LaurentPoly p(N, c.arity());
    for (std::size_t i = 0; i < orbits.size(); ++i)
      p = p + orbits[i] * v[i];
    out.emplace_back(sign, n, std::move(p));
  }
  return out;
}

/// Convenience: basis of S_{<0|-n, d} (slope < 0, sign -, weights r).
inline std::vector<ShuffleElt> basis_s_neg(const CartanData& c,
                                           const std::vector<int>& n, int d,
                                           const std::vector<int>& r) {
  return cell_basis(c, -1, n, d, {SlopeConstraint{SlopeRel::LT, 0, 1, r}});
}

/* ---- span-of-products strategy ------------------------------------------ */

/// All products of one-variable generators with the given color word and
/// total stored degree d, exponents in [dmin, dmax].
inline std::vector<ShuffleElt> monomial_products(const CartanData& c, int sign,
                                                 const std::vector<int>& n,
                                                 int d, int dmin, int dmax) {
  std::vector<ShuffleElt> out;
  for (const auto& word : c.orderings(n)) {
    const int k = word.nvars();
    std::vector<int> ds(k, dmin);
    std::function<void(int, int)> rec = [&](int idx, int rem) {
      if (idx == k) {
        if (rem != 0) return;
        std::vector<ShuffleElt> factors;
        for (int a = 0; a < k; ++a)
          factors.push_back(generator(c, sign, word.colors[a], ds[a]));
        out.push_back(shuffle_product(c, factors));
        return;
      }
      for (int v = dmin; v <= dmax; ++v) {
        if (rem - v < dmin * (k - idx - 1) || rem - v > dmax * (k - idx - 1))
          continue;
        ds[idx] = v;
        rec(idx + 1, rem - v);
      }
    };
    rec(0, d);
    if (k == 0 && d == 0) out.push_back(unit_elt(c, sign));
  }
  return out;
}

/// Rank of the span of generator products in cell (sign, n, d), enlarging the
/// exponent window until two consecutive windows agree.
inline int span_products_rank(const CartanData& c, int sign,
                              const std::vector<int>& n, int d,
                              int initial_halfwidth = 2,
                              int max_halfwidth = 8) {
  int prev = -1;
  for (int w = initial_halfwidth; w <= max_halfwidth; ++w) {
    int r = elt_rank(c, monomial_products(c, sign, n, d, -w, w));
    if (r == prev) return r;
    prev = r;
  }
  throw WindowExhausted();
}

}  // namespace qsh
