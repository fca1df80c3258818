/**
 * @file cat_o.hpp
 * @brief The category-O engine: graded kernels of the r-twisted pairing (both
 *        the ring variant, via the cone criterion, and the full variant, via
 *        window stabilization), residue-ideal multiplicities, q-characters,
 *        refined characters, and monochrome truncations.
 *
 * All membership conditions reduce to one of two exact primitives on the
 *        canonical integrand
 *            F(z_1..z_n) / prod_{a<b} zeta(z_b / z_a)
 *        written over an ordering (color word) of the multidegree:
 *  - cone conditions: the region expansion |z_1| << ... << |z_n| contains no
 *    monomial with all exponents <= 0 (zero-support ideals, r-kernels);
 *  - iterated residue chains at a support point, with zero coordinates taken
 *    innermost (nonzero-support ideals and mixed supports).
 * The integrand and the full-variant kernel work in both loop and toroidal
 * modes; the residue-chain engine is loop mode only.
 */
#pragma once

#include <qshuffle/charring.hpp>
#include <qshuffle/ellweight.hpp>
#include <qshuffle/shuffle.hpp>

#include <functional>
#include <numeric>
#include <optional>

namespace qsh {

struct BoundUncertain : std::runtime_error {
  explicit BoundUncertain(const std::string& what)
      : std::runtime_error("derivative bound uncertain: " + what) {}
};

struct StabilizationFailure : std::runtime_error {
  explicit StabilizationFailure(const std::string& what)
      : std::runtime_error("stabilization failure: " + what) {}
};

/// J-kernel flavor: Ring is the variant cut out by nonnegative-exponent
/// (cone) conditions; Full enlarges the condition window until the kernel
/// stabilizes.  The two agree in finite type.
enum class KernelVariant { Ring, Full };

/* ---- supports ----------------------------------------------------------- */

/// A point of C^n up to color symmetry: per color, a sorted multiset of
/// parameter-group points and zeros (zeros sort first).
struct Support {
  std::vector<std::vector<GammaPoint>> pts;

  explicit Support(int ncolors) : pts(ncolors) {}

  int ncolors() const { return static_cast<int>(pts.size()); }
  std::vector<int> sizes() const {
    std::vector<int> s;
    for (const auto& v : pts) s.push_back(static_cast<int>(v.size()));
    return s;
  }
  int total() const {
    int t = 0;
    for (const auto& v : pts) t += static_cast<int>(v.size());
    return t;
  }
  bool contains_zero() const {
    for (const auto& v : pts)
      for (const auto& p : v)
        if (p.zero) return true;
    return false;
  }
  Support nonzero_part() const {
    Support s(ncolors());
    for (int i = 0; i < ncolors(); ++i)
      for (const auto& p : pts[i])
        if (!p.zero) s.pts[i].push_back(p);
    return s;
  }
  std::vector<int> zero_counts() const {
    std::vector<int> z(ncolors(), 0);
    for (int i = 0; i < ncolors(); ++i)
      for (const auto& p : pts[i])
        if (p.zero) ++z[i];
    return z;
  }
  void normalize() {
    for (auto& v : pts) std::sort(v.begin(), v.end());
  }

  bool operator<(const Support& o) const { return pts < o.pts; }
  bool operator==(const Support& o) const { return pts == o.pts; }

  std::string to_string(const ParamNames& pn) const {
    std::string s = "(";
    for (int i = 0; i < ncolors(); ++i) {
      if (i) s += " | ";
      for (std::size_t a = 0; a < pts[i].size(); ++a) {
        if (a) s += ", ";
        s += pts[i][a].to_string(pn);
      }
    }
    return s + ")";
  }
};

/// y extended by p extra zero coordinates per color.
inline Support padded_support(const Support& y, const std::vector<int>& p,
                              int arity) {
  Support t = y;
  for (int i = 0; i < t.ncolors(); ++i)
    for (int k = 0; k < p[i]; ++k)
      t.pts[i].push_back(GammaPoint::zero_point(arity));
  t.normalize();
  return t;
}

/* ---- the canonical integrand over a color word -------------------------- */

namespace detail {

/// Permutation sending the canonical color-block variable order to the
/// positions of a color word (per color, ascending).
inline std::vector<int> word_perm(const CartanData& c, const VarSet& word,
                                  const std::vector<int>& n) {
  const int N = word.nvars();
  std::vector<int> offset(c.ncolors() + 1, 0);
  for (int i = 0; i < c.ncolors(); ++i) offset[i + 1] = offset[i] + n[i];
  std::vector<int> cnt(c.ncolors(), 0), perm(N);
  for (int pos = 0; pos < N; ++pos) {
    int i = word.colors[pos];
    perm[offset[i] + cnt[i]++] = pos;
  }
  return perm;
}

}  // namespace detail

/**
 * F / prod_{a<b} zeta_{i_b i_a}(z_b/z_a) as a factored rational function in
 * the word's variables.
 *
 * Loop mode: the cross-color numerators (z_b - z_a) cancel F's canonical
 * denominator (up to the orientation sign, folded in), same-color numerators
 * (z_b - z_a) remain, and the zeta denominators (z_b - q^{-d} z_a) are
 * pushed as factors.
 *
 * Toroidal mode (one color): 1/zeta(z_b/z_a) contributes numerators
 * (z_b - z_a)(z_b q1 q2 - z_a) and denominators (z_b q1 - z_a)(z_b q2 - z_a)
 * per pair; the second numerator cancels F's canonical factor
 * (z_a - q1 q2 z_b) up to -1, while the partner factor
 * (z_a - q1^-1 q2^-1 z_b) stays in the denominator.
 */
inline FactoredRat zeta_integrand(const CartanData& c, const VarSet& word,
                                  const ShuffleElt& F) {
  const int N = word.nvars();
  auto perm = detail::word_perm(c, word, F.n);
  FactoredRat f(F.num.permuted(perm));
  VarSet canon = flat_vars(c, F.n);
  int sgn = 1;
  for (int u = 0; u < N; ++u)
    for (int v = u + 1; v < N; ++v)
      if (canon.colors[u] != canon.colors[v] && perm[u] < perm[v]) sgn = -sgn;
  for (int a = 0; a < N; ++a)
    for (int b = a + 1; b < N; ++b) {
      if (word.colors[a] == word.colors[b]) {
        LaurentPoly p(N, c.arity());
        ZExpo ea(N, 0), eb(N, 0);
        ea[a] = 1;
        eb[b] = 1;
        p.add_term(eb, c.one());
        p.add_term(ea, -c.one());
        f.mul_num(p);
      }
      if (c.is_loop()) {
        f.push_den_zz(b, a, c.qpow(-c.d(word.colors[a], word.colors[b])));
      } else {
        f.mul_scalar(-c.one());
        f.push_den(DenFactor::zz(a, b, c.q12(-1, -1)));
        // (z_b q_i - z_a) = q_i (z_b - q_i^-1 z_a) for i = 1, 2.
        f.push_den_zz(b, a, c.q12(-1, 0));
        f.push_den_zz(b, a, c.q12(0, -1));
        f.mul_scalar(KScalar::from_gamma(c.q12(-1, -1)));
      }
    }
  if (sgn < 0) f.mul_scalar(-c.one());
  return f;
}

/* ---- r-kernels (zero support) ------------------------------------------- */

struct KernelCell {
  std::vector<int> n;
  int d = 0;
  std::vector<ShuffleElt> basis;    ///< basis of the slope-negative cell
  std::vector<KVector> kernel;      ///< kernel combinations over the basis
  int codim = 0;                    ///< dim of the quotient cell
};

namespace detail {

/// Cone-condition coefficient map of one basis element with a per-variable
/// exponent shift of -r_{i_a} - shift.
inline std::map<ZExpo, KScalar> cone_row(const CartanData& c,
                                         const VarSet& word,
                                         const ShuffleElt& F,
                                         const std::vector<int>& r,
                                         int shift) {
  const int N = word.nvars();
  FactoredRat f = zeta_integrand(c, word, F);
  ZExpo sh(N, 0);
  for (int a = 0; a < N; ++a) sh[a] = -r[word.colors[a]] - shift;
  f = FactoredRat(f.num().shifted(sh), f.den());
  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::map<ZExpo, KScalar> m;
  for (auto& [e, coef] : cone_coefficients(f, order)) {
    auto it = m.find(e);
    if (it == m.end())
      m.emplace(e, coef);
    else
      it->second += coef;
  }
  return m;
}

inline KMatrix cone_rows(const CartanData& c, const std::vector<int>& r,
                         const std::vector<int>& n,
                         const std::vector<ShuffleElt>& basis, int shift) {
  KMatrix rows;
  for (const auto& word : c.orderings(n)) {
    std::vector<std::map<ZExpo, KScalar>> cones;
    std::set<ZExpo> monos;
    for (const auto& F : basis) {
      cones.push_back(cone_row(c, word, F, r, shift));
      for (const auto& [e, coef] : cones.back()) monos.insert(e);
    }
    for (const auto& e : monos) {
      KVector row;
      for (const auto& m : cones) {
        auto it = m.find(e);
        row.push_back(it == m.end() ? c.zero() : it->second);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

/**
 * Pairing conditions for the Full kernel variant with generator exponents
 * extended down to -N.  A product of generators with a negative exponent is
 * no longer in the slope >= 0 subspace by itself; only linear combinations
 * of such products that land back in it give valid conditions.  For each
 * combination the condition row is the matching combination of constant
 * terms of the basis integrands.
 */
inline KMatrix full_rows(const CartanData& c, const std::vector<int>& r,
                         const std::vector<int>& n, int d,
                         const std::vector<ShuffleElt>& basis, int N) {
  (void)d;
  const int total = total_vars(n);
  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  const std::vector<int> ones(c.ncolors(), 1);

  struct Entry {
    LaurentPoly prod;
    KVector cts;
  };
  std::vector<Entry> entries;

  for (const auto& word : c.orderings(n)) {
    // Degree balance: the constant term survives only when the integrand's
    // total degree vanishes, which pins down the sum of the exponents D_a.
    FactoredRat probe = zeta_integrand(c, word, basis[0]);
    int target = static_cast<int>(probe.den().size()) -
                 LaurentPoly::total_degree(probe.num().terms().begin()->first);
    for (int a = 0; a < total; ++a) target += r[word.colors[a]];
    if (target + N * total < 0) continue;

    std::vector<ZExpo> tuples;
    ZExpo D(total, 0);
    std::function<void(int, int)> rec = [&](int a, int rem) {
      if (a == total - 1) {
        if (rem >= -N) {
          D[a] = rem;
          tuples.push_back(D);
        }
        return;
      }
      for (int v = -N; v <= rem + N * (total - 1 - a); ++v) {
        D[a] = v;
        rec(a + 1, rem - v);
      }
    };
    if (total == 0) continue;
    rec(0, target);
    if (tuples.empty()) continue;

    std::vector<FactoredRat> frames;
    for (const auto& F : basis) frames.push_back(zeta_integrand(c, word, F));
    Window ct_win{ZExpo(total, 0), ZExpo(total, 0)};

    for (const auto& t : tuples) {
      // e_{i_1,D_1} * ... * e_{i_n,D_n}, leftmost factor innermost contour.
      ShuffleElt P = generator(c, +1, word.colors[0], t[0]);
      for (int a = 1; a < total; ++a)
        P = shuffle_mul(c, P, generator(c, +1, word.colors[a], t[a]));
      Entry ent{P.num, {}};
      ZExpo sh(total, 0);
      for (int a = 0; a < total; ++a) sh[a] = t[a] - r[word.colors[a]];
      for (const auto& f : frames) {
        LaurentPoly ct = expand_series(
            FactoredRat(f.num().shifted(sh), f.den()), order, ct_win);
        KScalar v = c.zero();
        for (auto& [e, coef] : ct.terms()) v += coef;
        ent.cts.push_back(v);
      }
      entries.push_back(std::move(ent));
    }
  }
  if (entries.empty()) return {};

  // Monomials violating slope >= 0: combinations must avoid them.
  auto subs = subset_data(c, n, ones);
  SlopeConstraint constraint{SlopeRel::GE, 0, 1, ones};
  std::set<ZExpo> bad;
  for (const auto& ent : entries)
    for (auto& [e, coef] : ent.prod.terms()) {
      for (const auto& s : subs)
        if (!monomial_subset_ok(e, s, +1, constraint)) {
          bad.insert(e);
          break;
        }
    }
  KMatrix m;
  for (const auto& e : bad) {
    KVector row;
    for (const auto& ent : entries) {
      auto it = ent.prod.terms().find(e);
      row.push_back(it == ent.prod.terms().end() ? c.zero() : it->second);
    }
    m.push_back(std::move(row));
  }
  KMatrix rows;
  for (const auto& lam :
       nullspace(m, static_cast<int>(entries.size()), c.arity())) {
    KVector row(basis.size(), c.zero());
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (lam[k].is_zero()) continue;
      for (std::size_t j = 0; j < basis.size(); ++j)
        row[j] += lam[k] * entries[k].cts[j];
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

/// Kernel of the r-twisted conditions inside the cell S_{<0|-n, d}.
inline KernelCell j_r_kernel(const CartanData& c, const std::vector<int>& r,
                             const std::vector<int>& n, int d,
                             KernelVariant variant = KernelVariant::Ring,
                             int max_shift = 6) {
  KernelCell cell;
  cell.n = n;
  cell.d = d;
  if (total_vars(n) == 0) {
    if (d == 0) {
      cell.basis = {unit_elt(c, -1)};
      cell.codim = 1;  // the vacuum line is never in the kernel
    }
    return cell;
  }
  cell.basis = basis_s_neg(c, n, d, std::vector<int>(c.ncolors(), 1));
  if (cell.basis.empty()) return cell;

  KMatrix rows;
  if (variant == KernelVariant::Ring) {
    rows = detail::cone_rows(c, r, n, cell.basis, 0);
  } else {
    int prev = -1;
    bool stable = false;
    for (int N = 0; N <= max_shift; ++N) {
      rows = detail::full_rows(c, r, n, d, cell.basis, N);
      int rk = rank(rows);
      if (rk == prev) {
        stable = true;
        break;
      }
      prev = rk;
    }
    if (!stable) throw StabilizationFailure("full J-kernel window");
  }
  cell.kernel = nullspace(rows, static_cast<int>(cell.basis.size()), c.arity());
  cell.codim =
      static_cast<int>(cell.basis.size()) - static_cast<int>(cell.kernel.size());
  return cell;
}

/// d-graded quotient dimensions of the zero-support ideal at multidegree p;
/// the top of the support is certified by two trailing zero pieces.
inline std::map<int, long> nu_graded(const CartanData& c,
                                     const std::vector<int>& r,
                                     const std::vector<int>& p,
                                     KernelVariant variant =
                                         KernelVariant::Ring) {
  std::map<int, long> out;
  if (total_vars(p) == 0) {
    out[0] = 1;
    return out;
  }
  const int dlo = total_vars(p) - den_degree(c, p);
  long span = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    span += static_cast<long>(std::max(r[i], 0)) * p[i];
  int dhi = dlo + static_cast<int>(span) + 2;
  for (int ext = 0; ext <= 3; ++ext) {
    out.clear();
    for (int d = std::max(dlo, 1); d <= dhi; ++d) {
      long cd = j_r_kernel(c, r, p, d, variant).codim;
      if (cd) out[d] = cd;
    }
    if (!out.count(dhi) && !out.count(dhi - 1)) return out;
    dhi += 4;
  }
  throw StabilizationFailure("nu d-grading support");
}

inline long nu_multiplicity(const CartanData& c, const std::vector<int>& r,
                            const std::vector<int>& p,
                            KernelVariant variant = KernelVariant::Ring) {
  long s = 0;
  for (const auto& [d, v] : nu_graded(c, r, p, variant)) s += v;
  return s;
}

/* ---- residue chains (nonzero and mixed supports) ------------------------ */

namespace detail {

/// One iterated-residue condition family: a color word, an assignment of the
/// support points to positions, the residue order (zero coordinates
/// innermost, then ascending position), and per-position exponent bounds.
struct ChainPlan {
  VarSet word;
  std::vector<GammaPoint> pts;
  std::vector<int> chain;
  std::vector<int> bound;
  /// Every chain step is a plain substitution (net pole order at most one),
  /// so the residue of z^G times the integrand is x^G times the residue at
  /// G = 0: one exponent per family suffices, exactly.
  bool scalar_g = false;
};

/// Pole order of psi_i(z)/z at the point (0 allowed).
inline int pole_order_at(const EllWeight& psi, int i, const GammaPoint& x) {
  const auto& k = psi.comp(i);
  if (x.zero) return std::max(1 - k.zpow, 0);
  int m = 0;
  for (const auto& y : k.poles)
    if (y == x) ++m;
  return m;
}

/**
 * All residue chains with a chance of being nonzero: a nonzero coordinate
 * must be a pole of its psi component or a q^{-d} shift of an earlier
 * nonzero coordinate (this pruning is exact: otherwise no denominator factor
 * vanishes at that residue step).
 */
inline std::vector<ChainPlan> chain_plans(const CartanData& c,
                                          const EllWeight& psi,
                                          const Support& x) {
  std::vector<ChainPlan> out;
  const auto sizes = x.sizes();
  for (const auto& word : c.orderings(sizes)) {
    const int N = word.nvars();
    std::vector<std::vector<std::vector<GammaPoint>>> percolor(c.ncolors());
    for (int i = 0; i < c.ncolors(); ++i) {
      std::vector<GammaPoint> v = x.pts[i];
      do {
        percolor[i].push_back(v);
      } while (std::next_permutation(v.begin(), v.end()));
    }
    std::vector<std::vector<int>> pos(c.ncolors());
    for (int a = 0; a < N; ++a) pos[word.colors[a]].push_back(a);

    std::vector<std::size_t> which(c.ncolors(), 0);
    while (true) {
      ChainPlan plan;
      plan.word = word;
      plan.pts.assign(N, GammaPoint::zero_point(c.arity()));
      for (int i = 0; i < c.ncolors(); ++i)
        for (std::size_t k = 0; k < pos[i].size(); ++k)
          plan.pts[pos[i][k]] = percolor[i][which[i]][k];
      for (int a = 0; a < N; ++a)
        if (plan.pts[a].zero) plan.chain.push_back(a);
      for (int a = 0; a < N; ++a)
        if (!plan.pts[a].zero) plan.chain.push_back(a);

      bool feasible = true;
      for (int a = 0; a < N && feasible; ++a) {
        if (plan.pts[a].zero) continue;
        bool ok = pole_order_at(psi, word.colors[a], plan.pts[a]) > 0;
        for (int b = 0; b < a && !ok; ++b) {
          if (plan.pts[b].zero) continue;
          ok = plan.pts[a] ==
               plan.pts[b] * c.qpow(-c.d(word.colors[b], word.colors[a]));
        }
        feasible = ok;
      }
      // Exact zero-chain prune.  While every step so far is a plain
      // substitution (net pole order <= 1), a step whose guaranteed
      // numerator zeros (same-color coincidences among already-substituted
      // points) reach its maximal pole order makes every residue in the
      // family vanish identically, for all exponents G.
      bool simple_all = feasible;
      if (feasible) {
        bool simple_so_far = true;
        for (int idx = 0; idx < N && simple_so_far; ++idx) {
          int pos = plan.chain[idx];
          if (plan.pts[pos].zero) {  // order at 0 depends on G
            simple_all = false;
            break;
          }
          int P = pole_order_at(psi, word.colors[pos], plan.pts[pos]);
          int V = 0;
          for (int jdx = 0; jdx < idx; ++jdx) {
            int prev = plan.chain[jdx];
            if (prev > pos || plan.pts[prev].zero) continue;
            if (plan.pts[pos] ==
                plan.pts[prev] *
                    c.qpow(-c.d(word.colors[prev], word.colors[pos])))
              ++P;
            if (word.colors[prev] == word.colors[pos] &&
                plan.pts[pos] == plan.pts[prev])
              ++V;
          }
          if (V >= P) {
            feasible = false;
            break;
          }
          if (P - V > 1) {
            simple_so_far = false;
            simple_all = false;
          }
        }
      }
      if (feasible) {
        plan.scalar_g = simple_all;
        plan.bound.assign(N, 0);
        for (int a = 0; a < N; ++a)
          plan.bound[a] = pole_order_at(psi, word.colors[a], plan.pts[a]);
        for (int a = 0; a < N; ++a)
          for (int b = a + 1; b < N; ++b) {
            GammaPoint g = c.qpow(-c.d(word.colors[a], word.colors[b]));
            bool vanish =
                (plan.pts[a].zero && plan.pts[b].zero) ||
                (!plan.pts[a].zero && !plan.pts[b].zero &&
                 plan.pts[b] == plan.pts[a] * g);
            if (vanish) ++plan.bound[b];
          }
        if (plan.scalar_g) plan.bound.assign(N, 0);
        out.push_back(std::move(plan));
      }

      int i = c.ncolors() - 1;
      while (i >= 0 && which[i] + 1 == percolor[i].size()) {
        which[i] = 0;
        --i;
      }
      if (i < 0) break;
      ++which[i];
    }
  }
  return out;
}

/// The full integrand for one plan and one shuffle element: the zeta frame
/// times prod_a psi_{i_a}(z_a)/z_a.
inline FactoredRat chain_base(const CartanData& c, const EllWeight& psi,
                              const ChainPlan& plan, const ShuffleElt& F) {
  FactoredRat f = zeta_integrand(c, plan.word, F);
  for (int a = 0; a < plan.word.nvars(); ++a) {
    psi.apply_to(f, a, plan.word.colors[a]);
    f.push_den(DenFactor::z(a, c.arity()));
  }
  return f;
}

/// The iterated residue of base * z^g along the plan's chain.
inline KScalar chain_value(const CartanData& c, const ChainPlan& plan,
                           const FactoredRat& base, const ZExpo& g) {
  FactoredRat f(base.num().shifted(g), base.den());
  for (int p : plan.chain) {
    f = residue_at(f, p, plan.pts[p]);
    if (f.is_zero()) return c.zero();
  }
  if (!f.den().empty())
    throw std::runtime_error("residue chain left a denominator");
  KScalar v = c.zero();
  for (auto& [e, coef] : f.num().terms()) v += coef;
  return v;
}

/// All exponent vectors 0 <= g_a <= cap_a.
inline std::vector<ZExpo> exponent_box(const std::vector<int>& cap) {
  std::vector<ZExpo> out;
  ZExpo g(cap.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t a) {
    if (a == cap.size()) {
      out.push_back(g);
      return;
    }
    for (int v = 0; v <= cap[a]; ++v) {
      g[a] = v;
      rec(a + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace detail

/**
 * Multiplicity of the support x (zeros allowed): the rank of the iterated
 * residue conditions on the window basis of the slope-negative cells.  The
 * window grows until two consecutive ranks agree; the exponent bound B is
 * certified by recomputing at 2B (BoundUncertain if the ranks differ).
 */
inline long mu_multiplicity(const CartanData& c, const EllWeight& psi,
                            const Support& x, int max_window = 8) {
  const int total = x.total();
  if (total == 0) return 1;
  auto plans = detail::chain_plans(c, psi, x);
  if (plans.empty()) return 0;
  const auto sizes = x.sizes();
  const int dlo = total - den_degree(c, sizes);
  const std::vector<int> ones(c.ncolors(), 1);

  // Conditions: per plan, the doubled exponent box; the first block of each
  // plan's box (g <= B) is the certified small set.
  struct Cond {
    std::size_t plan;
    ZExpo g;
    bool small;
  };
  std::vector<Cond> conds;
  for (std::size_t pi = 0; pi < plans.size(); ++pi) {
    std::vector<int> doubled(plans[pi].bound);
    if (!plans[pi].scalar_g)
      for (int& b : doubled) b = std::max(2 * b, b + 1);
    for (const auto& g : detail::exponent_box(doubled)) {
      bool small = true;
      for (std::size_t a = 0; a < g.size(); ++a)
        if (g[a] > plans[pi].bound[a]) small = false;
      conds.push_back({pi, g, small});
    }
  }

  std::vector<KVector> cols;  // per basis element, values over conds
  auto add_columns = [&](int d) {
    for (const auto& F : basis_s_neg(c, sizes, d, ones)) {
      KVector col;
      col.reserve(conds.size());
      std::size_t k = 0;
      for (std::size_t pi = 0; pi < plans.size(); ++pi) {
        FactoredRat base = detail::chain_base(c, psi, plans[pi], F);
        for (; k < conds.size() && conds[k].plan == pi; ++k)
          col.push_back(detail::chain_value(c, plans[pi], base, conds[k].g));
      }
      cols.push_back(std::move(col));
    }
  };
  auto rank_of = [&](bool small_only) {
    KMatrix m;
    for (const auto& col : cols) {
      KVector row;
      for (std::size_t k = 0; k < conds.size(); ++k)
        if (!small_only || conds[k].small) row.push_back(col[k]);
      m.push_back(std::move(row));
    }
    return rank(m);
  };

  int prev = -1, stabilized = -1;
  for (int D = dlo; D <= dlo + max_window; ++D) {
    add_columns(D);
    int rk = rank_of(false);
    if (rk == prev) {
      stabilized = rk;
      break;
    }
    prev = rk;
  }
  if (stabilized < 0) throw StabilizationFailure("mu window basis");
  if (rank_of(true) != stabilized)
    throw BoundUncertain("mu exponent box at support " +
                         x.to_string(c.params()));
  return stabilized;
}

/* ---- candidate supports and q-characters -------------------------------- */

/// Breadth-first closure of the pole-or-shift criterion: a point of color i
/// is a pole of psi_i or y q^{-d_ij} for an already-present y of color j.
/// Returns all nonzero candidate supports within the box (including the
/// empty support).
inline std::vector<Support> candidate_supports(const CartanData& c,
                                               const EllWeight& psi,
                                               const std::vector<int>& nmax) {
  std::set<Support> seen;
  Support empty(c.ncolors());
  seen.insert(empty);
  std::vector<Support> queue{empty};
  while (!queue.empty()) {
    Support s = queue.back();
    queue.pop_back();
    for (int i = 0; i < c.ncolors(); ++i) {
      if (static_cast<int>(s.pts[i].size()) >= nmax[i]) continue;
      std::set<GammaPoint> opts;
      for (const auto& p : psi.poles_nonzero(i)) opts.insert(p);
      for (int j = 0; j < c.ncolors(); ++j)
        for (const auto& y : s.pts[j]) opts.insert(y * c.qpow(-c.d(j, i)));
      for (const auto& p : opts) {
        Support t = s;
        t.pts[i].push_back(p);
        t.normalize();
        if (seen.insert(t).second) queue.push_back(t);
      }
    }
  }
  return {seen.begin(), seen.end()};
}

enum class CharMode { Factored, Direct };

struct QCharacter {
  std::vector<int> nmax;
  std::map<Support, long> mult;

  bool operator==(const QCharacter& o) const {
    return nmax == o.nmax && mult == o.mult;
  }
};

namespace detail {

/// Visit every zero-padding p with sizes + p <= nmax componentwise.
template <typename Fn>
inline void for_each_padding(const std::vector<int>& sizes,
                             const std::vector<int>& nmax, Fn&& fn) {
  std::vector<int> p(sizes.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == p.size()) {
      fn(p);
      return;
    }
    for (int v = 0; v + sizes[i] <= nmax[i]; ++v) {
      p[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
}

}  // namespace detail

/**
 * The support-multiplicity table of the modified simple module on the box.
 * Factored mode assembles mu(nonzero part) * nu(zero part); Direct mode runs
 * the mixed residue chains on every padded candidate.  The two agree (the
 * factorization theorem), which the tests cross-validate.
 */
inline QCharacter q_character(const CartanData& c, const EllWeight& psi,
                              const std::vector<int>& nmax,
                              CharMode mode = CharMode::Factored) {
  QCharacter out;
  out.nmax = nmax;
  const auto ords = psi.ord();
  std::map<std::vector<int>, long> nu_cache;
  auto nu_of = [&](const std::vector<int>& p) {
    auto it = nu_cache.find(p);
    if (it == nu_cache.end())
      it = nu_cache.emplace(p, nu_multiplicity(c, ords, p)).first;
    return it->second;
  };
  for (const auto& y : candidate_supports(c, psi, nmax)) {
    if (mode == CharMode::Factored) {
      long mu = mu_multiplicity(c, psi, y);
      if (mu == 0) continue;
      detail::for_each_padding(y.sizes(), nmax, [&](const std::vector<int>& p) {
        long nu = nu_of(p);
        if (nu) out.mult[padded_support(y, p, c.arity())] = mu * nu;
      });
    } else {
      detail::for_each_padding(y.sizes(), nmax, [&](const std::vector<int>& p) {
        Support xp = padded_support(y, p, c.arity());
        long mu = mu_multiplicity(c, psi, xp);
        if (mu) out.mult[xp] = mu;
      });
    }
  }
  return out;
}

/* ---- the whole-kernel constant-term route ------------------------------- */

/**
 * dim of the quotient of the windowed slope-negative space by the full
 * psi-kernel, via constant-term conditions in the region 1 << |z_1| << ...
 * << |z_n| (poles of psi inside every contour).  Used as an independent
 * cross-check of sum-of-multiplicities identities.
 */
inline long j_psi_quotient_dim(const CartanData& c, const EllWeight& psi,
                               const std::vector<int>& n,
                               int max_window = 8) {
  const int N = total_vars(n);
  if (N == 0) return 1;
  const int dlo = N - den_degree(c, n);
  const std::vector<int> ones(c.ncolors(), 1);
  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);

  auto rank_for = [&](int D, int Dg) {
    std::vector<ShuffleElt> basis;
    for (int d = dlo; d <= D; ++d)
      for (auto& F : basis_s_neg(c, n, d, ones)) basis.push_back(F);
    if (basis.empty()) return 0;
    KMatrix rows;
    for (const auto& word : c.orderings(n)) {
      std::vector<std::map<ZExpo, KScalar>> vals;
      for (const auto& F : basis) {
        // Constant terms CT[z^D f] with D_a in [0, Dg] are the coefficients
        // of f at the exponents -D; no 1/z_a here (the constant-term
        // convention already carries the dz/z measure).
        FactoredRat f = zeta_integrand(c, word, F);
        for (int a = 0; a < N; ++a) psi.apply_to(f, a, word.colors[a]);
        Window win{ZExpo(N, -Dg), ZExpo(N, 0)};
        LaurentPoly s = expand_series(f, order, win);
        std::map<ZExpo, KScalar> m;
        for (auto& [e, coef] : s.terms()) m.emplace(e, coef);
        vals.push_back(std::move(m));
      }
      // One condition per exponent vector in [0, Dg]^N: the coefficient of
      // z^{-e} of the expansion (the constant term of z^e times it).
      std::set<ZExpo> monos;
      for (const auto& m : vals)
        for (const auto& [e, coef] : m) monos.insert(e);
      for (const auto& e : monos) {
        KVector row;
        for (const auto& m : vals) {
          auto it = m.find(e);
          row.push_back(it == m.end() ? c.zero() : it->second);
        }
        rows.push_back(std::move(row));
      }
    }
    return rank(rows);
  };

  int prev = -1;
  for (int k = 0; k <= max_window; ++k) {
    int rk = rank_for(dlo + 1 + k, 2 + k);
    if (rk == prev) return rk;
    prev = rk;
  }
  throw StabilizationFailure("whole-kernel constant-term window");
}

/* ---- refined characters -------------------------------------------------- */

/// Coefficient table dim(S_{<0|-n,d} / J^r_{n,d}) on the box.
inline CharSeries refined_character(const CartanData& c,
                                    const std::vector<int>& r,
                                    const std::vector<int>& nmax, int dmax,
                                    KernelVariant variant =
                                        KernelVariant::Ring) {
  CharSeries s(nmax, dmax);
  std::vector<int> n(c.ncolors(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n.size()) {
      if (total_vars(n) == 0) {
        s.add(n, 0, 1);
        return;
      }
      for (int d = 0; d <= dmax; ++d) {
        long cd = j_r_kernel(c, r, n, d, variant).codim;
        if (cd) s.add(n, d, cd);
      }
      return;
    }
    for (int v = 0; v <= nmax[i]; ++v) {
      n[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return s;
}

/* ---- monochrome weights and truncated characters ------------------------- */

/// Black: no coordinate of y is a zero of the matching tau component.
inline bool is_black(const CartanData&, const EllWeight& tau,
                     const Support& y) {
  for (int i = 0; i < y.ncolors(); ++i)
    for (const auto& p : y.pts[i]) {
      if (p.zero) return false;
      for (const auto& z : tau.comp(i).zeros)
        if (z == p) return false;
    }
  return true;
}

/**
 * White: every residue chain of (any wheel-space element) * prod tau at the
 * support vanishes.  Tested on the full Laurent monomial window of the wheel
 * space, one step beyond the jet bound of the integrand's pole orders.
 */
inline bool is_white(const CartanData& c, const EllWeight& psi,
                     const EllWeight& tau, const Support& y) {
  EllWeight pt = psi * tau;
  auto plans = detail::chain_plans(c, pt, y);
  if (plans.empty()) return true;
  const auto sizes = y.sizes();
  VarSet vars = flat_vars(c, sizes);
  const int N = vars.nvars();

  int W = 1;
  for (const auto& plan : plans) {
    int jet = 1;
    for (int b : plan.bound) jet += b + 1;
    W = std::max(W, jet);
  }

  // Laurent monomial orbits with exponents in [-W, W], wheel-solved.
  std::vector<LaurentPoly> orbits;
  {
    std::vector<ZExpo> reps;
    ZExpo e(N, 0);
    std::function<void(int, int, int)> rec = [&](int a, int block_start,
                                                 int prev) {
      if (a == N) {
        reps.push_back(e);
        return;
      }
      int start = (a == block_start) ? W : prev;
      for (int v = -W; v <= start; ++v) {
        e[a] = v;
        int bs = block_start;
        if (a + 1 < N && vars.colors[a + 1] != vars.colors[a]) bs = a + 1;
        rec(a + 1, bs, v);
      }
    };
    rec(0, 0, W);
    for (const auto& rep : reps) {
      LaurentPoly orbit(N, c.arity());
      std::set<ZExpo> seenmono;
      for (const auto& perm : color_permutations(vars)) {
        ZExpo f(N, 0);
        for (int a = 0; a < N; ++a) f[perm[a]] = rep[a];
        if (seenmono.insert(f).second) orbit.add_term(f, c.one());
      }
      orbits.push_back(std::move(orbit));
    }
  }
  std::vector<ShuffleElt> elts;
  auto wheels = detail::wheel_instances(c, sizes);
  if (wheels.empty()) {
    for (auto& o : orbits) elts.emplace_back(-1, sizes, std::move(o));
  } else {
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
    for (const auto& v :
         nullspace(rows, static_cast<int>(orbits.size()), c.arity())) {
      LaurentPoly p(N, c.arity());
      for (std::size_t i = 0; i < orbits.size(); ++i) p = p + orbits[i] * v[i];
      elts.emplace_back(-1, sizes, std::move(p));
    }
  }

  const ZExpo g0(N, 0);
  for (const auto& F : elts)
    for (const auto& plan : plans) {
      FactoredRat base = detail::chain_base(c, pt, plan, F);
      if (!detail::chain_value(c, plan, base, g0).is_zero()) return false;
    }
  return true;
}

struct MonochromeResult {
  bool monochrome = true;
  std::vector<Support> black, white;
  std::optional<Support> offending;  ///< first support neither black nor white
  QCharacter truncated;
  bool identity_holds = false;
};

/**
 * Classify every candidate support as black or white, compute the truncated
 * q-character (black supports only), and verify the truncation identity
 *    chi_q(psi * tau) = chi^tau_q(psi) * [tau] chi^{ord psi tau}
 * as an equality of support tables on the box.
 */
inline MonochromeResult monochrome_and_truncated(const CartanData& c,
                                                 const EllWeight& psi,
                                                 const EllWeight& tau,
                                                 const std::vector<int>& nmax) {
  if (!psi.is_regular())
    throw std::runtime_error("monochrome analysis requires a regular weight");
  if (!tau.is_polynomial())
    throw std::runtime_error("monochrome analysis requires a polynomial tau");
  MonochromeResult res;
  res.truncated.nmax = nmax;
  EllWeight pt = psi * tau;

  std::set<Support> cands;
  for (const auto& s : candidate_supports(c, psi, nmax)) cands.insert(s);
  for (const auto& s : candidate_supports(c, pt, nmax)) cands.insert(s);
  for (const auto& y : cands) {
    if (is_black(c, tau, y))
      res.black.push_back(y);
    else if (is_white(c, psi, tau, y))
      res.white.push_back(y);
    else {
      res.monochrome = false;
      if (!res.offending) res.offending = y;
    }
  }

  QCharacter chi = q_character(c, psi, nmax, CharMode::Factored);
  for (const auto& [s, m] : chi.mult)
    if (is_black(c, tau, s)) res.truncated.mult[s] = m;

  QCharacter lhs = q_character(c, pt, nmax, CharMode::Factored);
  QCharacter rhs;
  rhs.nmax = nmax;
  const auto ordpt = pt.ord();
  for (const auto& [y, m] : res.truncated.mult)
    detail::for_each_padding(y.sizes(), nmax, [&](const std::vector<int>& p) {
      long nu = nu_multiplicity(c, ordpt, p);
      if (nu) rhs.mult[padded_support(y, p, c.arity())] += m * nu;
    });
  for (auto it = rhs.mult.begin(); it != rhs.mult.end();)
    it = it->second == 0 ? rhs.mult.erase(it) : std::next(it);
  res.identity_holds = (lhs == rhs);
  return res;
}

/* ---- action and grading bookkeeping ------------------------------------- */

/// Multiplication by the color-i power sum sum_a z_{ia}^u.
inline ShuffleElt multiply_power_sum(const CartanData& c, const ShuffleElt& x,
                                     int color, int u) {
  VarSet vars = flat_vars(c, x.n);
  LaurentPoly ps(vars.nvars(), c.arity());
  for (int a = 0; a < vars.nvars(); ++a)
    if (vars.colors[a] == color) {
      ZExpo e(vars.nvars(), 0);
      e[a] = u;
      ps.add_term(e, c.one());
    }
  return ShuffleElt(x.sign, x.n, x.num * ps);
}

/// Membership of an explicit element in the ring-variant r-kernel.
inline bool in_j_r(const CartanData& c, const std::vector<int>& r,
                   const ShuffleElt& F) {
  if (F.num.is_zero()) return true;
  for (const auto& word : c.orderings(F.n))
    if (!detail::cone_row(c, word, F, r, 0).empty()) return false;
  return true;
}

/**
 * Grading bookkeeping for the power-sum action on the r-kernel quotients:
 * p_u maps the (n, d) cell into (n, d + u), preserves the slope-negative
 * space, preserves the kernel (the module property), and kills every class
 * once the target quotient cell is empty (nilpotency).
 */
inline bool action_grading_check(const CartanData& c, const std::vector<int>& r,
                                 const std::vector<int>& n, int d, int u) {
  const std::vector<int> ones(c.ncolors(), 1);
  KernelCell cell = j_r_kernel(c, r, n, d);
  for (int i = 0; i < c.ncolors(); ++i) {
    if (n[i] == 0) continue;
    for (const auto& F : cell.basis) {
      ShuffleElt G = multiply_power_sum(c, F, i, u);
      if (G.num.is_zero()) continue;
      if (vdeg(c, G) != d + u) return false;
      if (!slope_test(c, G, 0, 1, SlopeRel::LT, ones)) return false;
    }
    for (const auto& v : cell.kernel) {
      LaurentPoly p(flat_vars(c, n).nvars(), c.arity());
      for (std::size_t j = 0; j < cell.basis.size(); ++j)
        p = p + cell.basis[j].num * v[j];
      ShuffleElt F(-1, n, std::move(p));
      if (!in_j_r(c, r, multiply_power_sum(c, F, i, u))) return false;
    }
  }
  return true;
}

}  // namespace qsh
