/**
 * @file toroidal.hpp
 * @brief Rank-one toroidal backend: convex-path PBW combinatorics, the
 *        explicit path pairing, refined characters by path counting, and the
 *        direct kernel route through the pairing conditions.
 *
 * A convex path is a sequence (n_1,d_1),...,(n_k,d_k) in Z_{>0} x Z with
 * nondecreasing slopes d_a/n_a and n_a nondecreasing on slope ties; such
 * paths index a PBW basis of the toroidal shuffle algebra, and the paths
 * with slopes inside a window index bases of the slope-filtered cells.
 */
#pragma once

#include <qshuffle/cat_o.hpp>

namespace qsh {

/* ---- convex paths -------------------------------------------------------- */

struct ConvexPath {
  std::vector<std::pair<int, int>> steps;  ///< (n_a, d_a), n_a > 0

  int total_n() const {
    int t = 0;
    for (const auto& [n, d] : steps) t += n;
    return t;
  }
  int total_d() const {
    int t = 0;
    for (const auto& [n, d] : steps) t += d;
    return t;
  }
  bool is_convex() const {
    for (std::size_t a = 0; a + 1 < steps.size(); ++a) {
      auto [n1, d1] = steps[a];
      auto [n2, d2] = steps[a + 1];
      long l = (long)d1 * n2, r = (long)d2 * n1;
      if (l > r || (l == r && n1 > n2)) return false;
    }
    return true;
  }
  bool operator<(const ConvexPath& o) const { return steps < o.steps; }
  bool operator==(const ConvexPath& o) const { return steps == o.steps; }
};

namespace detail {

/// Canonical step order: by slope, then by n (the convexity order).
inline bool step_le(std::pair<int, int> x, std::pair<int, int> y) {
  long l = (long)x.second * y.first, r = (long)y.second * x.first;
  if (l != r) return l < r;
  return x.first <= y.first;
}

}  // namespace detail

/**
 * All convex paths with the given totals whose step slopes d_a/n_a lie in
 * the window [plo/qlo, phi/qhi] (qlo, qhi > 0); each bound may be strict.
 * Deterministic enumeration in the canonical step order.
 */
inline std::vector<ConvexPath> enumerate_paths_window(
    int total_n, int total_d, int plo, int qlo, int phi, int qhi,
    bool lo_strict = false, bool hi_strict = false) {
  std::vector<ConvexPath> out;
  if (total_n < 0) return out;
  ConvexPath cur;
  std::function<void(int, int)> rec = [&](int rem_n, int rem_d) {
    if (rem_n == 0) {
      if (rem_d == 0) out.push_back(cur);
      return;
    }
    for (int m = 1; m <= rem_n; ++m) {
      // Slope window for e: plo/qlo <=(<) e/m <=(<) phi/qhi.
      long lo = detail::ceil_div((long)plo * m + (lo_strict ? 1 : 0), qlo);
      long hi = detail::floor_div((long)phi * m - (hi_strict ? 1 : 0), qhi);
      for (long e = lo; e <= hi; ++e) {
        std::pair<int, int> step{m, static_cast<int>(e)};
        if (!cur.steps.empty() && !detail::step_le(cur.steps.back(), step))
          continue;
        cur.steps.push_back(step);
        rec(rem_n - m, rem_d - static_cast<int>(e));
        cur.steps.pop_back();
      }
    }
  };
  rec(total_n, total_d);
  std::sort(out.begin(), out.end());
  return out;
}

/// Paths of the simple-module PBW basis: slopes in [-r, 0).
inline std::vector<ConvexPath> enumerate_paths(int total_n, int total_d,
                                               int r) {
  if (r < 1) throw std::invalid_argument("enumerate_paths: r must be >= 1");
  return enumerate_paths_window(total_n, total_d, -r, 1, 0, 1, false, true);
}

/* ---- the explicit pairing ------------------------------------------------ */

/**
 * <p_v^+, p_v^-> = prod over distinct steps of (multiplicity)! divided by
 * prod_a (1 - q1^{g_a})(1 - q2^{g_a})(1 - q1^{-g_a} q2^{-g_a}) with
 * g_a = gcd(n_a, |d_a|).  Nonzero for generic q1, q2.
 */
inline KScalar path_pairing(const CartanData& c, const ConvexPath& v) {
  if (c.is_loop())
    throw UnsupportedMode("path_pairing needs the toroidal algebra");
  if (!v.is_convex())
    throw std::invalid_argument("path_pairing: path is not convex");
  std::map<std::pair<int, int>, long> mult;
  for (const auto& s : v.steps) ++mult[s];
  BigInt numer = 1;
  for (const auto& [s, m] : mult)
    for (long k = 2; k <= m; ++k) numer *= k;
  KScalar val = KScalar::from_int(c.arity(), numer);
  for (const auto& [n, d] : v.steps) {
    int g = static_cast<int>(std::gcd(n, std::abs(d)));
    KScalar f = (c.one() - KScalar::from_gamma(c.q12(g, 0))) *
                (c.one() - KScalar::from_gamma(c.q12(0, g))) *
                (c.one() - KScalar::from_gamma(c.q12(-g, -g)));
    val = val / f;
  }
  return val;
}

/* ---- characters by path counting ----------------------------------------- */

/**
 * Refined character of the simple module attached to a polynomial weight of
 * order r: the coefficient of h^n v^d counts convex paths with totals
 * (n, -d) and slopes in [-r, 0).  Equals the product
 * prod_{n>=1} prod_{d=1}^{rn} 1/(1 - h^n v^d) on the box.
 */
inline CharSeries toroidal_refined_character(int r, int nmax, int dmax) {
  CharSeries s({nmax}, dmax);
  s.add({0}, 0, 1);
  for (int n = 1; n <= nmax; ++n)
    for (int d = 1; d <= dmax; ++d)
      s.add({n}, d,
            static_cast<long>(enumerate_paths(n, -d, r).size()));
  return s;
}

/* ---- polynomial weights and the direct kernel route ---------------------- */

/// A polynomial weight a_0 + a_1 z^-1 + ... + a_r z^-r with a_0, a_r != 0.
/// Only the order r enters the kernel conditions; the coefficients are kept
/// for validation and reporting.  The highest-weight shift stays symbolic.
struct ToroidalWeight {
  std::vector<KScalar> a;  ///< coefficients of z^0, z^-1, ..., z^-r

  explicit ToroidalWeight(std::vector<KScalar> coeffs) : a(std::move(coeffs)) {
    if (a.empty() || a.front().is_zero() || a.back().is_zero())
      throw std::invalid_argument("ToroidalWeight: ends must be nonzero");
  }
  static ToroidalWeight of_order(const CartanData& c, int r) {
    std::vector<KScalar> coeffs(r + 1, c.zero());
    coeffs.front() = c.one();
    coeffs.back() = c.one();
    return ToroidalWeight(std::move(coeffs));
  }
  int order() const { return static_cast<int>(a.size()) - 1; }
};

/**
 * Kernel of the pairing conditions <E, S(F)> = 0 over E in the slope >= -r
 * subspace, inside the cell of vertical degree d and horizontal degree -n.
 * The quotient codimension equals the number of convex paths with totals
 * (n, -d) and slopes in [-r, 0).
 */
inline KernelCell toroidal_j_kernel(const CartanData& c,
                                    const ToroidalWeight& tau, int n, int d,
                                    int max_shift = 6) {
  if (c.is_loop())
    throw UnsupportedMode("toroidal_j_kernel needs the toroidal algebra");
  return j_r_kernel(c, {tau.order()}, {n}, d, KernelVariant::Full, max_shift);
}

/* ---- slope-filtered cell dimensions (PBW cross-checks) ------------------- */

/// dim of the degree-(n, d) cell with slopes in [plo/qlo, phi/qhi], computed
/// by solving the wheel conditions inside the slope-admissible orbit span.
inline long toroidal_cell_dim(const CartanData& c, int n, int d, int plo,
                              int qlo, int phi, int qhi) {
  if (c.is_loop())
    throw UnsupportedMode("toroidal_cell_dim needs the toroidal algebra");
  std::vector<int> ones{1};
  auto basis = cell_basis(c, +1, {n}, d,
                          {SlopeConstraint{SlopeRel::GE, plo, qlo, ones},
                           SlopeConstraint{SlopeRel::LE, phi, qhi, ones}});
  return static_cast<long>(basis.size());
}

/**
 * dim of the intersection of the span of monomial generator products (degree
 * (n, d), exponents in [-w, w]) with the same slope-filtered cell, as the
 * rank of the full coefficient matrix minus the rank of its slope-violating
 * columns.  The window w grows until two consecutive answers agree.
 */
inline long toroidal_span_cell_dim(const CartanData& c, int n, int d, int plo,
                                   int qlo, int phi, int qhi,
                                   int max_halfwidth = 8) {
  if (c.is_loop())
    throw UnsupportedMode("toroidal_span_cell_dim needs the toroidal algebra");
  std::vector<int> ones{1};
  std::vector<SlopeConstraint> ks{SlopeConstraint{SlopeRel::GE, plo, qlo, ones},
                                  SlopeConstraint{SlopeRel::LE, phi, qhi, ones}};
  auto subs = detail::subset_data(c, {n}, ones);
  long prev = -1;
  for (int w = 2; w <= max_halfwidth; ++w) {
    auto prods = monomial_products(c, +1, {n}, d, -w, w);
    if (prods.empty()) return 0;
    std::set<ZExpo> monos;
    for (const auto& x : prods)
      for (auto& [e, coef] : x.num.terms()) monos.insert(e);
    std::vector<ZExpo> cols(monos.begin(), monos.end());
    KMatrix full, bad;
    for (const auto& x : prods) {
      KVector frow, brow;
      for (const auto& e : cols) {
        auto it = x.num.terms().find(e);
        KScalar v = it == x.num.terms().end() ? c.zero() : it->second;
        frow.push_back(v);
        bool ok = true;
        for (const auto& k : ks)
          for (const auto& s : subs)
            if (!detail::monomial_subset_ok(e, s, +1, k)) ok = false;
        if (!ok) brow.push_back(v);
      }
      full.push_back(std::move(frow));
      bad.push_back(std::move(brow));
    }
    long dim = rank(full) - rank(bad);
    if (dim == prev) return dim;
    prev = dim;
  }
  throw WindowExhausted();
}

}  // namespace qsh
