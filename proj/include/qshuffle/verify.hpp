/**
 * @file verify.hpp
 * @brief The `verify` suite: a fast, fully exact battery of cross-checks
 *        covering every engine (characters vs product formulas, factorization
 *        of multiplicities, kernels vs path counts, pairing values, algebraic
 *        property spot checks).  Each row is independent; the suite report is
 *        deterministic byte for byte.
 */
#pragma once

#include <qshuffle/report.hpp>
#include <qshuffle/toroidal.hpp>

#include <random>

namespace qsh {

struct VerifyRow {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

/// Random color-symmetric element of V_n with small exponents.
inline ShuffleElt random_symmetric_elt(const CartanData& c, std::mt19937& rng,
                                       const std::vector<int>& n, int sign) {
  VarSet vars = flat_vars(c, n);
  std::uniform_int_distribution<int> expo(0, 2), coef(-3, 3);
  LaurentPoly num(vars.nvars(), c.arity());
  ZExpo e(vars.nvars());
  for (auto& x : e) x = expo(rng);
  for (const auto& perm : color_permutations(vars)) {
    ZExpo f(vars.nvars(), 0);
    for (int a = 0; a < vars.nvars(); ++a) f[perm[a]] = e[a];
    bool dup = false;
    for (auto& [m, cc] : num.terms())
      if (m == f) dup = true;
    if (!dup) num.add_term(f, c.one());
  }
  return ShuffleElt(sign, n, num * KScalar::from_int(c.arity(), coef(rng)));
}

/// The sl2 weight of the mixed-support factorization check:
/// (zq - q^-1) / (z (z - 1)), of order 1 with one nonzero pole.
inline EllWeight mixed_weight(const CartanData& c) {
  EllWeight psi(c);
  psi.comp(0).c = KScalar::from_gamma(c.qpow(1));
  psi.comp(0).zeros = {c.qpow(-2)};
  psi.comp(0).poles = {c.qpow(0)};
  psi.comp(0).zpow = -1;
  return psi;
}

}  // namespace detail

inline std::vector<VerifyRow> run_verify_suite() {
  std::vector<VerifyRow> rows;
  auto add = [&](const std::string& name, const std::string& detail,
                 const std::function<bool()>& f) {
    VerifyRow r{name, false, detail};
    try {
      r.pass = f();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = detail + " [exception: " + std::string(e.what()) + "]";
    }
    rows.push_back(std::move(r));
  };

  add("kr-q-characters", "sl2 psi_k chains, k = 1, 2", [] {
    CartanData c = CartanData::sl2();
    for (int k = 1; k <= 2; ++k) {
      QCharacter chi = q_character(c, psi_k_weight(c, k), {k + 2});
      if (static_cast<int>(chi.mult.size()) != k + 1) return false;
      for (int len = 0; len <= k; ++len) {
        Support s(1);
        for (int j = 0; j < len; ++j) s.pts[0].push_back(c.qpow(-2 * j));
        s.normalize();
        auto it = chi.mult.find(s);
        if (it == chi.mult.end() || it->second != 1) return false;
      }
    }
    return true;
  });

  add("refined-vs-product", "sl2 r = 1, 2 refined characters", [] {
    CartanData c = CartanData::sl2();
    return refined_character(c, {1}, {3}, 4) ==
               mukhin_young_product(c, {1}, {3}, 4) &&
           refined_character(c, {2}, {3}, 6) ==
               mukhin_young_product(c, {2}, {3}, 6);
  });

  add("trivial-negative-r", "all kernels full at r < 0", [] {
    CartanData c2 = CartanData::sl2(), c3 = CartanData::sl3();
    return refined_character(c2, {-1}, {2}, 3) == CharSeries::one({2}, 3) &&
           refined_character(c3, {-1, -1}, {1, 1}, 2) ==
               CharSeries::one({1, 1}, 2);
  });

  add("mixed-factorization", "factored == direct for a mixed weight", [] {
    CartanData c = CartanData::sl2();
    EllWeight psi = detail::mixed_weight(c);
    return q_character(c, psi, {2}, CharMode::Factored) ==
           q_character(c, psi, {2}, CharMode::Direct);
  });

  add("regular-no-zero-supports", "regular weights avoid the point 0", [] {
    CartanData c = CartanData::sl2();
    for (int k = 1; k <= 2; ++k) {
      QCharacter chi = q_character(c, psi_k_weight(c, k), {3});
      for (const auto& [s, m] : chi.mult)
        if (s.contains_zero()) return false;
    }
    return true;
  });

  add("monochrome-truncation", "k = 2, k' = 1 truncation identity", [] {
    CartanData c = CartanData::sl2();
    EllWeight psi = psi_k_weight(c, 2), tau(c);
    tau.comp(0).zeros = {c.qpow(-2)};
    tau.comp(0).zpow = -1;
    MonochromeResult res = monochrome_and_truncated(c, psi, tau, {2});
    return res.monochrome && res.identity_holds;
  });

  add("toroidal-characters", "path generating function vs product", [] {
    for (int r = 1; r <= 2; ++r)
      if (!(toroidal_refined_character(r, 3, 6) == toroidal_product(r, 3, 6)))
        return false;
    return true;
  });

  add("toroidal-kernels", "kernel codimensions = path counts", [] {
    CartanData c = CartanData::toroidal();
    ToroidalWeight tau = ToroidalWeight::of_order(c, 1);
    for (int n = 1; n <= 2; ++n)
      for (int d = 0; d <= 3; ++d)
        if (toroidal_j_kernel(c, tau, n, d).codim !=
            static_cast<long>(enumerate_paths(n, -d, 1).size()))
          return false;
    return true;
  });

  add("toroidal-pairing", "the three explicit pairing values", [] {
    CartanData c = CartanData::toroidal();
    KScalar one = c.one();
    auto bracket = [&](int g) {
      return (one - KScalar::from_gamma(c.q12(g, 0))) *
             (one - KScalar::from_gamma(c.q12(0, g))) *
             (one - KScalar::from_gamma(c.q12(-g, -g)));
    };
    return path_pairing(c, ConvexPath{{{1, -1}}}) * bracket(1) == one &&
           path_pairing(c, ConvexPath{{{1, -1}, {1, -1}}}) * bracket(1) *
                   bracket(1) ==
               KScalar::from_int(c.arity(), 2) &&
           path_pairing(c, ConvexPath{{{2, -2}}}) * bracket(2) == one;
  });

  add("shuffle-properties", "degree additivity and pole cancellation", [] {
    std::mt19937 rng(6120);
    CartanData sl3 = CartanData::sl3(), tor = CartanData::toroidal();
    std::uniform_int_distribution<int> bit(0, 1);
    for (int iter = 0; iter < 25; ++iter) {
      std::vector<int> na{bit(rng), bit(rng)}, nb{bit(rng), bit(rng)};
      if (total_vars(na) == 0 || total_vars(nb) == 0) continue;
      ShuffleElt a = detail::random_symmetric_elt(sl3, rng, na, +1);
      ShuffleElt b = detail::random_symmetric_elt(sl3, rng, nb, +1);
      ShuffleElt p = shuffle_mul(sl3, a, b);
      if (!a.num.is_zero() && !b.num.is_zero() && !p.num.is_zero() &&
          vdeg(sl3, p) != vdeg(sl3, a) + vdeg(sl3, b))
        return false;
    }
    for (int iter = 0; iter < 15; ++iter) {
      ShuffleElt a = detail::random_symmetric_elt(tor, rng, {bit(rng) + 1}, +1);
      ShuffleElt b = detail::random_symmetric_elt(tor, rng, {bit(rng) + 1}, +1);
      ShuffleElt p = shuffle_mul(tor, a, b);
      if (!a.num.is_zero() && !b.num.is_zero() && !p.num.is_zero() &&
          vdeg(tor, p) != vdeg(tor, a) + vdeg(tor, b))
        return false;
    }
    return true;
  });

  add("wheel-products", "generator products satisfy the wheel conditions", [] {
    CartanData sl3 = CartanData::sl3(), tor = CartanData::toroidal();
    for (int d1 = 0; d1 <= 1; ++d1)
      for (int d2 = 0; d2 <= 1; ++d2) {
        auto p = shuffle_product(
            tor, {generator(tor, +1, 0, d1), generator(tor, +1, 0, d2),
                  generator(tor, +1, 0, 1)});
        if (!wheel_check(tor, p)) return false;
        auto s = shuffle_product(
            sl3, {generator(sl3, +1, 0, d1), generator(sl3, +1, 0, d2),
                  generator(sl3, +1, 1, 0)});
        if (!wheel_check(sl3, s)) return false;
      }
    return true;
  });

  add("slope-disjointness", "slope<0 and slope>=0 cells meet in 0", [] {
    CartanData c = CartanData::sl2();
    std::vector<int> r{1};
    for (int n = 1; n <= 2; ++n)
      for (int d = 1; d <= 3; ++d) {
        auto neg = cell_basis(c, +1, {n}, d,
                              {SlopeConstraint{SlopeRel::LT, 0, 1, r}});
        auto pos = cell_basis(c, +1, {n}, d,
                              {SlopeConstraint{SlopeRel::GE, 0, 1, r}});
        std::vector<ShuffleElt> all = neg;
        all.insert(all.end(), pos.begin(), pos.end());
        if (elt_rank(c, all) !=
            static_cast<int>(neg.size()) + static_cast<int>(pos.size()))
          return false;
      }
    return true;
  });

  add("ring-equals-full", "the two kernel variants agree (finite type)", [] {
    CartanData c = CartanData::sl2();
    for (auto [n, d] : {std::pair{1, 1}, {2, 2}, {2, 3}})
      if (j_r_kernel(c, {1}, {n}, d, KernelVariant::Ring).codim !=
          j_r_kernel(c, {1}, {n}, d, KernelVariant::Full).codim)
        return false;
    return true;
  });

  add("residue-theorem", "one-variable residue sums", [] {
    const int AR = 1;
    std::mt19937 rng(6121);
    std::uniform_int_distribution<int> nfac(1, 3), pick(0, 3), nume(-2, 2),
        numc(-3, 3), numn(1, 3);
    auto gq = [&](int e) {
      Expo x(AR, 0);
      x[0] = e;
      return GammaPoint::monomial(x);
    };
    const std::vector<GammaPoint> pts = {gq(0), gq(1), gq(-1), gq(2)};
    for (int iter = 0; iter < 30; ++iter) {
      LaurentPoly num(1, AR);
      int nt = numn(rng);
      for (int t = 0; t < nt; ++t)
        num.add_term(ZExpo{nume(rng)}, KScalar::from_int(AR, numc(rng)));
      if (num.is_zero()) continue;
      FactoredRat f(num);
      int nf = nfac(rng);
      for (int t = 0; t < nf; ++t) {
        if (pick(rng) == 0 && t == 0)
          f.push_den(DenFactor::z(0, AR));
        else
          f.push_den(DenFactor::zc(0, pts[pick(rng)]));
      }
      auto scalar_of = [&](const FactoredRat& r) {
        if (!r.den().empty()) throw std::runtime_error("residual denominator");
        if (r.is_zero()) return KScalar(AR);
        return r.num().terms().begin()->second;
      };
      KScalar total(AR);
      total = total + scalar_of(residue_at(f, 0, GammaPoint::zero_point(AR)));
      for (const auto& p : pts) total = total + scalar_of(residue_at(f, 0, p));
      Window win{{-1}, {-1}};
      LaurentPoly inf = expand_series(f, {0}, win);
      KScalar coeff(AR);
      if (!inf.is_zero()) coeff = inf.terms().begin()->second;
      if (!(total == coeff)) return false;
    }
    return true;
  });

  return rows;
}

inline Report verify_report(const std::vector<VerifyRow>& rows) {
  Report rep;
  rep.title = "verification suite";
  ReportTable t;
  t.name = "checks";
  t.columns = {"check", "status", "detail"};
  bool all = true;
  for (const auto& r : rows) {
    t.rows.push_back({r.name, r.pass ? "pass" : "FAIL", r.detail});
    all = all && r.pass;
  }
  rep.tables.push_back(std::move(t));
  rep.meta.emplace_back("result", all ? "pass" : "FAIL");
  return rep;
}

/// Run the suite and append the in-memory determinism row: the report of the
/// same results serialized twice must agree byte for byte.
inline std::vector<VerifyRow> run_verify_suite_with_determinism() {
  std::vector<VerifyRow> rows = run_verify_suite();
  Report a = verify_report(rows), b = verify_report(rows);
  rows.push_back(VerifyRow{"determinism",
                           a.to_json() == b.to_json() &&
                               a.to_csv() == b.to_csv() &&
                               a.to_latex() == b.to_latex(),
                           "double serialization byte equality"});
  return rows;
}

inline bool all_pass(const std::vector<VerifyRow>& rows) {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

}  // namespace qsh
