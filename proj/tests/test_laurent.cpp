/* Tests for Laurent polynomials, factored rationals, residues, region
 * expansion, and cone-coefficient extraction. */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qshuffle/laurent.hpp>

#include <random>

using namespace qsh;

namespace {

const int AR = 1;  // single parameter q

KScalar kq(int e) {
  return KScalar::from_gamma(GammaPoint::monomial(Expo{e}));
}
KScalar kone() { return KScalar::from_int(AR, 1); }
GammaPoint gq(int e) { return GammaPoint::monomial(Expo{e}); }

LaurentPoly zmono(int nvars, const ZExpo& e) {
  return LaurentPoly::monomial(nvars, e, kone());
}

}  // namespace

TEST_CASE("geometric series: 1/(z2 - z1) for |z1| << |z2|") {
  FactoredRat f(LaurentPoly::constant(2, kone()));
  f.push_den_zz(1, 0, gq(0));  // z2 - z1, normalized with unit folding
  Window win{{0, -4}, {3, -1}};
  LaurentPoly s = expand_series(f, {0, 1}, win);
  // z2^-1 + z1 z2^-2 + z1^2 z2^-3 + z1^3 z2^-4
  LaurentPoly expected(2, AR);
  for (int k = 0; k <= 3; ++k)
    expected.add_term(ZExpo{k, -1 - k}, kone());
  CHECK(s == expected);
}

TEST_CASE("zeta expansion: (z1 - q^-2 z2)/(z1 - z2) for |z1| << |z2|") {
  LaurentPoly num = zmono(2, {1, 0}) - zmono(2, {0, 1}) * kq(-2);
  FactoredRat f(num);
  f.push_den_zz(0, 1, gq(0));
  Window win{{0, -3}, {3, 0}};
  LaurentPoly s = expand_series(f, {0, 1}, win);
  // q^-2 + (q^-2 - 1) z1/z2 + (q^-2 - 1) (z1/z2)^2 + ...
  LaurentPoly expected = LaurentPoly::constant(2, kq(-2));
  for (int k = 1; k <= 3; ++k)
    expected.add_term(ZExpo{k, -k}, kq(-2) - kone());
  CHECK(s == expected);
}

TEST_CASE("Sym[zeta(z1/z2)] = 1 + q^-2 exactly") {
  LaurentPoly num = zmono(2, {1, 0}) - zmono(2, {0, 1}) * kq(-2);
  FactoredRat f(num);
  f.push_den_zz(0, 1, gq(0));
  VarSet vars{{0, 0}};
  FactoredRat s = symmetrize(f, vars);
  CHECK(s.den().empty());
  CHECK(s.num() == LaurentPoly::constant(2, kone() + kq(-2)));
}

TEST_CASE("symmetrize respects colors") {
  // Same color: Sym[z1] = z1 + z2.  Different colors: only the identity.
  FactoredRat f(zmono(2, {1, 0}));
  CHECK(symmetrize(f, VarSet{{0, 0}}).num() ==
        zmono(2, {1, 0}) + zmono(2, {0, 1}));
  CHECK(symmetrize(f, VarSet{{0, 1}}).num() == zmono(2, {1, 0}));
}

TEST_CASE("simple residues") {
  // Res_{z=1} 1/(z-1) = 1
  FactoredRat f(LaurentPoly::constant(1, kone()));
  f.push_den(DenFactor::zc(0, gq(0)));
  FactoredRat r = residue_at(f, 0, gq(0));
  CHECK(r.den().empty());
  CHECK(r.num() == LaurentPoly::constant(1, kone()));

  // Regular point: residue vanishes.
  CHECK(residue_at(f, 0, gq(2)).is_zero());

  // Res_{z=0} c z^d / z = c iff d = 0.
  for (int d = -1; d <= 2; ++d) {
    FactoredRat g(zmono(1, {d}) * kq(3));
    g.push_den(DenFactor::z(0, AR));
    FactoredRat rd = residue_at(g, 0, GammaPoint::zero_point(AR));
    if (d == 0)
      CHECK(rd.num() == LaurentPoly::constant(1, kq(3)));
    else
      CHECK(rd.is_zero());
  }
}

TEST_CASE("higher-order pole residues") {
  // Res_{z=1} 1/(z-1)^2 = 0;  Res_{z=1} z^2/(z-1)^2 = 2.
  FactoredRat f(LaurentPoly::constant(1, kone()));
  f.push_den(DenFactor::zc(0, gq(0)));
  f.push_den(DenFactor::zc(0, gq(0)));
  CHECK(residue_at(f, 0, gq(0)).is_zero());

  FactoredRat g(zmono(1, {2}));
  g.push_den(DenFactor::zc(0, gq(0)));
  g.push_den(DenFactor::zc(0, gq(0)));
  CHECK(residue_at(g, 0, gq(0)).num() ==
        LaurentPoly::constant(1, KScalar::from_int(AR, 2)));

  // Numerator also vanishing at the point: (z-1)/(z-1)^2 has residue 1.
  FactoredRat h(zmono(1, {1}) - LaurentPoly::constant(1, kone()));
  h.push_den(DenFactor::zc(0, gq(0)));
  h.push_den(DenFactor::zc(0, gq(0)));
  CHECK(residue_at(h, 0, gq(0)).num() == LaurentPoly::constant(1, kone()));
}

TEST_CASE("residue keeps remaining variables factored") {
  // Res_{z1=q} 1/((z1 - q)(z1 - z2)) = 1/(q - z2) = -1/(z2 - q).
  FactoredRat f(LaurentPoly::constant(2, kone()));
  f.push_den(DenFactor::zc(0, gq(1)));
  f.push_den_zz(0, 1, gq(0));
  FactoredRat r = residue_at(f, 0, gq(1));
  REQUIRE(r.den().size() == 1);
  CHECK(r.den()[0] == DenFactor::zc(1, gq(1)));
  CHECK(r.num() == LaurentPoly::constant(2, -kone()));

  // Res_{z2=0} 1/(z1 - q z2) = 0 (regular), and
  // Res_{z2=0} z2^-1/(z1 - q z2) = 1/z1.
  FactoredRat g(LaurentPoly::constant(2, kone()));
  g.push_den(DenFactor::zz(0, 1, gq(1)));
  CHECK(residue_at(g, 1, GammaPoint::zero_point(AR)).is_zero());
  FactoredRat h(zmono(2, {0, -1}));
  h.push_den(DenFactor::zz(0, 1, gq(1)));
  FactoredRat rh = residue_at(h, 1, GammaPoint::zero_point(AR));
  // Pure z-power denominators fold into Laurent exponents on simplify.
  CHECK(rh.den().empty());
  CHECK(rh.num() == zmono(2, {-1, 0}));
}

TEST_CASE("exact division of Laurent polynomials") {
  LaurentPoly a = zmono(2, {2, 0}) - zmono(2, {0, 2});  // z1^2 - z2^2
  LaurentPoly d = zmono(2, {1, 0}) - zmono(2, {0, 1});  // z1 - z2
  auto q = a.divide_exact(d);
  REQUIRE(q.has_value());
  CHECK(*q == zmono(2, {1, 0}) + zmono(2, {0, 1}));
  CHECK(!zmono(2, {1, 0}).divide_exact(d).has_value());
  // Laurent shifts divide exactly.
  auto q2 = zmono(2, {0, -1}).divide_exact(zmono(2, {1, 0}));
  REQUIRE(q2.has_value());
  CHECK(*q2 == zmono(2, {-1, -1}));
}

TEST_CASE("scaled substitution (wheel-style specialization)") {
  // (z1 - q^-2 z2) vanishes under z2 -> q^2 z1.
  LaurentPoly p = zmono(2, {1, 0}) - zmono(2, {0, 1}) * kq(-2);
  CHECK(p.substitute_scaled(1, 0, gq(2)).is_zero());
  CHECK(p.substitute_const(1, GammaPoint::zero_point(AR)) == zmono(2, {1, 0}));
}

TEST_CASE("cone coefficients: monomials") {
  // f = z1 * z1^-1 = 1: the single all-nonpositive monomial (0) with coeff 1.
  FactoredRat f(LaurentPoly::constant(1, kone()));
  auto cone = cone_coefficients(f, {0});
  REQUIRE(cone.size() == 1);
  CHECK(cone[0].first == ZExpo{0});
  CHECK(cone[0].second == kone());
  // f = z1 (total degree 1 > 0): empty cone.
  CHECK(cone_coefficients(FactoredRat(zmono(1, {1})), {0}).empty());
}

TEST_CASE("cone coefficients: with denominator") {
  // 1/(z1 - z2) in |z1| << |z2|: only z2^-1 is all-nonpositive.
  FactoredRat f(LaurentPoly::constant(2, kone()));
  f.push_den_zz(0, 1, gq(0));
  auto cone = cone_coefficients(f, {0, 1});
  REQUIRE(cone.size() == 1);
  CHECK(cone[0].first == (ZExpo{0, -1}));
  CHECK(cone[0].second == -kone());  // unit folded: 1/(z1-z2) = -1/(z2-z1)...

  // Inhomogeneous denominators are rejected.
  FactoredRat g(LaurentPoly::constant(1, kone()));
  g.push_den(DenFactor::zc(0, gq(0)));
  CHECK_THROWS_AS(cone_coefficients(g, {0}), NonTerminating);
}

TEST_CASE("addition over a common factored denominator + expansion linearity") {
  FactoredRat a(LaurentPoly::constant(2, kone()));
  a.push_den_zz(0, 1, gq(0));  // 1/(z1 - z2)
  FactoredRat b(LaurentPoly::constant(2, kone()));
  b.push_den_zz(0, 1, gq(1));  // 1/(z1 - q z2)
  FactoredRat c = a + b;
  Window win{{-2, -3}, {2, 0}};
  LaurentPoly ea = expand_series(a, {0, 1}, win);
  LaurentPoly eb = expand_series(b, {0, 1}, win);
  LaurentPoly ec = expand_series(c, {0, 1}, win);
  CHECK(ec == ea + eb);
}

TEST_CASE("property: one-variable residue theorem") {
  // Sum of residues at all finite poles equals the z^-1 coefficient of the
  // expansion at infinity.
  std::mt19937 rng(20260823);
  std::uniform_int_distribution<int> nfac(1, 4), pick(0, 3), nume(-2, 2),
      numc(-3, 3), numn(1, 3);
  const std::vector<GammaPoint> pts = {gq(0), gq(1), gq(-1), gq(2)};
  for (int iter = 0; iter < 100; ++iter) {
    FactoredRat f(1, AR);
    LaurentPoly num(1, AR);
    int nt = numn(rng);
    for (int t = 0; t < nt; ++t)
      num.add_term(ZExpo{nume(rng)}, KScalar::from_int(AR, numc(rng)));
    if (num.is_zero()) continue;
    f = FactoredRat(num);
    int nf = nfac(rng);
    for (int t = 0; t < nf; ++t) {
      int which = pick(rng);
      if (which == 0 && t == 0)
        f.push_den(DenFactor::z(0, AR));
      else
        f.push_den(DenFactor::zc(0, pts[pick(rng)]));
    }
    // Residue sum over every candidate point (regular points contribute 0).
    KScalar total(AR);
    auto scalar_of = [&](const FactoredRat& r) {
      REQUIRE(r.den().empty());
      if (r.is_zero()) return KScalar(AR);
      REQUIRE(r.num().terms().size() == 1);
      REQUIRE(r.num().terms().begin()->first == ZExpo{0});
      return r.num().terms().begin()->second;
    };
    total = total + scalar_of(residue_at(f, 0, GammaPoint::zero_point(AR)));
    for (const auto& p : pts) total = total + scalar_of(residue_at(f, 0, p));
    // z^-1 coefficient at infinity.
    Window win{{-1}, {-1}};
    LaurentPoly inf = expand_series(f, {0}, win);
    KScalar coeff(AR);
    if (!inf.is_zero()) coeff = inf.terms().begin()->second;
    CHECK(total == coeff);
  }
}

TEST_CASE("permutation acts on factored rationals") {
  // Swapping z1,z2 in 1/(z1 - q z2) gives 1/(z2 - q z1) = -q^-1/(z1 - q^-1 z2).
  FactoredRat f(LaurentPoly::constant(2, kone()));
  f.push_den(DenFactor::zz(0, 1, gq(1)));
  FactoredRat g = f.permuted({1, 0});
  REQUIRE(g.den().size() == 1);
  CHECK(g.den()[0] == DenFactor::zz(0, 1, gq(-1)));
  CHECK(g.num() == LaurentPoly::constant(2, -kq(-1)));
}

TEST_CASE("color symmetry predicate") {
  LaurentPoly sym = zmono(2, {1, 0}) + zmono(2, {0, 1});
  LaurentPoly asym = zmono(2, {1, 0});
  CHECK(sym.is_color_symmetric(VarSet{{0, 0}}));
  CHECK(!asym.is_color_symmetric(VarSet{{0, 0}}));
  CHECK(asym.is_color_symmetric(VarSet{{0, 1}}));
}
