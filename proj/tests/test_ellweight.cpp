/* Tests for factored rational ell-weights. */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qshuffle/ellweight.hpp>

using namespace qsh;

TEST_CASE("product with the constant weight is identity") {
  CartanData c = CartanData::sl2();
  EllWeight psi = psi_k_weight(c, 2);
  CHECK(psi * EllWeight::constant_one(c) == psi);
}

TEST_CASE("psi_k times the monochrome tau has ord 1") {
  CartanData c = CartanData::sl2();
  EllWeight psi = psi_k_weight(c, 2);
  CHECK(psi.ord() == std::vector<int>{0});
  // tau(z) = 1 - q^{-2k'}/z = (z - q^{-2})/z for k' = 1.
  EllWeight tau(c);
  tau.comp(0).zeros = {c.qpow(-2)};
  tau.comp(0).zpow = -1;
  CHECK(tau.is_polynomial());
  CHECK(tau.ord() == std::vector<int>{1});
  EllWeight prod = psi * tau;
  CHECK(prod.ord() == std::vector<int>{1});
  CHECK(prod.has_invertible_lead());
}

TEST_CASE("A-inverse weights compose multiplicatively") {
  CartanData c = CartanData::sl3();
  EllWeight a = a_inverse_weight(c, 0, c.qpow(0));
  EllWeight b = a_inverse_weight(c, 0, c.qpow(-2));
  EllWeight prod = a * b;
  // Component 0 (d_00 = 2): constants multiply to q^-4;
  // zeros {q^2, 1} and poles {q^-2, q^-4} merge without cancellation.
  CHECK(prod.comp(0).c == KScalar::from_gamma(c.qpow(-4)));
  CHECK(prod.comp(0).zeros ==
        std::vector<GammaPoint>{c.qpow(0), c.qpow(2)});
  CHECK(prod.comp(0).poles ==
        std::vector<GammaPoint>{c.qpow(-4), c.qpow(-2)});
  // Component 1 (d_01 = -1): constants q^1 * q^1 = q^2.
  CHECK(prod.comp(1).c == KScalar::from_gamma(c.qpow(2)));
  // A-inverse at 0 is the constant (q^-d_ij)_j.
  EllWeight a0 = a_inverse_weight(c, 0, GammaPoint::zero_point(c.arity()));
  CHECK(a0.is_constant());
  CHECK(a0.comp(0).c == KScalar::from_gamma(c.qpow(-2)));
}

TEST_CASE("series expansion of (zq - q^-1)/(z - 1)") {
  CartanData c = CartanData::sl2();
  EllWeight psi = psi_k_weight(c, 1);
  auto s = psi.expand(0, 4);
  KScalar q = KScalar::from_gamma(c.qpow(1));
  KScalar qm = KScalar::from_gamma(c.qpow(-1));
  CHECK(s[0] == q);
  for (int d = 1; d <= 4; ++d) CHECK(s[d] == q - qm);
  // Constant weight: only the d=0 term.
  auto one = EllWeight::constant_one(c).expand(0, 3);
  CHECK(one[0] == c.one());
  for (int d = 1; d <= 3; ++d) CHECK(one[d].is_zero());
}

TEST_CASE("pole lists and predicates") {
  CartanData c = CartanData::sl2();
  EllWeight psi = psi_k_weight(c, 2);
  CHECK(psi.poles_nonzero(0) == std::vector<GammaPoint>{c.qpow(0)});
  CHECK(psi.is_regular());
  CHECK(!psi.is_polynomial());
  CHECK(!psi.is_constant());
  CHECK(psi.has_invertible_lead());
  // The ord-1 factorization-test weight (zq - q^-1)/(z(z-1)).
  EllWeight w(c);
  w.comp(0).c = KScalar::from_gamma(c.qpow(1));
  w.comp(0).zeros = {c.qpow(-2)};
  w.comp(0).poles = {c.qpow(0)};
  w.comp(0).zpow = -1;
  CHECK(!w.is_regular());
  CHECK(w.ord() == std::vector<int>{1});
  CHECK(!w.has_invertible_lead());  // decays at infinity; residue machinery
                                    // does not need the leading unit
}

TEST_CASE("property: expansion is multiplicative up to truncation") {
  CartanData c = CartanData::sl2();
  EllWeight a = psi_k_weight(c, 1), b = psi_k_weight(c, 3);
  const int D = 5;
  auto sa = a.expand(0, D), sb = b.expand(0, D), sp = (a * b).expand(0, D);
  for (int d = 0; d <= D; ++d) {
    KScalar conv(c.arity());
    for (int j = 0; j <= d; ++j) conv += sa[j] * sb[d - j];
    CHECK(conv == sp[d]);
  }
}

TEST_CASE("zero/pole cancellation in weight products") {
  CartanData c = CartanData::sl2();
  EllWeight a(c), b(c);
  a.comp(0).zeros = {c.qpow(1)};
  a.comp(0).poles = {c.qpow(2)};
  b.comp(0).zeros = {c.qpow(2)};
  b.comp(0).poles = {c.qpow(1)};
  CHECK((a * b).is_constant());
}
