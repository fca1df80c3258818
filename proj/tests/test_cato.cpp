/* Tests for the category-O engine: r-kernels, residue-ideal multiplicities,
 * q-characters, refined characters, and monochrome truncations. */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qshuffle/cat_o.hpp>

using namespace qsh;

static Support support_of(const CartanData& c,
                          const std::vector<std::vector<GammaPoint>>& pts) {
  Support s(c.ncolors());
  s.pts = pts;
  s.normalize();
  return s;
}

TEST_CASE("sl2 r=1 kernel codimensions are [n == d]") {
  CartanData c = CartanData::sl2();
  for (int n = 1; n <= 3; ++n)
    for (int d = 0; d <= 4; ++d) {
      KernelCell cell = j_r_kernel(c, {1}, {n}, d);
      CHECK(cell.codim == (n == d ? 1 : 0));
      CHECK(cell.codim + (int)cell.kernel.size() == (int)cell.basis.size());
    }
}

TEST_CASE("negative r: the kernel is everything") {
  CartanData c = CartanData::sl2();
  for (int n = 1; n <= 3; ++n)
    for (int d = 0; d <= 4; ++d) CHECK(j_r_kernel(c, {-1}, {n}, d).codim == 0);
  CHECK(refined_character(c, {-1}, {3}, 4) == CharSeries::one({3}, 4));
  CartanData c3 = CartanData::sl3();
  CHECK(refined_character(c3, {-1, -1}, {1, 1}, 3) ==
        CharSeries::one({1, 1}, 3));
}

TEST_CASE("sl2 refined characters match the graded products") {
  CartanData c = CartanData::sl2();
  CHECK(refined_character(c, {1}, {3}, 4) ==
        mukhin_young_product(c, {1}, {3}, 4));
  CHECK(refined_character(c, {2}, {3}, 6) ==
        mukhin_young_product(c, {2}, {3}, 6));
  // Spot oracle: r=2 cell (2,3) has a one-dimensional quotient.
  CHECK(j_r_kernel(c, {2}, {2}, 3).codim == 1);
}

TEST_CASE("sl3 refined character at r=(1,1) on a small box") {
  CartanData c = CartanData::sl3();
  CharSeries got = refined_character(c, {1, 1}, {1, 1}, 3);
  CHECK(got == mukhin_young_product(c, {1, 1}, {1, 1}, 3));
  CHECK(got.coeff({1, 1}, 2) == 2);
}

TEST_CASE("ring and full kernel variants agree in finite type") {
  CartanData c = CartanData::sl2();
  for (auto [r, n, d] : {std::tuple{1, 1, 1}, {1, 2, 2}, {2, 2, 3}, {2, 2, 2},
                         {1, 2, 3}, {2, 3, 4}}) {
    KernelCell ring = j_r_kernel(c, {r}, {n}, d, KernelVariant::Ring);
    KernelCell full = j_r_kernel(c, {r}, {n}, d, KernelVariant::Full);
    CHECK(ring.codim == full.codim);
  }
  CartanData c3 = CartanData::sl3();
  CHECK(j_r_kernel(c3, {1, 1}, {1, 1}, 2, KernelVariant::Ring).codim ==
        j_r_kernel(c3, {1, 1}, {1, 1}, 2, KernelVariant::Full).codim);
}

TEST_CASE("zero-support multiplicities nu") {
  CartanData c = CartanData::sl2();
  // ord 0: only the empty padding survives.
  CHECK(nu_multiplicity(c, {0}, {0}) == 1);
  CHECK(nu_multiplicity(c, {0}, {1}) == 0);
  CHECK(nu_multiplicity(c, {0}, {2}) == 0);
  // ord 1: every padding has multiplicity one.
  for (int p = 0; p <= 3; ++p) CHECK(nu_multiplicity(c, {1}, {p}) == 1);
  // ord 2, p=2: graded pieces at d=2,3,4 of dimension one each.
  auto g = nu_graded(c, {2}, {2});
  CHECK(g == std::map<int, long>{{2, 1}, {3, 1}, {4, 1}});
  CHECK(nu_multiplicity(c, {2}, {2}) == 3);
  // Negative order: nothing but the empty padding.
  CHECK(nu_multiplicity(c, {-1}, {1}) == 0);
  CHECK(nu_multiplicity(c, {-1}, {0}) == 1);
}

TEST_CASE("nonzero-support multiplicities mu for the k=2 weight") {
  CartanData c = CartanData::sl2();
  EllWeight psi = psi_k_weight(c, 2);
  CHECK(mu_multiplicity(c, psi, support_of(c, {{}})) == 1);
  CHECK(mu_multiplicity(c, psi, support_of(c, {{c.qpow(0)}})) == 1);
  CHECK(mu_multiplicity(c, psi, support_of(c, {{c.qpow(-2)}})) == 0);
  CHECK(mu_multiplicity(c, psi,
                        support_of(c, {{c.qpow(0), c.qpow(-2)}})) == 1);
  // A point unreachable from the poles has no feasible residue chain.
  CHECK(mu_multiplicity(c, psi, support_of(c, {{c.qpow(2)}})) == 0);
  // The next shift q^{-4} is not in the top of the k=2 module.
  CHECK(mu_multiplicity(
            c, psi,
            support_of(c, {{c.qpow(0), c.qpow(-2), c.qpow(-4)}})) == 0);
}

TEST_CASE("q-character of the k-th Kirillov-Reshetikhin-style weight") {
  CartanData c = CartanData::sl2();
  for (int k = 1; k <= 2; ++k) {
    EllWeight psi = psi_k_weight(c, k);
    QCharacter chi = q_character(c, psi, {k + 2});
    CHECK((int)chi.mult.size() == k + 1);
    // Supports are the q^{-2} strings from the pole, each with mult 1.
    for (int len = 0; len <= k; ++len) {
      Support s(c.ncolors());
      for (int j = 0; j < len; ++j) s.pts[0].push_back(c.qpow(-2 * j));
      s.normalize();
      REQUIRE(chi.mult.count(s));
      CHECK(chi.mult.at(s) == 1);
    }
    // Regular weight: no support contains zero.
    for (const auto& [s, m] : chi.mult) CHECK(!s.contains_zero());
  }
}

TEST_CASE("mixed supports factor through mu and nu") {
  CartanData c = CartanData::sl2();
  // psi(z) = (zq - q^-1) / (z (z - 1)): ord 1, one nonzero pole at 1.
  EllWeight psi(c);
  psi.comp(0).c = KScalar::from_gamma(c.qpow(1));
  psi.comp(0).zeros = {c.qpow(-2)};
  psi.comp(0).poles = {c.qpow(0)};
  psi.comp(0).zpow = -1;
  CHECK(psi.ord() == std::vector<int>{1});

  GammaPoint zero = GammaPoint::zero_point(c.arity());
  // Direct mixed chains against the factored products.
  CHECK(mu_multiplicity(c, psi, support_of(c, {{zero}})) == 1);
  CHECK(mu_multiplicity(c, psi, support_of(c, {{c.qpow(0), zero}})) == 1);
  CHECK(mu_multiplicity(c, psi, support_of(c, {{zero, zero}})) == 1);
  CHECK(mu_multiplicity(c, psi, support_of(c, {{c.qpow(-2), zero}})) == 0);
  // Whole q-characters agree between the two routes.
  QCharacter fac = q_character(c, psi, {2}, CharMode::Factored);
  QCharacter dir = q_character(c, psi, {2}, CharMode::Direct);
  CHECK(fac == dir);
  // The nonzero structure is the k=1 chain, so the supports are (), (0),
  // (0,0), (1), (1,0), all with multiplicity 1; (1,q^-2) drops out.
  CHECK((int)fac.mult.size() == 5);
  CHECK(fac.mult.count(support_of(c, {{c.qpow(0), zero}})));
  CHECK(!fac.mult.count(support_of(c, {{c.qpow(0), c.qpow(-2)}})));
}

TEST_CASE("whole-kernel quotient dimensions match support multiplicities") {
  CartanData c = CartanData::sl2();
  EllWeight psi = psi_k_weight(c, 2);
  // Per multidegree, the quotient dimension is the sum of mu over supports
  // of that size: one support of size 1 and one of size 2.
  CHECK(j_psi_quotient_dim(c, psi, {1}) == 1);
  CHECK(j_psi_quotient_dim(c, psi, {2}) == 1);
  CHECK(j_psi_quotient_dim(c, psi, {3}) == 0);
  EllWeight one = EllWeight::constant_one(c);
  CHECK(j_psi_quotient_dim(c, one, {1}) == 0);
}

TEST_CASE("candidate supports: closure of the pole-or-shift criterion") {
  CartanData c = CartanData::sl2();
  EllWeight psi = psi_k_weight(c, 2);
  auto cands = candidate_supports(c, psi, {2});
  // Points can only be 1, q^-2, q^-4 within two steps.
  for (const auto& s : cands) CHECK(!s.contains_zero());
  std::set<Support> set(cands.begin(), cands.end());
  CHECK(set.count(support_of(c, {{}})));
  CHECK(set.count(support_of(c, {{c.qpow(0)}})));
  CHECK(set.count(support_of(c, {{c.qpow(0), c.qpow(-2)}})));
  CHECK(!set.count(support_of(c, {{c.qpow(-2)}})));  // not reachable directly
}

TEST_CASE("monochrome truncation for k=2, k'=1") {
  CartanData c = CartanData::sl2();
  EllWeight psi = psi_k_weight(c, 2);
  EllWeight tau(c);
  tau.comp(0).zeros = {c.qpow(-2)};
  tau.comp(0).zpow = -1;

  MonochromeResult res = monochrome_and_truncated(c, psi, tau, {3});
  CHECK(res.monochrome);
  // Black supports avoid q^-2; every candidate containing q^-2 is white.
  for (const auto& s : res.black) {
    bool has = false;
    for (const auto& p : s.pts[0]) has = has || p == c.qpow(-2);
    CHECK(!has);
  }
  for (const auto& s : res.white) {
    bool has = false;
    for (const auto& p : s.pts[0]) has = has || p == c.qpow(-2);
    CHECK(has);
  }
  // Truncated character: [psi](1 + A^{-1} at 1), i.e. () and (1).
  CHECK((int)res.truncated.mult.size() == 2);
  CHECK(res.truncated.mult.at(support_of(c, {{}})) == 1);
  CHECK(res.truncated.mult.at(support_of(c, {{c.qpow(0)}})) == 1);
  CHECK(res.identity_holds);
}

TEST_CASE("power-sum action respects grading, slope, and the kernel") {
  CartanData c = CartanData::sl2();
  CHECK(action_grading_check(c, {1}, {2}, 2, 1));
  CHECK(action_grading_check(c, {1}, {2}, 3, 1));
  CHECK(action_grading_check(c, {2}, {2}, 2, 2));
  CartanData c3 = CartanData::sl3();
  CHECK(action_grading_check(c3, {1, 1}, {1, 1}, 2, 1));
}

TEST_CASE("the empty multidegree cell is the vacuum line") {
  CartanData c = CartanData::sl2();
  KernelCell cell = j_r_kernel(c, {1}, {0}, 0);
  CHECK(cell.codim == 1);
  CHECK(j_r_kernel(c, {1}, {0}, 1).codim == 0);
}

TEST_CASE("support ordering and printing") {
  CartanData c = CartanData::sl2();
  Support a = support_of(c, {{c.qpow(0)}});
  Support b = support_of(c, {{c.qpow(0), c.qpow(-2)}});
  CHECK((a < b || b < a));
  CHECK(a.nonzero_part() == a);
  GammaPoint zero = GammaPoint::zero_point(c.arity());
  Support m = support_of(c, {{zero, c.qpow(0)}});
  CHECK(m.contains_zero());
  CHECK(m.zero_counts() == std::vector<int>{1});
  CHECK(m.nonzero_part() == a);
  CHECK(!m.to_string(c.params()).empty());
}
