/* Tests for formal character series on boxes. */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qshuffle/charring.hpp>

using namespace qsh;

TEST_CASE("sl2 product at r=1 is the geometric series sum [-n] v^n") {
  CartanData c = CartanData::sl2();
  CharSeries s = mukhin_young_product(c, {1}, {6}, 6);
  for (int n = 0; n <= 6; ++n)
    for (int d = 0; d <= 6; ++d) CHECK(s.coeff({n}, d) == (d == n ? 1 : 0));
}

TEST_CASE("sl2 r=2 product has the partition-counting coefficients") {
  CartanData c = CartanData::sl2();
  CharSeries s = mukhin_young_product(c, {2}, {4}, 8);
  // 1/((1-hv)(1-hv^2)): coefficient of h^n v^d counts partitions of d into
  // exactly n parts, each part 1 or 2.
  CHECK(s.coeff({0}, 0) == 1);
  CHECK(s.coeff({1}, 1) == 1);
  CHECK(s.coeff({1}, 2) == 1);
  CHECK(s.coeff({1}, 3) == 0);
  CHECK(s.coeff({2}, 2) == 1);
  CHECK(s.coeff({2}, 3) == 1);
  CHECK(s.coeff({2}, 4) == 1);
  CHECK(s.coeff({3}, 4) == 1);
  CHECK(s.coeff({3}, 5) == 1);
  CHECK(s.coeff({4}, 8) == 1);
}

TEST_CASE("v=1 projection of the graded product equals the plain product") {
  CartanData c = CartanData::sl2();
  for (int r = 1; r <= 3; ++r) {
    CharSeries graded = mukhin_young_product(c, {r}, {4}, 4 * r);
    CharSeries plain = character_product_v1(c, {r}, {4});
    auto p = graded.project_v1();
    for (int n = 0; n <= 4; ++n) {
      long lhs = p.count({n}) ? p.at({n}) : 0;
      CHECK(lhs == plain.coeff({n}, 0));
    }
  }
}

TEST_CASE("sl3 graded product at r=(1,1)") {
  CartanData c = CartanData::sl3();
  CharSeries s = mukhin_young_product(c, {1, 1}, {2, 2}, 4);
  // Factors: 1/(1-[-alpha1]v) 1/(1-[-alpha2]v) 1/((1-[-a1-a2]v)(1-[-a1-a2]v^2)).
  CHECK(s.coeff({0, 0}, 0) == 1);
  CHECK(s.coeff({1, 0}, 1) == 1);
  CHECK(s.coeff({0, 1}, 1) == 1);
  CHECK(s.coeff({1, 1}, 2) == 2);  // [-a1][-a2] v^2 and [-a1-a2] v^2
  CHECK(s.coeff({1, 1}, 1) == 1);  // [-a1-a2] v
  CHECK(s.coeff({2, 2}, 2) == 1);
  CHECK(s.coeff({2, 1}, 2) == 1);
}

TEST_CASE("fundamental sl2 character is 1/(1-[-alpha])") {
  CartanData c = CartanData::sl2();
  CharSeries s = fundamental_character_v1(c, 0, {5});
  for (int n = 0; n <= 5; ++n) CHECK(s.coeff({n}, 0) == 1);
}

TEST_CASE("additivity in r of the v=1 character") {
  CartanData c = CartanData::sl3();
  CharSeries a = character_product_v1(c, {1, 0}, {3, 3});
  CharSeries b = character_product_v1(c, {0, 1}, {3, 3});
  CharSeries ab = character_product_v1(c, {1, 1}, {3, 3});
  CHECK(a * b == ab);
  CHECK(fundamental_character_v1(c, 0, {3, 3}) == a);
}

TEST_CASE("series arithmetic: associativity and truncation soundness") {
  CartanData c = CartanData::sl2();
  CharSeries x = mukhin_young_product(c, {1}, {4}, 6);
  CharSeries y = mukhin_young_product(c, {2}, {4}, 6);
  CharSeries z = mukhin_young_product(c, {3}, {4}, 6);
  CHECK((x * y) * z == x * (y * z));
  CHECK(x * CharSeries::one({4}, 6) == x);
  // A bigger box restricted to the smaller one agrees inside the small box.
  CharSeries big = mukhin_young_product(c, {2}, {8}, 12);
  CharSeries small = mukhin_young_product(c, {2}, {4}, 6);
  for (int n = 0; n <= 4; ++n)
    for (int d = 0; d <= 6; ++d) CHECK(big.coeff({n}, d) == small.coeff({n}, d));
}

TEST_CASE("first_mismatch reports the earliest differing key") {
  CartanData c = CartanData::sl2();
  CharSeries a = mukhin_young_product(c, {1}, {3}, 3);
  CharSeries b = a;
  CHECK(!a.first_mismatch(b).has_value());
  b.add({2}, 2, 5);
  auto mm = a.first_mismatch(b);
  REQUIRE(mm.has_value());
  CHECK(mm->first == std::vector<int>{2});
  CHECK(mm->second == 2);
}

TEST_CASE("toroidal product generating function") {
  // r=1: prod_n 1/(1 - h^n v^n) (only d=n survives d<=rn with convex
  // weighting): coefficient of h^n v^n counts partitions of n.
  CharSeries t1 = toroidal_product(1, 6, 6);
  long partitions[] = {1, 1, 2, 3, 5, 7, 11};
  for (int n = 0; n <= 6; ++n)
    for (int d = 0; d <= 6; ++d) {
      long expect = 0;
      if (d == n) expect = partitions[n];
      // r=1: factors 1/(1-h^m v^e), 1<=e<=m; d=n forced only when every part
      // uses e=m.  Other (n,d) cells still receive contributions with d<n.
      if (d == n) CHECK(t1.coeff({n}, d) == expect);
    }
  // Spot values off the diagonal for r=1: h^2 can come from (m=2,e=1) or
  // (m=1,e=1)^2, so coeff({2},1)=1 and coeff({2},2)=2.
  CHECK(t1.coeff({2}, 1) == 1);
  CHECK(t1.coeff({2}, 2) == 2);
  CHECK(t1.coeff({3}, 1) == 1);
  // r=2 dominates r=1 coefficientwise.
  CharSeries t2 = toroidal_product(2, 5, 8);
  for (const auto& [k, v] : t1.coeffs())
    if (k.first[0] <= 5 && k.second <= 8)
      CHECK(t2.coeff(k.first, k.second) >= v);
}
