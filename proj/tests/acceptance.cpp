/* Acceptance gate: one pass/fail line per criterion, all checks exact.
 * Exits nonzero if any criterion fails. */
#include <qshuffle/parse.hpp>
#include <qshuffle/verify.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>

using namespace qsh;

namespace {

int g_failures = 0;

void run(int idx, const std::string& name, const std::function<bool()>& f) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string err;
  try {
    ok = f();
  } catch (const std::exception& e) {
    err = std::string(" [exception: ") + e.what() + "]";
  }
  auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  if (!ok) ++g_failures;
  std::printf("criterion %2d %-34s %s (%lld ms)%s\n", idx, name.c_str(),
              ok ? "PASS" : "FAIL", static_cast<long long>(dt), err.c_str());
  std::fflush(stdout);
}

Support chain_support(const CartanData& c, int len) {
  Support s(1);
  for (int j = 0; j < len; ++j) s.pts[0].push_back(c.qpow(-2 * j));
  s.normalize();
  return s;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

int main() {
  run(1, "kirillov-reshetikhin q-characters", [] {
    CartanData c = CartanData::sl2();
    for (int k = 1; k <= 3; ++k) {
      QCharacter chi = q_character(c, psi_k_weight(c, k), {k + 2});
      if (static_cast<int>(chi.mult.size()) != k + 1) return false;
      for (int len = 0; len <= k; ++len) {
        auto it = chi.mult.find(chain_support(c, len));
        if (it == chi.mult.end() || it->second != 1) return false;
      }
    }
    return true;
  });

  run(2, "refined characters match products", [] {
    CartanData c2 = CartanData::sl2();
    for (int r = 1; r <= 3; ++r)
      if (!(refined_character(c2, {r}, {4}, 8) ==
            mukhin_young_product(c2, {r}, {4}, 8)))
        return false;
    CartanData c3 = CartanData::sl3();
    return refined_character(c3, {1, 1}, {2, 2}, 5) ==
           mukhin_young_product(c3, {1, 1}, {2, 2}, 5);
  });

  run(3, "negative-order weights are trivial", [] {
    CartanData c2 = CartanData::sl2();
    CartanData c3 = CartanData::sl3();
    return refined_character(c2, {-1}, {3}, 4) == CharSeries::one({3}, 4) &&
           refined_character(c2, {-2}, {3}, 4) == CharSeries::one({3}, 4) &&
           refined_character(c3, {-1, -1}, {1, 1}, 3) ==
               CharSeries::one({1, 1}, 3);
  });

  run(4, "mixed-support factorization", [] {
    CartanData c = CartanData::sl2();
    EllWeight psi = detail::mixed_weight(c);
    QCharacter fac = q_character(c, psi, {3}, CharMode::Factored);
    QCharacter dir = q_character(c, psi, {3}, CharMode::Direct);
    if (!(fac == dir)) return false;
    // Per support: the padded multiplicity is the product of the nonzero-part
    // multiplicity and the zero-padding factor, each computed independently.
    const auto ords = psi.ord();
    for (const auto& [s, m] : dir.mult) {
      long mu = mu_multiplicity(c, psi, s.nonzero_part());
      long nu = nu_multiplicity(c, ords, s.zero_counts());
      if (m != mu * nu) return false;
    }
    return true;
  });

  run(5, "regular weights avoid zero supports", [] {
    CartanData c = CartanData::sl2();
    for (int k = 1; k <= 3; ++k) {
      QCharacter chi = q_character(c, psi_k_weight(c, k), {4});
      for (const auto& [s, m] : chi.mult)
        if (s.contains_zero()) return false;
    }
    return true;
  });

  run(6, "monochrome truncation identity", [] {
    CartanData c = CartanData::sl2();
    EllWeight psi = psi_k_weight(c, 2);
    EllWeight tau(c);
    tau.comp(0).zeros = {c.qpow(-2)};
    tau.comp(0).zpow = -1;
    MonochromeResult res = monochrome_and_truncated(c, psi, tau, {3});
    if (!res.monochrome || !res.identity_holds) return false;
    // Black supports avoid the tau zero q^-2; white ones contain it.
    auto has_tau_zero = [&](const Support& s) {
      for (const auto& p : s.pts[0])
        if (p == c.qpow(-2)) return true;
      return false;
    };
    for (const auto& s : res.black)
      if (has_tau_zero(s)) return false;
    for (const auto& s : res.white)
      if (!has_tau_zero(s)) return false;
    // Truncated table: exactly the empty support and the point 1.
    return res.truncated.mult.size() == 2 &&
           res.truncated.mult.at(chain_support(c, 0)) == 1 &&
           res.truncated.mult.at(chain_support(c, 1)) == 1;
  });

  run(7, "toroidal characters and kernels", [] {
    CartanData c = CartanData::toroidal();
    for (int r = 1; r <= 2; ++r) {
      if (!(toroidal_refined_character(r, 4, 8) == toroidal_product(r, 4, 8)))
        return false;
      ToroidalWeight tau = ToroidalWeight::of_order(c, r);
      for (int n = 1; n <= 2; ++n)
        for (int d = 0; d <= 4; ++d)
          if (toroidal_j_kernel(c, tau, n, d).codim !=
              static_cast<long>(enumerate_paths(n, -d, r).size()))
            return false;
    }
    return true;
  });

  run(8, "explicit toroidal pairing values", [] {
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

  run(9, "algebraic property suites", [] {
    CartanData sl2 = CartanData::sl2(), sl3 = CartanData::sl3(),
               tor = CartanData::toroidal();
    std::mt19937 rng(20260824);
    std::uniform_int_distribution<int> bit(0, 1);

    // (a) 200 random products: vertical/horizontal degree additivity, pole
    // cancellation (the product is polynomial by construction and must
    // succeed), and color symmetry of the result.
    for (int iter = 0; iter < 200; ++iter) {
      const CartanData& c = iter % 2 ? tor : sl3;
      std::vector<int> na, nb;
      if (iter % 2) {
        na = {bit(rng) + 1};
        nb = {bit(rng) + 1};
      } else {
        na = {bit(rng), bit(rng)};
        nb = {bit(rng), bit(rng)};
        if (total_vars(na) == 0) na[0] = 1;
        if (total_vars(nb) == 0) nb[1] = 1;
      }
      ShuffleElt a = detail::random_symmetric_elt(c, rng, na, +1);
      ShuffleElt b = detail::random_symmetric_elt(c, rng, nb, +1);
      ShuffleElt p = shuffle_mul(c, a, b);
      for (std::size_t i = 0; i < na.size(); ++i)
        if (p.n[i] != na[i] + nb[i]) return false;
      if (!p.num.is_color_symmetric(flat_vars(c, p.n))) return false;
      if (!a.num.is_zero() && !b.num.is_zero() && !p.num.is_zero() &&
          vdeg(c, p) != vdeg(c, a) + vdeg(c, b))
        return false;
    }

    // (b) wheel conditions for monomial generator products, |n| <= 3,
    // exponents in [-1, 1].
    for (const auto& n :
         {std::vector<int>{2, 1}, {1, 2}, {3, 0}, {2, 0}, {1, 1}})
      for (int d = -2; d <= 2; ++d)
        for (const auto& x : monomial_products(sl3, +1, n, d, -1, 1))
          if (!wheel_check(sl3, x)) return false;
    for (int n = 2; n <= 3; ++n)
      for (int d = -2; d <= 2; ++d)
        for (const auto& x : monomial_products(tor, +1, {n}, d, -1, 1))
          if (!wheel_check(tor, x)) return false;

    // (c) slope-filtration disjointness: negative and nonnegative cells
    // intersect trivially.
    for (const CartanData* c : {&sl2, &tor}) {
      std::vector<int> ones(c->ncolors(), 1);
      for (int n = 1; n <= 2; ++n)
        for (int d = 1; d <= 3; ++d) {
          auto neg = cell_basis(*c, +1, {n}, d,
                                {SlopeConstraint{SlopeRel::LT, 0, 1, ones}});
          auto pos = cell_basis(*c, +1, {n}, d,
                                {SlopeConstraint{SlopeRel::GE, 0, 1, ones}});
          std::vector<ShuffleElt> all = neg;
          all.insert(all.end(), pos.begin(), pos.end());
          if (elt_rank(*c, all) !=
              static_cast<int>(neg.size()) + static_cast<int>(pos.size()))
            return false;
        }
    }

    // (d) the two kernel variants agree in finite type, total n <= 3.
    for (int n = 1; n <= 3; ++n)
      for (int d = 0; d <= 3; ++d)
        if (j_r_kernel(sl2, {1}, {n}, d, KernelVariant::Ring).codim !=
            j_r_kernel(sl2, {1}, {n}, d, KernelVariant::Full).codim)
          return false;
    for (const auto& n : {std::vector<int>{1, 1}, {2, 1}})
      for (int d = 0; d <= 3; ++d)
        if (j_r_kernel(sl3, {1, 1}, n, d, KernelVariant::Ring).codim !=
            j_r_kernel(sl3, {1, 1}, n, d, KernelVariant::Full).codim)
          return false;

    // (e) module property of the power-sum action on computed kernels.
    if (!action_grading_check(sl2, {1}, {2}, 2, 1)) return false;
    if (!action_grading_check(sl2, {1}, {2}, 3, 1)) return false;
    if (!action_grading_check(sl2, {2}, {2}, 2, 2)) return false;
    if (!action_grading_check(sl3, {1, 1}, {1, 1}, 2, 1)) return false;

    // (f) 100 random one-variable residue-theorem instances.
    const int AR = 1;
    std::uniform_int_distribution<int> nfac(1, 4), pick(0, 3), nume(-2, 2),
        numc(-3, 3), numn(1, 3);
    auto gq = [&](int e) {
      Expo x(AR, 0);
      x[0] = e;
      return GammaPoint::monomial(x);
    };
    const std::vector<GammaPoint> pts = {gq(0), gq(1), gq(-1), gq(2)};
    for (int iter = 0; iter < 100; ++iter) {
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
        if (!r.den().empty()) throw std::runtime_error("nonscalar residue");
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

  run(10, "deterministic cli verification", [] {
    const std::string cli = QSH_CLI_PATH;
    const std::string o1 = "acceptance_verify_1.json";
    const std::string o2 = "acceptance_verify_2.json";
    std::string cmd1 = "\"" + cli + "\" verify --format json --out " + o1;
    std::string cmd2 = "\"" + cli + "\" verify --format json --out " + o2;
    if (std::system(cmd1.c_str()) != 0) return false;
    if (std::system(cmd2.c_str()) != 0) return false;
    std::string a = slurp(o1), b = slurp(o2);
    std::remove(o1.c_str());
    std::remove(o2.c_str());
    return !a.empty() && a == b;
  });

  if (g_failures) {
    std::printf("ACCEPTANCE: %d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("ACCEPTANCE: all criteria passed\n");
  return 0;
}
