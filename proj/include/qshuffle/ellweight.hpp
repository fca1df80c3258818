/**
 * @file ellweight.hpp
 * @brief Rational ell-weights in exact factored form: per color a constant,
 *        a zero multiset, a pole multiset (parameter-group points), and a
 *        power of z, i.e.
 *            psi_i(z) = c_i * z^{zpow_i} * prod_{x in Z_i}(z - x)
 *                                        / prod_{y in P_i}(z - y).
 *        ord psi (the pole order at z = 0) is -zpow_i.  Weights with
 *        invertible leading series coefficient satisfy
 *        zpow_i + |Z_i| - |P_i| = 0; the residue-ideal machinery does not
 *        require this, so it is a predicate rather than an invariant.
 */
#pragma once

#include <qshuffle/algebra_data.hpp>

namespace qsh {

class EllWeight {
public:
  struct Component {
    KScalar c;
    std::vector<GammaPoint> zeros, poles;  // sorted multisets, nonzero points
    int zpow = 0;

    void normalize() {
      std::sort(zeros.begin(), zeros.end());
      std::sort(poles.begin(), poles.end());
      // Cancel common zero/pole pairs.
      std::vector<GammaPoint> z2, p2;
      std::size_t i = 0, j = 0;
      while (i < zeros.size() || j < poles.size()) {
        if (j == poles.size() || (i < zeros.size() && zeros[i] < poles[j]))
          z2.push_back(zeros[i++]);
        else if (i == zeros.size() || poles[j] < zeros[i])
          p2.push_back(poles[j++]);
        else {
          ++i;
          ++j;
        }
      }
      zeros = std::move(z2);
      poles = std::move(p2);
    }
  };

  explicit EllWeight(const CartanData& c)
      : arity_(c.arity()),
        comps_(c.ncolors(), Component{c.one(), {}, {}, 0}) {}

  static EllWeight constant_one(const CartanData& c) { return EllWeight(c); }

  int ncolors() const { return static_cast<int>(comps_.size()); }
  int arity() const { return arity_; }
  const Component& comp(int i) const { return comps_.at(i); }
  Component& comp(int i) { return comps_.at(i); }

  /// ord psi: the pole order at z = 0, per color.
  std::vector<int> ord() const {
    std::vector<int> r;
    for (const auto& k : comps_) r.push_back(-k.zpow);
    return r;
  }

  bool is_regular() const {
    for (const auto& k : comps_)
      if (k.zpow < 0) return false;
    return true;
  }
  bool is_polynomial() const {
    // psi in C^* + z^-1 C[z^-1]: no nonzero poles and z^{-|Z|} prefactor.
    for (const auto& k : comps_)
      if (!k.poles.empty() || k.zpow != -static_cast<int>(k.zeros.size()))
        return false;
    return true;
  }
  bool is_constant() const {
    for (const auto& k : comps_)
      if (!k.zeros.empty() || !k.poles.empty() || k.zpow != 0) return false;
    return true;
  }
  /// psi_i(infinity) = c_i != 0 (an honest invertible l-weight).
  bool has_invertible_lead() const {
    for (const auto& k : comps_)
      if (k.c.is_zero() ||
          k.zpow + static_cast<int>(k.zeros.size()) -
                  static_cast<int>(k.poles.size()) !=
              0)
        return false;
    return true;
  }

  const std::vector<GammaPoint>& poles_nonzero(int i) const {
    return comps_.at(i).poles;
  }

  EllWeight operator*(const EllWeight& o) const {
    EllWeight r = *this;
    for (int i = 0; i < ncolors(); ++i) {
      auto& k = r.comps_[i];
      const auto& l = o.comps_[i];
      k.c = k.c * l.c;
      k.zeros.insert(k.zeros.end(), l.zeros.begin(), l.zeros.end());
      k.poles.insert(k.poles.end(), l.poles.begin(), l.poles.end());
      k.zpow += l.zpow;
      k.normalize();
    }
    return r;
  }

  bool operator==(const EllWeight& o) const {
    if (ncolors() != o.ncolors()) return false;
    for (int i = 0; i < ncolors(); ++i) {
      const auto& a = comps_[i];
      const auto& b = o.comps_[i];
      if (!(a.c == b.c) || a.zeros != b.zeros || a.poles != b.poles ||
          a.zpow != b.zpow)
        return false;
    }
    return true;
  }

  /// psi_i as a one-variable factored rational function in z.
  FactoredRat as_factored(int i) const {
    const auto& k = comps_.at(i);
    LaurentPoly num = LaurentPoly::monomial(1, ZExpo{std::max(k.zpow, 0)}, k.c);
    for (const auto& x : k.zeros) {
      LaurentPoly f(1, arity_);
      f.add_term(ZExpo{1}, KScalar::from_int(arity_, 1));
      f.add_term(ZExpo{0}, -KScalar::from_gamma(x));
      num = num * f;
    }
    FactoredRat r(num);
    for (const auto& y : k.poles) r.push_den(DenFactor::zc(0, y));
    for (int t = 0; t < -k.zpow; ++t) r.push_den(DenFactor::z(0, arity_));
    return r;
  }

  /// Multiply a factored integrand by psi_i(z_var): numerator picks up the
  /// constant, z-power, and zero factors; poles become denominator factors.
  void apply_to(FactoredRat& f, int var, int i) const {
    const auto& k = comps_.at(i);
    const int nv = f.nvars();
    LaurentPoly num = LaurentPoly::constant(nv, k.c);
    for (const auto& x : k.zeros) {
      LaurentPoly fac(nv, arity_);
      ZExpo e(nv, 0);
      e[var] = 1;
      fac.add_term(e, KScalar::from_int(arity_, 1));
      fac.add_term(ZExpo(nv, 0), -KScalar::from_gamma(x));
      num = num * fac;
    }
    ZExpo shift(nv, 0);
    shift[var] = k.zpow;
    f.mul_num(num.shifted(shift));
    for (const auto& y : k.poles) f.push_den(DenFactor::zc(var, y));
  }

  /// Exact expansion psi_i(z) = sum_{d} coeff_d z^{-d}, for 0 <= d <= D.
  std::vector<KScalar> expand(int i, int D) const {
    FactoredRat f = as_factored(i);
    const auto& k = comps_.at(i);
    int top = k.zpow + static_cast<int>(k.zeros.size());
    Window win{{-D}, {std::max(top, 0)}};
    LaurentPoly s = expand_series(f, {0}, win);
    std::vector<KScalar> out(D + 1, KScalar(arity_));
    for (auto& [e, c] : s.terms()) {
      if (e[0] > 0)
        throw std::runtime_error("ell-weight expansion has positive powers");
      if (-e[0] <= D) out[-e[0]] = c;
    }
    return out;
  }

  std::string to_string(const ParamNames& pn) const {
    std::string out;
    for (int i = 0; i < ncolors(); ++i) {
      const auto& k = comps_[i];
      if (i) out += " ; ";
      std::string s = k.c.to_string(pn);
      if (k.zpow != 0) s += " * z^" + std::to_string(k.zpow);
      for (const auto& x : k.zeros) s += " * (z - " + x.to_string(pn) + ")";
      for (const auto& y : k.poles) s += " / (z - " + y.to_string(pn) + ")";
      out += s;
    }
    return out;
  }

private:
  int arity_;
  std::vector<Component> comps_;
};

/* ---- standard weights --------------------------------------------------- */

/// The Kirillov-Reshetikhin-style sl2 weight psi_k(z) = (zq^k - q^-k)/(z-1),
/// i.e. c = q^k, zero q^{-2k}, pole 1.
inline EllWeight psi_k_weight(const CartanData& c, int k) {
  EllWeight w(c);
  auto& comp = w.comp(0);
  comp.c = KScalar::from_gamma(c.qpow(k));
  comp.zeros = {c.qpow(-2 * k)};
  comp.poles = {c.qpow(0)};
  return w;
}

/**
 * The l-weight A_{i,x}^{-1}: component j equals
 * (z - x q^{d_ij}) / (z q^{d_ij} - x) = q^{-d_ij} (z - x q^{d_ij}) /
 * (z - x q^{-d_ij}).  For x = 0 the component is the constant q^{-d_ij}.
 */
inline EllWeight a_inverse_weight(const CartanData& c, int i,
                                  const GammaPoint& x) {
  EllWeight w(c);
  for (int j = 0; j < c.ncolors(); ++j) {
    auto& comp = w.comp(j);
    int d = c.d(i, j);
    comp.c = KScalar::from_gamma(c.qpow(-d));
    if (!x.zero) {
      comp.zeros = {x * c.qpow(d)};
      comp.poles = {x * c.qpow(-d)};
      comp.normalize();
    }
  }
  return w;
}

}  // namespace qsh
