/**
 * @file charring.hpp
 * @brief Formal character series in the symbols [-n] v^d on a finite box,
 *        together with the standard product-formula evaluators and an exact
 *        comparator.  All coefficients are integers; multiplication truncates
 *        soundly to the box (coefficients inside the box are exact).
 */
#pragma once

#include <qshuffle/algebra_data.hpp>

#include <map>
#include <optional>

namespace qsh {

class CharSeries {
public:
  using Key = std::pair<std::vector<int>, int>;  // (horizontal n, vertical d)

  CharSeries(std::vector<int> nmax, int dmax)
      : nmax_(std::move(nmax)), dmax_(dmax) {}

  static CharSeries one(std::vector<int> nmax, int dmax) {
    CharSeries s(std::move(nmax), dmax);
    s.add(std::vector<int>(s.nmax_.size(), 0), 0, 1);
    return s;
  }

  const std::vector<int>& nmax() const { return nmax_; }
  int dmax() const { return dmax_; }
  const std::map<Key, long>& coeffs() const { return c_; }

  bool in_box(const std::vector<int>& n, int d) const {
    if (d < 0 || d > dmax_) return false;
    for (std::size_t i = 0; i < nmax_.size(); ++i)
      if (n[i] < 0 || n[i] > nmax_[i]) return false;
    return true;
  }

  void add(const std::vector<int>& n, int d, long v) {
    if (!in_box(n, d) || v == 0) return;
    long& slot = c_[{n, d}];
    slot += v;
    if (slot == 0) c_.erase({n, d});
  }

  long coeff(const std::vector<int>& n, int d) const {
    auto it = c_.find({n, d});
    return it == c_.end() ? 0 : it->second;
  }

  CharSeries operator*(const CharSeries& o) const {
    if (nmax_ != o.nmax_ || dmax_ != o.dmax_)
      throw std::runtime_error("CharSeries: box mismatch");
    CharSeries r(nmax_, dmax_);
    for (const auto& [ka, va] : c_)
      for (const auto& [kb, vb] : o.c_) {
        std::vector<int> n = ka.first;
        for (std::size_t i = 0; i < n.size(); ++i) n[i] += kb.first[i];
        r.add(n, ka.second + kb.second, va * vb);
      }
    return r;
  }

  /// Multiply by 1/(1 - [-alpha] v^d)^mult, exactly on the box.
  CharSeries times_inverse_factor(const std::vector<int>& alpha, int d,
                                  int mult = 1) const {
    CharSeries geo(nmax_, dmax_);
    std::vector<int> n(nmax_.size(), 0);
    for (int k = 0;; ++k) {
      if (k > 0) {
        for (std::size_t i = 0; i < n.size(); ++i) n[i] += alpha[i];
      }
      if (!in_box(n, k * d)) {
        if (k == 0) break;
        // alpha = 0 with d = 0 would loop forever; boxes forbid that.
        if (alpha == std::vector<int>(n.size(), 0) && d == 0)
          throw std::runtime_error("CharSeries: non-convergent factor");
        break;
      }
      geo.add(n, k * d, 1);
    }
    CharSeries r = *this;
    for (int t = 0; t < mult; ++t) r = r * geo;
    return r;
  }

  bool operator==(const CharSeries& o) const {
    return nmax_ == o.nmax_ && dmax_ == o.dmax_ && c_ == o.c_;
  }

  /// First mismatching key (deterministic order), or nothing when equal.
  std::optional<Key> first_mismatch(const CharSeries& o) const {
    std::set<Key> keys;
    for (const auto& [k, v] : c_) keys.insert(k);
    for (const auto& [k, v] : o.c_) keys.insert(k);
    for (const auto& k : keys)
      if (coeff(k.first, k.second) != o.coeff(k.first, k.second)) return k;
    return std::nullopt;
  }

  /// The v = 1 projection: per horizontal degree, the sum over d.
  std::map<std::vector<int>, long> project_v1() const {
    std::map<std::vector<int>, long> out;
    for (const auto& [k, v] : c_) out[k.first] += v;
    return out;
  }

  std::string to_string() const {
    std::string s;
    for (const auto& [k, v] : c_) {
      if (!s.empty()) s += " + ";
      if (v != 1) s += std::to_string(v) + "*";
      s += "[-(";
      for (std::size_t i = 0; i < k.first.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(k.first[i]);
      }
      s += ")]";
      if (k.second != 0) s += "v^" + std::to_string(k.second);
    }
    return s.empty() ? "0" : s;
  }

private:
  std::vector<int> nmax_;
  int dmax_;
  std::map<Key, long> c_;
};

/* ---- product formulas --------------------------------------------------- */

/// prod_{alpha in Delta+} prod_{d=1}^{r.alpha} 1/(1 - [-alpha] v^d)
/// (finite type only; refined character of the simple module of order r).
inline CharSeries mukhin_young_product(const CartanData& c,
                                       const std::vector<int>& r,
                                       const std::vector<int>& nmax,
                                       int dmax) {
  CharSeries s = CharSeries::one(nmax, dmax);
  for (const auto& alpha : c.positive_roots()) {
    long ra = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i) ra += (long)r[i] * alpha[i];
    for (int d = 1; d <= ra; ++d) s = s.times_inverse_factor(alpha, d);
  }
  return s;
}

/// The v = 1 character prod_{alpha} (1/(1-[-alpha]))^{r.alpha}; stored with
/// all terms at d = 0 so it can be compared against v1 projections.
inline CharSeries character_product_v1(const CartanData& c,
                                       const std::vector<int>& r,
                                       const std::vector<int>& nmax) {
  CharSeries s = CharSeries::one(nmax, 0);
  for (const auto& alpha : c.positive_roots()) {
    long ra = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i) ra += (long)r[i] * alpha[i];
    if (ra > 0) s = s.times_inverse_factor(alpha, 0, static_cast<int>(ra));
  }
  return s;
}

/// Fundamental case: prod_{alpha} (1/(1-[-alpha]))^{mult_{alpha_i}(alpha)},
/// i.e. the exponent is the coefficient of the i-th simple root in alpha.
inline CharSeries fundamental_character_v1(const CartanData& c, int i,
                                           const std::vector<int>& nmax) {
  CharSeries s = CharSeries::one(nmax, 0);
  for (const auto& alpha : c.positive_roots())
    if (alpha[i] > 0) s = s.times_inverse_factor(alpha, 0, alpha[i]);
  return s;
}

/// Toroidal gl1 refined character: prod_{n>=1} prod_{d=1}^{rn}
/// 1/(1 - h^n v^d), on the box (h-degree <= nmax, d <= dmax).
inline CharSeries toroidal_product(int r, int nmax, int dmax) {
  CharSeries s = CharSeries::one({nmax}, dmax);
  for (int n = 1; n <= nmax; ++n)
    for (int d = 1; d <= r * n && d <= dmax; ++d)
      s = s.times_inverse_factor({n}, d);
  return s;
}

}  // namespace qsh
