/**
 * @file kfield.hpp
 * @brief Exact arithmetic in K = Frac(Z[parameters]), the coefficient field of
 *        the whole library.
 *
 * Parameters are kept formal: a single quantum parameter q (loop mode), a pair
 * q1,q2 (toroidal mode), optionally extended by generic spectral symbols
 * u1..us.  Genericity assumptions ("q is not a root of unity", "q1^a q2^b != 1")
 * are modeled by never specializing the parameters at all.
 *
 * Three types live here:
 *  - ParamPoly:  Laurent polynomial in the parameters with big-integer
 *                coefficients (sorted sparse representation, no zero terms).
 *  - KScalar:    quotient of two ParamPolys.  In the single-parameter case the
 *                fraction is fully reduced by a univariate gcd; with several
 *                parameters we only strip monomial and integer content and
 *                decide equality by cross-multiplication.
 *  - GammaPoint: a monomial of the parameter group (e.g. q^-2 or q1 q2^3), or
 *                the distinguished value 0.  These are the only points at
 *                which residues are ever taken, which keeps everything exact.
 */
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsh {

using BigInt = boost::multiprecision::cpp_int;

/// Exponent vector: one (possibly negative) entry per formal parameter.
using Expo = std::vector<int>;

struct DivisionByZero : std::runtime_error {
  DivisionByZero() : std::runtime_error("division by zero in K") {}
};

/// Names used only for printing; arithmetic never consults them.
struct ParamNames {
  std::vector<std::string> names;
};

inline ParamNames loop_params(int generic_symbols = 0) {
  ParamNames p{{"q"}};
  for (int s = 1; s <= generic_symbols; ++s)
    p.names.push_back("u" + std::to_string(s));
  return p;
}

inline ParamNames toroidal_params() { return ParamNames{{"q1", "q2"}}; }

/* ------------------------------------------------------------------------- */
/*  ParamPoly                                                                */
/* ------------------------------------------------------------------------- */

class ParamPoly {
public:
  /// Zero polynomial with the given number of parameters.
  explicit ParamPoly(int arity = 1) : arity_(arity) {}

  /// Constant polynomial.
  static ParamPoly constant(int arity, const BigInt& c) {
    ParamPoly p(arity);
    if (c != 0) p.terms_[Expo(arity, 0)] = c;
    return p;
  }

  /// Monomial c * prod params^e.
  static ParamPoly monomial(const Expo& e, const BigInt& c) {
    ParamPoly p(static_cast<int>(e.size()));
    if (c != 0) p.terms_[e] = c;
    return p;
  }

  int arity() const { return arity_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Expo, BigInt>& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }

  bool is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 && terms_.begin()->first == Expo(arity_, 0));
  }

  /// True iff the polynomial is a single term.
  bool is_monomial() const { return terms_.size() == 1; }

  void add_term(const Expo& e, const BigInt& c) {
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  ParamPoly operator-() const {
    ParamPoly r(arity_);
    for (auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
  }

  ParamPoly operator+(const ParamPoly& o) const {
    check_arity(o);
    ParamPoly r = *this;
    for (auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }

  ParamPoly operator-(const ParamPoly& o) const { return *this + (-o); }

  ParamPoly operator*(const ParamPoly& o) const {
    check_arity(o);
    ParamPoly r(arity_);
    for (auto& [e1, c1] : terms_)
      for (auto& [e2, c2] : o.terms_) {
        Expo e = e1;
        for (int i = 0; i < arity_; ++i) e[i] += e2[i];
        r.add_term(e, c1 * c2);
      }
    return r;
  }

  bool operator==(const ParamPoly& o) const {
    return arity_ == o.arity_ && terms_ == o.terms_;
  }
  bool operator!=(const ParamPoly& o) const { return !(*this == o); }

  /// Strict weak order so polynomials can key containers deterministically.
  bool operator<(const ParamPoly& o) const {
    if (arity_ != o.arity_) return arity_ < o.arity_;
    return std::lexicographical_compare(
        terms_.begin(), terms_.end(), o.terms_.begin(), o.terms_.end(),
        [](const auto& a, const auto& b) {
          if (a.first != b.first) return a.first < b.first;
          return a.second < b.second;
        });
  }

  /// gcd of all integer coefficients (non-negative; 0 for the zero poly).
  BigInt content() const {
    BigInt g = 0;
    for (auto& [e, c] : terms_) {
      g = boost::multiprecision::gcd(g, c);
      if (g == 1) break;
    }
    return g;
  }

  void divide_content(const BigInt& g) {
    if (g == 0 || g == 1) return;
    for (auto& [e, c] : terms_) c /= g;
  }

  /// Componentwise minimum exponent over all terms (only valid when nonzero).
  Expo min_exponents() const {
    Expo m = terms_.begin()->first;
    for (auto& [e, c] : terms_)
      for (int i = 0; i < arity_; ++i) m[i] = std::min(m[i], e[i]);
    return m;
  }

  /// Multiply by the monomial prod params^e (e may be negative).
  ParamPoly shifted(const Expo& e) const {
    ParamPoly r(arity_);
    for (auto& [e0, c] : terms_) {
      Expo f = e0;
      for (int i = 0; i < arity_; ++i) f[i] += e[i];
      r.terms_[f] = c;
    }
    return r;
  }

  /// Leading term in lexicographic order (largest exponent vector).
  std::pair<Expo, BigInt> leading_term() const { return *terms_.rbegin(); }

  /**
   * Exact division: returns *this / d if d divides exactly, nullopt otherwise.
   * Sparse long division by the lex-leading term of d; exponents may be
   * negative (Laurent), which long division handles transparently.
   */
  std::optional<ParamPoly> divide_exact(const ParamPoly& d) const {
    check_arity(d);
    if (d.is_zero()) throw DivisionByZero();
    if (is_zero()) return ParamPoly(arity_);
    // Shift both operands into the honest polynomial ring (exponents >= 0):
    // exact division is unaffected up to a monomial, restored at the end.
    Expo sa = min_exponents(), sd = d.min_exponents();
    Expo neg_sa = sa, neg_sd = sd;
    for (int i = 0; i < arity_; ++i) { neg_sa[i] = -sa[i]; neg_sd[i] = -sd[i]; }
    ParamPoly rem = shifted(neg_sa), dd = d.shifted(neg_sd);
    ParamPoly q(arity_);
    auto [de, dc] = dd.leading_term();
    while (!rem.is_zero()) {
      auto [re, rc] = rem.leading_term();
      if (rc % dc != 0) return std::nullopt;
      Expo e = re;
      for (int i = 0; i < arity_; ++i) {
        e[i] -= de[i];
        // lt(dd) must divide lt(rem) componentwise when the division is
        // exact; this check also makes the loop terminate (lex on N^n is a
        // well-order, and the leading term strictly decreases).
        if (e[i] < 0) return std::nullopt;
      }
      BigInt c = rc / dc;
      q.add_term(e, c);
      rem = rem - dd * ParamPoly::monomial(e, c);
    }
    // Undo the two shifts: *this = q * d * mono(sa - sd) monomial-adjusted.
    Expo back(arity_);
    for (int i = 0; i < arity_; ++i) back[i] = sa[i] - sd[i];
    return q.shifted(back);
  }

  std::string to_string(const ParamNames& pn) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    // Print largest exponents first for readability.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      BigInt a = c < 0 ? BigInt(-c) : c;
      out += first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
      first = false;
      std::string mono;
      for (int i = 0; i < arity_; ++i) {
        if (e[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += pn.names[i];
        if (e[i] != 1) mono += "^" + std::to_string(e[i]);
      }
      if (mono.empty()) {
        out += a.str();
      } else {
        if (a != 1) out += a.str() + "*";
        out += mono;
      }
    }
    return out;
  }

private:
  void check_arity(const ParamPoly& o) const {
    if (arity_ != o.arity_)
      throw std::logic_error("ParamPoly arity mismatch");
  }

  int arity_;
  std::map<Expo, BigInt> terms_;
};

/* ------------------------------------------------------------------------- */
/*  Univariate gcd (primitive PRS)                                           */
/* ------------------------------------------------------------------------- */

namespace detail {

/// Dense coefficient list c[0..deg] of a univariate ParamPoly whose exponents
/// have been shifted to be non-negative.
inline std::vector<BigInt> to_dense(const ParamPoly& p) {
  int deg = p.terms().rbegin()->first[0];
  std::vector<BigInt> c(deg + 1, 0);
  for (auto& [e, a] : p.terms()) c[e[0]] = a;
  return c;
}

inline void strip(std::vector<BigInt>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

inline BigInt dense_content(const std::vector<BigInt>& c) {
  BigInt g = 0;
  for (auto& a : c) {
    g = boost::multiprecision::gcd(g, a);
    if (g == 1) break;
  }
  return g;
}

inline void make_primitive(std::vector<BigInt>& c) {
  BigInt g = dense_content(c);
  if (g > 1)
    for (auto& a : c) a /= g;
}

/// Pseudo-remainder of a by b (both primitive, b nonzero).
inline std::vector<BigInt> prem(std::vector<BigInt> a,
                                const std::vector<BigInt>& b) {
  while (a.size() >= b.size() && !a.empty()) {
    BigInt lead_a = a.back(), lead_b = b.back();
    BigInt g = boost::multiprecision::gcd(lead_a, lead_b);
    BigInt ma = lead_b / g, mb = lead_a / g;
    std::size_t shift = a.size() - b.size();
    for (auto& x : a) x *= ma;
    for (std::size_t i = 0; i < b.size(); ++i)
      a[i + shift] -= mb * b[i];
    strip(a);
  }
  return a;
}

/// gcd of two primitive dense univariate polynomials (primitive PRS).
inline std::vector<BigInt> dense_gcd(std::vector<BigInt> a,
                                     std::vector<BigInt> b) {
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    std::vector<BigInt> r = prem(a, b);
    make_primitive(r);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && a.back() < 0)
    for (auto& x : a) x = -x;
  return a;
}

}  // namespace detail

/// Polynomial gcd in the single-parameter case; both inputs nonzero with
/// non-negative exponents.  Result is primitive with positive leading coeff.
inline ParamPoly univariate_gcd(const ParamPoly& a, const ParamPoly& b) {
  std::vector<BigInt> da = detail::to_dense(a), db = detail::to_dense(b);
  detail::make_primitive(da);
  detail::make_primitive(db);
  std::vector<BigInt> g = detail::dense_gcd(da, db);
  ParamPoly r(1);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] != 0) r.add_term(Expo{static_cast<int>(i)}, g[i]);
  return r;
}

/* ------------------------------------------------------------------------- */
/*  GammaPoint                                                               */
/* ------------------------------------------------------------------------- */

/// A point of the parameter group Gamma (monomial in the parameters), or 0.
struct GammaPoint {
  bool zero = false;
  Expo exps;  ///< empty convention not allowed: size == arity when nonzero

  static GammaPoint zero_point(int arity) {
    GammaPoint g;
    g.zero = true;
    g.exps = Expo(arity, 0);
    return g;
  }
  static GammaPoint one(int arity) { return GammaPoint{false, Expo(arity, 0)}; }
  static GammaPoint monomial(const Expo& e) { return GammaPoint{false, e}; }

  int arity() const { return static_cast<int>(exps.size()); }

  bool operator==(const GammaPoint& o) const {
    return zero == o.zero && (zero || exps == o.exps);
  }
  bool operator!=(const GammaPoint& o) const { return !(*this == o); }
  /// Deterministic order: 0 first, then lex on exponents.
  bool operator<(const GammaPoint& o) const {
    if (zero != o.zero) return zero;
    if (zero) return false;
    return exps < o.exps;
  }

  GammaPoint operator*(const GammaPoint& o) const {
    if (zero || o.zero) return zero_point(arity());
    GammaPoint r = *this;
    for (std::size_t i = 0; i < exps.size(); ++i) r.exps[i] += o.exps[i];
    return r;
  }

  GammaPoint inverse() const {
    if (zero) throw DivisionByZero();
    GammaPoint r = *this;
    for (auto& e : r.exps) e = -e;
    return r;
  }

  GammaPoint pow(int k) const {
    if (zero) {
      if (k <= 0) throw DivisionByZero();
      return *this;
    }
    GammaPoint r = *this;
    for (auto& e : r.exps) e *= k;
    return r;
  }

  bool is_one() const {
    if (zero) return false;
    return std::all_of(exps.begin(), exps.end(), [](int e) { return e == 0; });
  }

  std::string to_string(const ParamNames& pn) const {
    if (zero) return "0";
    std::string s;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] == 0) continue;
      if (!s.empty()) s += "*";
      s += pn.names[i];
      if (exps[i] != 1) s += "^" + std::to_string(exps[i]);
    }
    return s.empty() ? "1" : s;
  }
};

/* ------------------------------------------------------------------------- */
/*  KScalar                                                                  */
/* ------------------------------------------------------------------------- */

class KScalar {
public:
  explicit KScalar(int arity = 1)
      : num_(arity), den_(ParamPoly::constant(arity, 1)) {}

  KScalar(ParamPoly num, ParamPoly den)
      : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DivisionByZero();
    normalize();
  }

  static KScalar from_int(int arity, const BigInt& c) {
    return KScalar(ParamPoly::constant(arity, c),
                   ParamPoly::constant(arity, 1));
  }

  static KScalar from_poly(ParamPoly p) {
    int a = p.arity();
    return KScalar(std::move(p), ParamPoly::constant(a, 1));
  }

  /// Embedding of a nonzero GammaPoint (or 0) into K.
  static KScalar from_gamma(const GammaPoint& g) {
    int a = g.arity();
    if (g.zero) return KScalar(a);
    return from_poly(ParamPoly::monomial(g.exps, 1));
  }

  const ParamPoly& num() const { return num_; }
  const ParamPoly& den() const { return den_; }
  int arity() const { return num_.arity(); }
  bool is_zero() const { return num_.is_zero(); }

  bool is_one() const {
    return num_ == ParamPoly::constant(arity(), 1) &&
           den_ == ParamPoly::constant(arity(), 1);
  }

  KScalar operator-() const {
    KScalar r = *this;
    r.num_ = -r.num_;
    r.fix_sign();
    return r;
  }

  KScalar operator+(const KScalar& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (den_ == o.den_) return KScalar(num_ + o.num_, den_);
    return KScalar(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }

  KScalar operator-(const KScalar& o) const { return *this + (-o); }

  KScalar operator*(const KScalar& o) const {
    if (is_zero() || o.is_zero()) return KScalar(arity());
    return KScalar(num_ * o.num_, den_ * o.den_);
  }

  KScalar operator/(const KScalar& o) const {
    if (o.is_zero()) throw DivisionByZero();
    if (is_zero()) return KScalar(arity());
    return KScalar(num_ * o.den_, den_ * o.num_);
  }

  KScalar inverse() const {
    if (is_zero()) throw DivisionByZero();
    return KScalar(den_, num_);
  }

  KScalar& operator+=(const KScalar& o) { return *this = *this + o; }
  KScalar& operator-=(const KScalar& o) { return *this = *this - o; }
  KScalar& operator*=(const KScalar& o) { return *this = *this * o; }
  KScalar& operator/=(const KScalar& o) { return *this = *this / o; }

  /// Exact equality, independent of the gcd-reduction level.
  bool operator==(const KScalar& o) const {
    if (den_ == o.den_) return num_ == o.num_;
    return num_ * o.den_ == o.num_ * den_;
  }
  bool operator!=(const KScalar& o) const { return !(*this == o); }

  /// Deterministic (representation-level) order for container keys.
  bool operator<(const KScalar& o) const {
    if (!(num_ == o.num_)) return num_ < o.num_;
    return den_ < o.den_;
  }

  KScalar pow(int k) const {
    if (k < 0) return inverse().pow(-k);
    KScalar r = from_int(arity(), 1), b = *this;
    while (k > 0) {
      if (k & 1) r *= b;
      b *= b;
      k >>= 1;
    }
    return r;
  }

  std::string to_string(const ParamNames& pn) const {
    if (den_ == ParamPoly::constant(arity(), 1)) return num_.to_string(pn);
    std::string n = num_.to_string(pn);
    std::string d = den_.to_string(pn);
    auto wrap = [](const std::string& s) {
      return s.find_first_of("+- ") == std::string::npos ? s : "(" + s + ")";
    };
    return wrap(n) + "/" + wrap(d);
  }

private:
  /**
   * Canonicalization.  Always: strip the common parameter-monomial and integer
   * content, make the denominator's lex-leading coefficient positive.  With a
   * single parameter additionally divide out the full polynomial gcd; with
   * several parameters attempt only the cheap exact-division cleanups (these
   * keep toroidal pairing values small without a multivariate gcd).
   */
  void normalize() {
    if (num_.is_zero()) {
      den_ = ParamPoly::constant(arity(), 1);
      return;
    }
    // Common monomial content.
    Expo mn = num_.min_exponents(), md = den_.min_exponents();
    Expo shift(arity());
    for (int i = 0; i < arity(); ++i) shift[i] = -std::min(mn[i], md[i]);
    if (std::any_of(shift.begin(), shift.end(), [](int s) { return s != 0; })) {
      num_ = num_.shifted(shift);
      den_ = den_.shifted(shift);
    }
    // Now all exponents are >= 0; full gcd in the univariate case.
    if (arity() == 1 && !den_.is_constant() && !num_.is_constant()) {
      ParamPoly g = univariate_gcd(num_, den_);
      if (!g.is_constant()) {
        num_ = *num_.divide_exact(g);
        den_ = *den_.divide_exact(g);
      }
    } else if (arity() > 1 && !den_.is_constant()) {
      if (auto q = num_.divide_exact(den_)) {
        num_ = *q;
        den_ = ParamPoly::constant(arity(), 1);
      } else if (auto r = den_.divide_exact(num_)) {
        den_ = *r;
        num_ = ParamPoly::constant(arity(), 1);
      }
    }
    // Integer content.
    BigInt g = boost::multiprecision::gcd(num_.content(), den_.content());
    num_.divide_content(g);
    den_.divide_content(g);
    fix_sign();
  }

  void fix_sign() {
    if (!den_.is_zero() && den_.leading_term().second < 0) {
      num_ = -num_;
      den_ = -den_;
    }
  }

  ParamPoly num_, den_;
};

/// Evaluate a GammaPoint power g^e as a KScalar (g nonzero, or e >= 0).
inline KScalar gamma_pow_scalar(const GammaPoint& g, int e) {
  if (g.zero) {
    if (e < 0) throw DivisionByZero();
    return e == 0 ? KScalar::from_int(g.arity(), 1) : KScalar(g.arity());
  }
  return KScalar::from_gamma(g.pow(e));
}

}  // namespace qsh
