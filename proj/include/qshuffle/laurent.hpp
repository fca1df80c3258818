/**
 * @file laurent.hpp
 * @brief Multivariate Laurent polynomials and factored rational functions in
 *        the colored variables z_1..z_n over K, with exact residue
 *        extraction, exact series expansion in a contour region
 *        |z_1| << ... << |z_n|, and nonpositive-cone coefficient analysis.
 *
 * A FactoredRat keeps its denominator as a multiset of binomial factors
 *   (z_u - g z_v),  (z_u - g),  z_u          (g a nonzero parameter monomial)
 * and never expands it.  Residues at parameter-group points (or 0) are
 * computed by exact local Taylor extraction: substituting z = p + w, every
 * denominator factor is linear in w, so its inverse series has coefficients
 * (-B)^k / A^{k+1} where A is again a binomial factor — the denominator stays
 * factored throughout and no product of dozens of factors is ever expanded.
 * This is equivalent to the textbook repeated-differentiation formula for
 * higher-order poles, but with controlled expression growth.
 *
 * Series expansion in a region processes the largest variable first.  Each
 * factor's geometric series in that variable has exponents bounded above, so
 * any finite exponent window is reached by a sound finite truncation; the
 * coefficients are rational in the remaining variables and are expanded
 * recursively.  Constants (parameter monomials) count as smaller than every
 * variable, which matches the defining contours 1 << |z_1| << ... << |z_n|.
 */
#pragma once

#include <qshuffle/kfield.hpp>

#include <cassert>
#include <functional>
#include <numeric>

namespace qsh {

/// Exponent vector over the flat variables z_1..z_n.
using ZExpo = std::vector<int>;

struct NonTerminating : std::runtime_error {
  NonTerminating()
      : std::runtime_error(
            "cone extraction on an inhomogeneous denominator") {}
};

struct WindowTooSmall : std::runtime_error {
  WindowTooSmall()
      : std::runtime_error("expansion window does not cover all variables") {}
};

/* ------------------------------------------------------------------------- */
/*  VarSet                                                                   */
/* ------------------------------------------------------------------------- */

/// Flat list of variables tagged with colors; an "ordering" of a multidegree.
struct VarSet {
  std::vector<int> colors;  ///< colors[a] = color of flat variable a

  int nvars() const { return static_cast<int>(colors.size()); }

  /// Multidegree n in N^I (I = number of colors).
  std::vector<int> multidegree(int ncolors) const {
    std::vector<int> n(ncolors, 0);
    for (int c : colors) n[c]++;
    return n;
  }

  bool operator==(const VarSet& o) const { return colors == o.colors; }
};

/* ------------------------------------------------------------------------- */
/*  LaurentPoly                                                              */
/* ------------------------------------------------------------------------- */

class LaurentPoly {
public:
  LaurentPoly(int nvars, int arity) : nvars_(nvars), arity_(arity) {}

  static LaurentPoly constant(int nvars, const KScalar& c) {
    LaurentPoly p(nvars, c.arity());
    if (!c.is_zero()) p.terms_[ZExpo(nvars, 0)] = c;
    return p;
  }

  static LaurentPoly monomial(int nvars, const ZExpo& e, const KScalar& c) {
    LaurentPoly p(nvars, c.arity());
    if (!c.is_zero()) p.terms_[e] = c;
    return p;
  }

  int nvars() const { return nvars_; }
  int arity() const { return arity_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<ZExpo, KScalar>& terms() const { return terms_; }

  void add_term(const ZExpo& e, const KScalar& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  LaurentPoly operator-() const {
    LaurentPoly r(nvars_, arity_);
    for (auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
  }

  LaurentPoly operator+(const LaurentPoly& o) const {
    LaurentPoly r = *this;
    for (auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }

  LaurentPoly operator-(const LaurentPoly& o) const { return *this + (-o); }

  LaurentPoly operator*(const LaurentPoly& o) const {
    LaurentPoly r(nvars_, arity_);
    for (auto& [e1, c1] : terms_)
      for (auto& [e2, c2] : o.terms_) {
        ZExpo e = e1;
        for (int i = 0; i < nvars_; ++i) e[i] += e2[i];
        r.add_term(e, c1 * c2);
      }
    return r;
  }

  LaurentPoly operator*(const KScalar& c) const {
    LaurentPoly r(nvars_, arity_);
    if (c.is_zero()) return r;
    for (auto& [e, k] : terms_) r.terms_[e] = k * c;
    return r;
  }

  bool operator==(const LaurentPoly& o) const {
    return nvars_ == o.nvars_ && terms_ == o.terms_;
  }
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

  /// Multiply by the monomial prod z^e.
  LaurentPoly shifted(const ZExpo& e) const {
    LaurentPoly r(nvars_, arity_);
    for (auto& [e0, c] : terms_) {
      ZExpo f = e0;
      for (int i = 0; i < nvars_; ++i) f[i] += e[i];
      r.terms_[f] = c;
    }
    return r;
  }

  int min_exp(int var) const {
    int m = 0;
    bool first = true;
    for (auto& [e, c] : terms_) {
      m = first ? e[var] : std::min(m, e[var]);
      first = false;
    }
    return m;
  }

  int max_exp(int var) const {
    int m = 0;
    bool first = true;
    for (auto& [e, c] : terms_) {
      m = first ? e[var] : std::max(m, e[var]);
      first = false;
    }
    return m;
  }

  bool depends_on(int var) const {
    for (auto& [e, c] : terms_)
      if (e[var] != 0) return true;
    return false;
  }

  /// Total degree of a term; poly is homogeneous iff all terms agree.
  static int total_degree(const ZExpo& e) {
    return std::accumulate(e.begin(), e.end(), 0);
  }

  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    int d = total_degree(terms_.begin()->first);
    for (auto& [e, c] : terms_)
      if (total_degree(e) != d) return false;
    return true;
  }

  /// Split into homogeneous components, keyed by total degree.
  std::map<int, LaurentPoly> homogeneous_components() const {
    std::map<int, LaurentPoly> comps;
    for (auto& [e, c] : terms_) {
      int d = total_degree(e);
      auto it = comps.find(d);
      if (it == comps.end())
        it = comps.emplace(d, LaurentPoly(nvars_, arity_)).first;
      it->second.add_term(e, c);
    }
    return comps;
  }

  /// Substitute z_var = g (a constant; g may be 0, in which case terms with a
  /// positive exponent vanish and negative exponents are an error).
  LaurentPoly substitute_const(int var, const GammaPoint& point) const {
    LaurentPoly r(nvars_, arity_);
    for (auto& [e, c] : terms_) {
      if (point.zero) {
        if (e[var] < 0) throw DivisionByZero();
        if (e[var] > 0) continue;
        r.add_term(e, c);
      } else {
        ZExpo f = e;
        f[var] = 0;
        r.add_term(f, c * gamma_pow_scalar(point, e[var]));
      }
    }
    return r;
  }

  /// Substitute z_var = g * z_target (variable renaming with a monomial
  /// twist); used by wheel-condition specializations.
  LaurentPoly substitute_scaled(int var, int target,
                                const GammaPoint& g) const {
    LaurentPoly r(nvars_, arity_);
    for (auto& [e, c] : terms_) {
      ZExpo f = e;
      f[target] += e[var];
      f[var] = 0;
      r.add_term(f, c * gamma_pow_scalar(g, e[var]));
    }
    return r;
  }

  /// Apply a variable permutation: new variable perm[a] gets old z_a's slot
  /// (i.e. term exponent e'[perm[a]] = e[a]).
  LaurentPoly permuted(const std::vector<int>& perm) const {
    LaurentPoly r(nvars_, arity_);
    for (auto& [e, c] : terms_) {
      ZExpo f(nvars_, 0);
      for (int a = 0; a < nvars_; ++a) f[perm[a]] = e[a];
      r.add_term(f, c);
    }
    return r;
  }

  LaurentPoly derivative(int var) const {
    LaurentPoly r(nvars_, arity_);
    for (auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      ZExpo f = e;
      f[var] -= 1;
      r.add_term(f, c * KScalar::from_int(arity_, e[var]));
    }
    return r;
  }

  /// True iff invariant under all permutations within each color class.
  bool is_color_symmetric(const VarSet& vars) const {
    // Transpositions of adjacent same-color variables generate the group.
    for (int a = 0; a + 1 < nvars_; ++a)
      for (int b = a + 1; b < nvars_; ++b) {
        if (vars.colors[a] != vars.colors[b]) continue;
        std::vector<int> perm(nvars_);
        std::iota(perm.begin(), perm.end(), 0);
        std::swap(perm[a], perm[b]);
        if (permuted(perm) != *this) return false;
      }
    return true;
  }

  /**
   * Exact division in K[z^+-]: returns *this / d when exact, nullopt
   * otherwise.  Operands are shifted into the polynomial ring first; lex
   * long division with the componentwise leading-term check then terminates
   * because lex on N^n is a well-order.
   */
  std::optional<LaurentPoly> divide_exact(const LaurentPoly& d) const {
    if (d.is_zero()) throw DivisionByZero();
    if (is_zero()) return LaurentPoly(nvars_, arity_);
    ZExpo sa(nvars_, 0), sd(nvars_, 0);
    for (int i = 0; i < nvars_; ++i) {
      sa[i] = -min_exp(i);
      sd[i] = -d.min_exp(i);
    }
    LaurentPoly rem = shifted(sa), dd = d.shifted(sd);
    LaurentPoly q(nvars_, arity_);
    const auto& [de, dc] = *dd.terms_.rbegin();
    while (!rem.is_zero()) {
      const auto [re, rc] = *rem.terms_.rbegin();
      ZExpo e = re;
      for (int i = 0; i < nvars_; ++i) {
        e[i] -= de[i];
        if (e[i] < 0) return std::nullopt;
      }
      KScalar c = rc / dc;
      q.add_term(e, c);
      rem = rem - dd * LaurentPoly::monomial(nvars_, e, c);
    }
    ZExpo back(nvars_);
    for (int i = 0; i < nvars_; ++i) back[i] = sd[i] - sa[i];
    return q.shifted(back);
  }

  std::string to_string(const ParamNames& pn,
                        const std::string& var_prefix = "z") const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto& [e, c] : terms_) {
      if (!out.empty()) out += " + ";
      std::string mono;
      for (int i = 0; i < nvars_; ++i) {
        if (e[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += var_prefix + std::to_string(i + 1);
        if (e[i] != 1) mono += "^" + std::to_string(e[i]);
      }
      std::string cs = c.to_string(pn);
      bool needs_paren = cs.find_first_of("+- ") != std::string::npos;
      if (mono.empty())
        out += needs_paren ? "(" + cs + ")" : cs;
      else if (c.is_one())
        out += mono;
      else
        out += (needs_paren ? "(" + cs + ")" : cs) + "*" + mono;
    }
    return out;
  }

private:
  int nvars_, arity_;
  std::map<ZExpo, KScalar> terms_;
};

/* ------------------------------------------------------------------------- */
/*  Denominator factors                                                      */
/* ------------------------------------------------------------------------- */

/// A monic binomial denominator factor.
struct DenFactor {
  enum Kind { ZZ, ZC, Z } kind;
  int u;         ///< main variable (factor is monic in z_u)
  int v = -1;    ///< ZZ only: (z_u - g z_v), with the convention u < v
  GammaPoint g;  ///< ZZ: monomial coefficient; ZC: the nonzero constant point

  static DenFactor zz(int u, int v, GammaPoint g) {
    assert(u < v);
    return DenFactor{ZZ, u, v, std::move(g)};
  }
  static DenFactor zc(int u, GammaPoint g) {
    assert(!g.zero);
    return DenFactor{ZC, u, -1, std::move(g)};
  }
  static DenFactor z(int u, int arity) {
    return DenFactor{Z, u, -1, GammaPoint::zero_point(arity)};
  }

  bool involves(int var) const { return u == var || (kind == ZZ && v == var); }

  /// Expanded polynomial form.
  LaurentPoly poly(int nvars, int arity) const {
    LaurentPoly p(nvars, arity);
    ZExpo e(nvars, 0);
    e[u] = 1;
    p.add_term(e, KScalar::from_int(arity, 1));
    if (kind == ZZ) {
      ZExpo f(nvars, 0);
      f[v] = 1;
      p.add_term(f, -KScalar::from_gamma(g));
    } else if (kind == ZC) {
      p.add_term(ZExpo(nvars, 0), -KScalar::from_gamma(g));
    }
    return p;
  }

  bool operator==(const DenFactor& o) const {
    return kind == o.kind && u == o.u && v == o.v && g == o.g;
  }
  bool operator<(const DenFactor& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (u != o.u) return u < o.u;
    if (v != o.v) return v < o.v;
    return g < o.g;
  }

  std::string to_string(const ParamNames& pn) const {
    std::string zu = "z" + std::to_string(u + 1);
    switch (kind) {
      case Z:
        return zu;
      case ZC:
        return "(" + zu + " - " + g.to_string(pn) + ")";
      case ZZ: {
        std::string gs = g.to_string(pn);
        std::string coeff = gs == "1" ? "" : gs + "*";
        return "(" + zu + " - " + coeff + "z" + std::to_string(v + 1) + ")";
      }
    }
    return "?";
  }
};

/* ------------------------------------------------------------------------- */
/*  FactoredRat                                                              */
/* ------------------------------------------------------------------------- */

class FactoredRat {
public:
  FactoredRat(int nvars, int arity)
      : num_(nvars, arity) {}

  explicit FactoredRat(LaurentPoly num) : num_(std::move(num)) {}

  FactoredRat(LaurentPoly num, std::vector<DenFactor> den)
      : num_(std::move(num)), den_(std::move(den)) {
    sort_den();
  }

  const LaurentPoly& num() const { return num_; }
  LaurentPoly& num() { return num_; }
  const std::vector<DenFactor>& den() const { return den_; }
  int nvars() const { return num_.nvars(); }
  int arity() const { return num_.arity(); }
  bool is_zero() const { return num_.is_zero(); }

  /// Append a (z_a - g z_b) denominator factor with arbitrary a != b,
  /// normalizing to the u < v convention; the unit is folded into the
  /// numerator.  Dividing by (z_a - g z_b) with a > b is the same as
  /// dividing by -g (z_b - g^-1 z_a).
  void push_den_zz(int a, int b, const GammaPoint& g) {
    assert(!g.zero);
    if (a < b) {
      den_.push_back(DenFactor::zz(a, b, g));
    } else {
      den_.push_back(DenFactor::zz(b, a, g.inverse()));
      num_ = num_ * (-KScalar::from_gamma(g.inverse()));
    }
    sort_den();
  }

  void push_den(const DenFactor& f) {
    den_.push_back(f);
    sort_den();
  }

  void mul_num(const LaurentPoly& p) { num_ = num_ * p; }
  void mul_scalar(const KScalar& c) { num_ = num_ * c; }

  FactoredRat operator*(const FactoredRat& o) const {
    FactoredRat r(num_ * o.num_);
    r.den_ = den_;
    r.den_.insert(r.den_.end(), o.den_.begin(), o.den_.end());
    r.sort_den();
    return r;
  }

  /// Apply a variable permutation to numerator and denominator factors.
  FactoredRat permuted(const std::vector<int>& perm) const {
    FactoredRat r(num_.permuted(perm));
    for (DenFactor f : den_) {
      if (f.kind == DenFactor::ZZ) {
        int a = perm[f.u], b = perm[f.v];
        r.push_den_zz(a, b, f.g);
      } else {
        f.u = perm[f.u];
        r.den_.push_back(f);
      }
    }
    r.sort_den();
    return r;
  }

  /// Cancel numerator against denominator factors where division is exact.
  void simplify() {
    bool progress = true;
    while (progress && !num_.is_zero()) {
      progress = false;
      for (std::size_t i = 0; i < den_.size(); ++i) {
        auto q = num_.divide_exact(den_[i].poly(nvars(), arity()));
        if (q) {
          num_ = *q;
          den_.erase(den_.begin() + i);
          progress = true;
          break;
        }
      }
    }
    if (num_.is_zero()) den_.clear();
  }

  /// Exact sum over a common (multiset-union) denominator.
  FactoredRat operator+(const FactoredRat& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    // Common denominator: per distinct factor, max of the two multiplicities.
    std::vector<DenFactor> common;
    std::size_t i = 0, j = 0;
    while (i < den_.size() || j < o.den_.size()) {
      if (j == o.den_.size() || (i < den_.size() && den_[i] < o.den_[j]))
        common.push_back(den_[i++]);
      else if (i == den_.size() || o.den_[j] < den_[i])
        common.push_back(o.den_[j++]);
      else {
        common.push_back(den_[i]);
        ++i;
        ++j;
      }
    }
    LaurentPoly n1 = num_, n2 = o.num_;
    // Multiply each numerator by the complement of its denominator.
    auto complement = [&](const std::vector<DenFactor>& own,
                          LaurentPoly& n) {
      std::vector<DenFactor> rest;
      std::size_t a = 0;
      for (const auto& f : common) {
        if (a < own.size() && own[a] == f)
          ++a;
        else
          rest.push_back(f);
      }
      for (const auto& f : rest) n = n * f.poly(nvars(), arity());
    };
    complement(den_, n1);
    complement(o.den_, n2);
    return FactoredRat(n1 + n2, common);
  }

  FactoredRat operator-() const {
    FactoredRat r = *this;
    r.num_ = -r.num_;
    return r;
  }

  std::string to_string(const ParamNames& pn) const {
    std::string s = num_.to_string(pn);
    if (!den_.empty()) {
      s = "(" + s + ") / [";
      for (std::size_t i = 0; i < den_.size(); ++i) {
        if (i) s += ", ";
        s += den_[i].to_string(pn);
      }
      s += "]";
    }
    return s;
  }

private:
  void sort_den() { std::sort(den_.begin(), den_.end()); }

  LaurentPoly num_;
  std::vector<DenFactor> den_;
};

/* ------------------------------------------------------------------------- */
/*  Residues                                                                 */
/* ------------------------------------------------------------------------- */

/**
 * Res_{z_var = point} f, exact, with point a parameter monomial or 0.
 *
 * Pole order M = number of denominator factors that vanish identically at
 * the point, plus the order of z_var in the numerator's denominator-free
 * part (negative exponents are cleared into z_var factors first).  The
 * residue is the w^{M-1} Taylor coefficient of (z_var - point)^M f at
 * z_var = point + w; every remaining denominator factor is linear in w, so
 * its inverse series keeps the denominator factored (see file header).
 */
inline FactoredRat residue_at(const FactoredRat& f, int var,
                              const GammaPoint& point) {
  const int nv = f.nvars(), ar = f.arity();
  LaurentPoly num = f.num();
  std::vector<DenFactor> den = f.den();

  // Clear negative numerator exponents of var into explicit z factors.
  int me = num.min_exp(var);
  if (me < 0) {
    ZExpo shift(nv, 0);
    shift[var] = -me;
    num = num.shifted(shift);
    for (int k = 0; k < -me; ++k) den.push_back(DenFactor::z(var, ar));
  }

  // Split off the identically-vanishing factors (these are exactly w).
  std::vector<DenFactor> keep;
  int M = 0;
  for (const auto& d : den) {
    bool pole = (d.kind == DenFactor::Z && d.u == var && point.zero) ||
                (d.kind == DenFactor::ZC && d.u == var && !point.zero &&
                 d.g == point);
    if (pole)
      ++M;
    else
      keep.push_back(d);
  }
  if (M == 0) return FactoredRat(nv, ar);  // regular point: residue 0

  // Among the kept factors, separate those depending on z_var; each is
  // A + B w after the substitution z_var = point + w.
  struct Dep {
    DenFactor a_factor;  // A as a factor in the remaining variables...
    KScalar a_unit;      // ...times this unit (so F = unit*(factor) + B w)
    KScalar b;           // the w coefficient B
    bool a_is_const = false;
    KScalar a_const;     // when A is a nonzero constant instead of a factor
  };
  std::vector<DenFactor> indep;
  std::vector<Dep> deps;
  for (const auto& d : keep) {
    if (!d.involves(var)) {
      indep.push_back(d);
      continue;
    }
    Dep dep;
    dep.b = KScalar::from_int(ar, 1);
    if (d.kind == DenFactor::ZZ && d.u == var) {
      // (point + w) - g z_v = -g (z_v - point/g) + w
      if (point.zero) {
        dep.a_factor = DenFactor::z(d.v, ar);
      } else {
        dep.a_factor = DenFactor::zc(d.v, point * d.g.inverse());
      }
      dep.a_unit = -KScalar::from_gamma(d.g);
    } else if (d.kind == DenFactor::ZZ && d.v == var) {
      // z_u - g (point + w) = (z_u - g point) - g w
      if (point.zero) {
        dep.a_factor = DenFactor::z(d.u, ar);
      } else {
        dep.a_factor = DenFactor::zc(d.u, d.g * point);
      }
      dep.a_unit = KScalar::from_int(ar, 1);
      dep.b = -KScalar::from_gamma(d.g);
    } else if (d.kind == DenFactor::ZC) {
      // (point + w) - c, with point != c (else it was a pole factor).
      dep.a_is_const = true;
      dep.a_const = KScalar::from_gamma(point) - KScalar::from_gamma(d.g);
      assert(!dep.a_const.is_zero());
    } else {  // Z factor with point != 0
      dep.a_is_const = true;
      dep.a_const = KScalar::from_gamma(point);
    }
    deps.push_back(std::move(dep));
  }

  // Numerator Taylor coefficients in w up to order M-1:
  //   z_var^e -> sum_j C(e,j) point^{e-j} w^j.
  std::vector<LaurentPoly> nw(M, LaurentPoly(nv, ar));
  for (auto& [e, c] : num.terms()) {
    int ev = e[var];
    ZExpo e0 = e;
    e0[var] = 0;
    BigInt binom = 1;
    for (int j = 0; j <= std::min(ev, M - 1); ++j) {
      // binom = C(ev, j)
      KScalar coeff = c * KScalar::from_int(ar, binom);
      if (ev - j > 0) {
        if (point.zero)
          coeff = KScalar(ar);
        else
          coeff = coeff * gamma_pow_scalar(point, ev - j);
      }
      nw[j].add_term(e0, coeff);
      binom = binom * (ev - j) / (j + 1);
    }
  }

  // Collect the w^{M-1} coefficient of  (sum_j nw[j] w^j) * prod_i 1/F_i.
  // 1/F_i = sum_k units_i(k) w^k / A_i^{k+1}.  Enumerate compositions.
  FactoredRat result(nv, ar);
  std::vector<int> ks(deps.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t idx,
                                                  int used) {
    if (idx == deps.size()) {
      int j = M - 1 - used;
      if (j < 0 || nw[j].is_zero()) return;
      FactoredRat term(nw[j]);
      for (const auto& d : indep) term.push_den(d);
      for (std::size_t i = 0; i < deps.size(); ++i) {
        const Dep& dep = deps[i];
        int k = ks[i];
        // 1/F = 1/(A + Bw) = sum_k (-B)^k w^k / A^{k+1}
        KScalar unit = (-dep.b).pow(k);
        if (dep.a_is_const) {
          unit = unit / dep.a_const.pow(k + 1);
        } else {
          unit = unit / dep.a_unit.pow(k + 1);
          for (int copies = 0; copies <= k; ++copies)
            term.push_den(dep.a_factor);
        }
        term.mul_scalar(unit);
      }
      result = result + term;
      return;
    }
    for (int k = 0; used + k <= M - 1; ++k) {
      ks[idx] = k;
      rec(idx + 1, used + k);
    }
  };
  rec(0, 0);
  result.simplify();
  return result;
}

/* ------------------------------------------------------------------------- */
/*  Region expansion                                                         */
/* ------------------------------------------------------------------------- */

/// Per-variable exponent window for truncated expansions.
struct Window {
  std::vector<int> lo, hi;
};

namespace detail {

/**
 * Expand f in the region where order.front() is the smallest variable and
 * order.back() the largest (all constants smaller than everything), keeping
 * only exponents within the window.  Works outermost-variable-first.
 */
inline void expand_rec(const FactoredRat& f, std::vector<int> order,
                       const Window& win, const ZExpo& fixed,
                       LaurentPoly& out) {
  if (f.is_zero()) return;
  if (order.empty()) {
    if (!f.den().empty()) throw WindowTooSmall();
    for (auto& [e, c] : f.num().terms()) {
      ZExpo full = fixed;
      for (int i = 0; i < f.nvars(); ++i) full[i] += e[i];
      out.add_term(full, c);
    }
    return;
  }
  const int v = order.back();
  order.pop_back();
  const int nv = f.nvars(), ar = f.arity();

  std::vector<DenFactor> involved, rest;
  for (const auto& d : f.den())
    (d.involves(v) ? involved : rest).push_back(d);

  // Series of each involved factor in descending powers of z_v; every series
  // has top exponent -1, so the product with the numerator reaches only
  // finitely many exponents >= win.lo[v].
  const int top_total = f.num().max_exp(v) - static_cast<int>(involved.size());
  if (top_total < win.lo[v]) return;
  const int len = top_total - win.lo[v] + 1;  // terms per factor series

  // Current partial product: map z_v exponent -> coefficient (poly in rest).
  std::map<int, LaurentPoly> prod;
  for (auto& [e, c] : f.num().terms()) {
    ZExpo e0 = e;
    e0[v] = 0;
    auto it = prod.find(e[v]);
    if (it == prod.end())
      it = prod.emplace(e[v], LaurentPoly(nv, ar)).first;
    it->second.add_term(e0, c);
  }

  int remaining = static_cast<int>(involved.size());
  for (const auto& d : involved) {
    --remaining;
    // Build the factor's series terms: pairs (v-exponent, coefficient poly).
    std::vector<std::pair<int, LaurentPoly>> series;
    for (int k = 0; k < len; ++k) {
      LaurentPoly coeff(nv, ar);
      if (d.kind == DenFactor::Z) {
        if (k > 0) break;  // 1/z_v exactly
        coeff = LaurentPoly::constant(nv, KScalar::from_int(ar, 1));
      } else if (d.kind == DenFactor::ZC && d.u == v) {
        // 1/(z_v - g) = sum g^k z_v^{-1-k}
        coeff = LaurentPoly::constant(nv, KScalar::from_gamma(d.g.pow(k)));
      } else if (d.kind == DenFactor::ZZ && d.u == v) {
        // 1/(z_v - g z_w) = sum g^k z_w^k z_v^{-1-k}
        ZExpo e(nv, 0);
        e[d.v] = k;
        coeff = LaurentPoly::monomial(nv, e, KScalar::from_gamma(d.g.pow(k)));
      } else {
        // 1/(z_u - g z_v), v largest:  -sum g^{-1-k} z_u^k z_v^{-1-k}
        ZExpo e(nv, 0);
        e[d.u] = k;
        coeff = LaurentPoly::monomial(
            nv, e, -KScalar::from_gamma(d.g.pow(-1 - k)));
      }
      series.emplace_back(-1 - k, coeff);
    }
    std::map<int, LaurentPoly> next;
    for (auto& [ep, cp] : prod)
      for (auto& [es, cs] : series) {
        int e = ep + es;
        // Prune: each remaining factor contributes at most -1, so the final
        // exponent is at most e - remaining.
        if (e - remaining < win.lo[v]) continue;
        auto it = next.find(e);
        if (it == next.end())
          it = next.emplace(e, LaurentPoly(nv, ar)).first;
        it->second = it->second + cp * cs;
      }
    prod = std::move(next);
  }

  for (auto& [e, coeff] : prod) {
    if (e < win.lo[v] || e > win.hi[v] || coeff.is_zero()) continue;
    ZExpo fixed2 = fixed;
    fixed2[v] += e;
    expand_rec(FactoredRat(coeff, rest), order, win, fixed2, out);
  }
}

}  // namespace detail

/**
 * Truncated exact expansion of f in the region |z_{order[0]}| << ... <<
 * |z_{order.back()}| (constants smallest).  All coefficients whose exponents
 * lie inside the window are exact.
 */
inline LaurentPoly expand_series(const FactoredRat& f,
                                 const std::vector<int>& order,
                                 const Window& win) {
  LaurentPoly out(f.nvars(), f.arity());
  detail::expand_rec(f, order, win, ZExpo(f.nvars(), 0), out);
  return out;
}

/**
 * The complete finite list of monomials z^k, all k_a <= 0, in the expansion
 * of f in the given region.  Requires a homogeneous-denominator f (only ZZ
 * and Z factors); finiteness then follows from homogeneity of each numerator
 * component.  An empty result is exactly the membership condition for the
 * n-ideal / J^r cone criterion.
 */
inline std::vector<std::pair<ZExpo, KScalar>> cone_coefficients(
    const FactoredRat& f, const std::vector<int>& order) {
  for (const auto& d : f.den())
    if (d.kind == DenFactor::ZC) throw NonTerminating();
  std::vector<std::pair<ZExpo, KScalar>> out;
  const int nden = static_cast<int>(f.den().size());
  for (auto& [deg, comp] : f.num().homogeneous_components()) {
    int T = deg - nden;  // total degree of this component of f
    if (T > 0) continue; // no all-nonpositive monomial can sum to T > 0
    Window win;
    win.lo.assign(f.nvars(), T);
    win.hi.assign(f.nvars(), 0);
    LaurentPoly part = expand_series(FactoredRat(comp, f.den()), order, win);
    for (auto& [e, c] : part.terms()) out.emplace_back(e, c);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

/* ------------------------------------------------------------------------- */
/*  Symmetrization                                                           */
/* ------------------------------------------------------------------------- */

/// All permutations preserving each color class, in deterministic order.
inline std::vector<std::vector<int>> color_permutations(const VarSet& vars) {
  const int n = vars.nvars();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> result;
  // Enumerate all n! permutations, keep the color-preserving ones.
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  do {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      ok = vars.colors[idx[a]] == vars.colors[a];
    if (ok) result.push_back(idx);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return result;
}

/// Sym[f]: sum over all color-preserving permutations of the variables.
inline FactoredRat symmetrize(const FactoredRat& f, const VarSet& vars) {
  FactoredRat sum(f.nvars(), f.arity());
  for (const auto& perm : color_permutations(vars))
    sum = sum + f.permuted(perm);
  sum.simplify();
  return sum;
}

}  // namespace qsh
