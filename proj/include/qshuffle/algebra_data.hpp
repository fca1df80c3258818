/**
 * @file algebra_data.hpp
 * @brief Symmetrized Cartan-type input data, parameter conventions, color
 *        orderings, and the positive-root closure for finite types.
 *
 * Two modes are supported end to end:
 *  - Loop: a finite-type symmetric integer matrix (d_ij), one quantum
 *    parameter q, colors I = {0..ncolors-1};
 *  - Toroidal: the rank-one toroidal algebra with parameters q1, q2.
 * The parameter field may carry extra generic symbols (support points u_j,
 * linear-combination symbols c_j); `arity` tracks the total count.
 */
#pragma once

#include <qshuffle/laurent.hpp>

namespace qsh {

struct NotFiniteType : std::runtime_error {
  NotFiniteType() : std::runtime_error("root closure does not terminate") {}
};

struct UnsupportedMode : std::runtime_error {
  explicit UnsupportedMode(const std::string& what)
      : std::runtime_error("unsupported mode: " + what) {}
};

struct InvalidCartan : std::runtime_error {
  explicit InvalidCartan(const std::string& what)
      : std::runtime_error("invalid Cartan data: " + what) {}
};

class CartanData {
public:
  enum class Mode { Loop, Toroidal };

  /// Loop-mode data from a symmetrized matrix (d_ij); `extra_symbols` adds
  /// generic parameters after q.
  static CartanData loop(std::vector<std::vector<int>> d,
                         int extra_symbols = 0,
                         std::vector<std::string> symbol_names = {}) {
    CartanData c;
    c.mode_ = Mode::Loop;
    c.d_ = std::move(d);
    c.ncolors_ = static_cast<int>(c.d_.size());
    c.validate();
    c.params_.names = {"q"};
    c.append_symbols(extra_symbols, symbol_names);
    return c;
  }

  /// The rank-one toroidal algebra (parameters q1, q2, one color).
  static CartanData toroidal(int extra_symbols = 0,
                             std::vector<std::string> symbol_names = {}) {
    CartanData c;
    c.mode_ = Mode::Toroidal;
    c.ncolors_ = 1;
    c.params_.names = {"q1", "q2"};
    c.append_symbols(extra_symbols, symbol_names);
    return c;
  }

  static CartanData sl2(int extra_symbols = 0) {
    return loop({{2}}, extra_symbols);
  }
  static CartanData sl3(int extra_symbols = 0) {
    return loop({{2, -1}, {-1, 2}}, extra_symbols);
  }
  static CartanData b2(int extra_symbols = 0) {
    return loop({{2, -2}, {-2, 4}}, extra_symbols);
  }

  static CartanData preset(const std::string& name, int extra_symbols = 0) {
    if (name == "sl2") return sl2(extra_symbols);
    if (name == "sl3") return sl3(extra_symbols);
    if (name == "b2") return b2(extra_symbols);
    if (name == "toroidal_gl1") return toroidal(extra_symbols);
    throw InvalidCartan("unknown preset '" + name + "'");
  }

  Mode mode() const { return mode_; }
  bool is_loop() const { return mode_ == Mode::Loop; }
  int ncolors() const { return ncolors_; }
  int arity() const { return static_cast<int>(params_.names.size()); }
  const ParamNames& params() const { return params_; }
  int d(int i, int j) const { return d_.at(i).at(j); }

  /// A fresh copy with `k` extra generic symbols appended to the field.
  CartanData with_symbols(int k, std::vector<std::string> names = {}) const {
    CartanData c = *this;
    c.append_symbols(k, names);
    return c;
  }

  /// q^e as a point of the parameter group (loop mode).
  GammaPoint qpow(int e) const {
    Expo x(arity(), 0);
    x[0] = e;
    return GammaPoint::monomial(x);
  }

  /// q1^a q2^b (toroidal mode).
  GammaPoint q12(int a, int b) const {
    Expo x(arity(), 0);
    x[0] = a;
    x[1] = b;
    return GammaPoint::monomial(x);
  }

  /// The extra symbol with index j (0-based among the appended symbols).
  GammaPoint symbol(int j) const {
    int base = mode_ == Mode::Loop ? 1 : 2;
    Expo x(arity(), 0);
    x.at(base + j) = 1;
    return GammaPoint::monomial(x);
  }

  KScalar one() const { return KScalar::from_int(arity(), 1); }
  KScalar zero() const { return KScalar(arity()); }
  KScalar integer(long v) const { return KScalar::from_int(arity(), v); }

  /// All distinct color words realizing the multidegree n, lexicographic.
  std::vector<VarSet> orderings(const std::vector<int>& n) const {
    std::vector<int> word;
    for (int i = 0; i < static_cast<int>(n.size()); ++i)
      word.insert(word.end(), n[i], i);
    std::vector<VarSet> out;
    std::sort(word.begin(), word.end());
    do {
      out.push_back(VarSet{word});
    } while (std::next_permutation(word.begin(), word.end()));
    return out;
  }

  /**
   * Positive roots via reflection closure: s_i(a) = a - (2(a,a_i)/d_ii) a_i
   * with (a,a_j) = sum_k a_k d_kj.  Throws NotFiniteType when the closure
   * exceeds a generous bound instead of terminating.
   */
  std::vector<std::vector<int>> positive_roots() const {
    if (!is_loop()) throw UnsupportedMode("positive roots need finite type");
    std::set<std::vector<int>> roots;
    std::vector<std::vector<int>> frontier;
    for (int i = 0; i < ncolors_; ++i) {
      std::vector<int> e(ncolors_, 0);
      e[i] = 1;
      roots.insert(e);
      frontier.push_back(e);
    }
    const std::size_t bound = 10000;
    while (!frontier.empty()) {
      std::vector<std::vector<int>> next;
      for (const auto& a : frontier)
        for (int i = 0; i < ncolors_; ++i) {
          long pairing = 0;
          for (int k = 0; k < ncolors_; ++k) pairing += (long)a[k] * d_[k][i];
          long coeff = 2 * pairing / d_[i][i];
          std::vector<int> b = a;
          b[i] -= static_cast<int>(coeff);
          for (int v : b)
            if (std::abs(v) > 200) throw NotFiniteType();
          if (roots.insert(b).second) next.push_back(b);
        }
      if (roots.size() > bound) throw NotFiniteType();
      frontier = std::move(next);
    }
    std::vector<std::vector<int>> pos;
    for (const auto& a : roots) {
      bool nonneg = true, nonzero = false;
      for (int v : a) {
        if (v < 0) nonneg = false;
        if (v != 0) nonzero = true;
      }
      if (nonneg && nonzero) pos.push_back(a);
    }
    return pos;  // std::set iteration gives deterministic order
  }

private:
  void validate() const {
    if (ncolors_ == 0) throw InvalidCartan("empty matrix");
    for (int i = 0; i < ncolors_; ++i) {
      if (static_cast<int>(d_[i].size()) != ncolors_)
        throw InvalidCartan("not square");
      if (d_[i][i] <= 0 || d_[i][i] % 2 != 0)
        throw InvalidCartan("diagonal entries must be positive even");
      for (int j = 0; j < ncolors_; ++j) {
        if (d_[i][j] != d_[j][i]) throw InvalidCartan("not symmetric");
        if (i != j && d_[i][j] > 0)
          throw InvalidCartan("off-diagonal entries must be <= 0");
        if (i != j && (2 * d_[i][j]) % d_[i][i] != 0)
          throw InvalidCartan("2 d_ij / d_ii must be integral");
      }
    }
  }

  void append_symbols(int k, std::vector<std::string> names) {
    for (int j = 0; j < k; ++j)
      params_.names.push_back(j < static_cast<int>(names.size())
                                  ? names[j]
                                  : "u" + std::to_string(j + 1));
  }

  Mode mode_ = Mode::Loop;
  int ncolors_ = 0;
  std::vector<std::vector<int>> d_;
  ParamNames params_;
};

}  // namespace qsh
