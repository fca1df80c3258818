/**
 * @file parse.hpp
 * @brief Exact text input: Cartan matrices ("2,-1;-1,2") and ell-weights as
 *        products/quotients/powers of z-linear factors whose roots are
 *        parameter-group monomials, e.g. "(z*q^3 - q^-3)/(z - 1)" or
 *        "q^2 * z^-1 * (z - q^-4)".  Components of a multi-color weight are
 *        separated by ';'.  Everything outside this grammar is rejected with
 *        a position-precise error.
 */
#pragma once

#include <qshuffle/ellweight.hpp>

#include <cctype>

namespace qsh {

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error("parse error at position " + std::to_string(pos) +
                           ": " + what) {}
};

/// "2,-1;-1,2" -> rows of a symmetrized Cartan matrix.
inline std::vector<std::vector<int>> parse_cartan_matrix(
    const std::string& s) {
  std::vector<std::vector<int>> m(1);
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  while (true) {
    skip();
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
    skip();
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      throw ParseError("expected integer", i);
    int v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
      v = 10 * v + (s[i++] - '0');
    m.back().push_back(neg ? -v : v);
    skip();
    if (i == s.size()) break;
    if (s[i] == ',') {
      ++i;
    } else if (s[i] == ';') {
      ++i;
      m.emplace_back();
    } else {
      throw ParseError("expected ',' or ';'", i);
    }
  }
  return m;
}

namespace detail {

/// Integer coefficient times a parameter monomial.
struct ParsedMono {
  BigInt n;
  Expo e;
};

class WeightParser {
public:
  WeightParser(const CartanData& c, const std::string& text, std::size_t base)
      : c_(c), s_(text), base_(base) {}

  EllWeight::Component run() {
    EllWeight::Component k{c_.one(), {}, {}, 0};
    bool denom = false;
    while (true) {
      factor(k, denom);
      skip();
      if (done()) break;
      if (peek() == '*') {
        ++i_;
        denom = false;
      } else if (peek() == '/') {
        ++i_;
        denom = true;
      } else {
        fail("expected '*', '/' or end of component");
      }
    }
    k.normalize();
    return k;
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, base_ + i_);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
      ++i_;
  }
  bool done() {
    skip();
    return i_ >= s_.size();
  }
  char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }

  int parse_int() {
    skip();
    bool neg = false;
    if (peek() == '-' || peek() == '+') neg = s_[i_++] == '-';
    skip();
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      fail("expected integer");
    long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek())))
      v = 10 * v + (s_[i_++] - '0');
    return static_cast<int>(neg ? -v : v);
  }

  int exponent_or_one() {
    skip();
    if (peek() != '^') return 1;
    ++i_;
    return parse_int();
  }

  int param_index() {
    std::string name;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
      name += s_[i_++];
    const auto& names = c_.params().names;
    for (std::size_t j = 0; j < names.size(); ++j)
      if (names[j] == name) return static_cast<int>(j);
    fail("unknown parameter '" + name + "'");
  }

  /// number and/or parameter powers joined by '*'; no 'z' allowed here.
  ParsedMono monomial() {
    ParsedMono m{1, Expo(c_.arity(), 0)};
    bool any = false;
    while (true) {
      skip();
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        long v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek())))
          v = 10 * v + (s_[i_++] - '0');
        int p = exponent_or_one();
        if (p < 0) fail("negative power of an integer");
        for (int t = 0; t < p; ++t) m.n *= v;
        if (p == 0) {
          // v^0 = 1: nothing to multiply.
        }
        any = true;
      } else if (std::isalpha(static_cast<unsigned char>(peek())) &&
                 peek() != 'z') {
        int j = param_index();
        m.e[j] += exponent_or_one();
        any = true;
      } else {
        break;
      }
      // A following '*' continues the monomial only when the next atom is
      // numeric or a parameter; 'z' and '(' belong to the factor level.
      std::size_t save = i_;
      skip();
      if (peek() != '*') break;
      ++i_;
      skip();
      if (!(std::isdigit(static_cast<unsigned char>(peek())) ||
            (std::isalpha(static_cast<unsigned char>(peek())) &&
             peek() != 'z'))) {
        i_ = save;
        break;
      }
    }
    if (!any) fail("expected a numeric or parameter monomial");
    return m;
  }

  void apply_scalar(EllWeight::Component& k, const ParsedMono& m, int power,
                    bool denom) {
    if (m.n == 0) fail("zero factor");
    KScalar v = KScalar::from_int(c_.arity(), m.n) *
                KScalar::from_gamma(GammaPoint::monomial(m.e));
    int p = denom ? -power : power;
    for (int t = 0; t < std::abs(p); ++t)
      k.c = p > 0 ? k.c * v : k.c * v.inverse();
  }

  /// One z-linear parenthesized factor, a bare z power, or a scalar.
  void factor(EllWeight::Component& k, bool denom) {
    skip();
    if (peek() == '-') {  // unary minus on a factor
      ++i_;
      apply_scalar(k, ParsedMono{-1, Expo(c_.arity(), 0)}, 1, denom);
      factor(k, denom);
      return;
    }
    if (peek() == 'z') {
      ++i_;
      int p = exponent_or_one();
      k.zpow += denom ? -p : p;
      return;
    }
    if (peek() != '(') {
      apply_scalar(k, monomial(), 1, denom);
      return;
    }
    ++i_;  // '('
    // Sum of at most one z-term and one constant term: A*z + C.
    bool have_z = false, have_c = false;
    ParsedMono A{1, Expo(c_.arity(), 0)}, C{1, Expo(c_.arity(), 0)};
    BigInt sign = 1;
    while (true) {
      skip();
      // One term: product of monomial atoms and at most one z.
      ParsedMono coef{sign, Expo(c_.arity(), 0)};
      bool term_z = false, term_any = false;
      while (true) {
        skip();
        if (peek() == 'z') {
          ++i_;
          skip();
          if (peek() == '^') fail("powers of z are not linear");
          if (term_z) fail("z appears twice in a term");
          term_z = true;
          term_any = true;
        } else if (std::isdigit(static_cast<unsigned char>(peek())) ||
                   (std::isalpha(static_cast<unsigned char>(peek())))) {
          ParsedMono m = monomial();
          coef.n *= m.n;
          for (int j = 0; j < c_.arity(); ++j) coef.e[j] += m.e[j];
          term_any = true;
        } else {
          break;
        }
        skip();
        if (peek() == '*') {
          ++i_;
          continue;
        }
        break;
      }
      if (!term_any) fail("empty term in linear factor");
      if (term_z) {
        if (have_z) fail("two z-terms in a linear factor");
        have_z = true;
        A = coef;
      } else {
        if (have_c) fail("two constant terms in a linear factor");
        have_c = true;
        C = coef;
      }
      skip();
      if (peek() == '+') {
        ++i_;
        sign = 1;
      } else if (peek() == '-') {
        ++i_;
        sign = -1;
      } else if (peek() == ')') {
        ++i_;
        break;
      } else {
        fail("expected '+', '-' or ')'");
      }
    }
    int power = exponent_or_one();
    if (!have_z) {
      // Parenthesized scalar.
      apply_scalar(k, C, power, denom);
      return;
    }
    apply_scalar(k, A, power, denom);
    if (!have_c) {
      k.zpow += (denom ? -power : power);
      return;
    }
    // A z + C = A (z - root), root = -C/A: must be a parameter monomial.
    if (C.n != -A.n)
      fail("factor root is not a parameter-group monomial");
    Expo re(c_.arity(), 0);
    for (int j = 0; j < c_.arity(); ++j) re[j] = C.e[j] - A.e[j];
    GammaPoint root = GammaPoint::monomial(re);
    int p = denom ? -power : power;
    for (int t = 0; t < std::abs(p); ++t)
      (p > 0 ? k.zeros : k.poles).push_back(root);
  }

  const CartanData& c_;
  const std::string& s_;
  std::size_t base_;
  std::size_t i_ = 0;
};

}  // namespace detail

/// Parse a full ell-weight; components separated by ';' (one per color).
inline EllWeight parse_ell_weight(const CartanData& c, const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == ';') {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  if (static_cast<int>(parts.size()) != c.ncolors())
    throw ParseError("expected " + std::to_string(c.ncolors()) +
                         " ';'-separated components, got " +
                         std::to_string(parts.size()),
                     0);
  EllWeight w(c);
  std::size_t base = 0;
  for (int i = 0; i < c.ncolors(); ++i) {
    detail::WeightParser p(c, parts[i], base);
    w.comp(i) = p.run();
    base += parts[i].size() + 1;
  }
  return w;
}

/// Comma-separated integers, e.g. "1,-1" -> {1, -1}.
inline std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::size_t i = 0;
  while (i <= s.size()) {
    std::size_t j = s.find(',', i);
    if (j == std::string::npos) j = s.size();
    std::string tok = s.substr(i, j - i);
    std::size_t pos = 0;
    try {
      out.push_back(std::stoi(tok, &pos));
    } catch (const std::exception&) {
      throw ParseError("expected integer in list", i);
    }
    while (pos < tok.size() &&
           std::isspace(static_cast<unsigned char>(tok[pos])))
      ++pos;
    if (pos != tok.size()) throw ParseError("trailing garbage in list", i);
    i = j + 1;
    if (j == s.size()) break;
  }
  return out;
}

}  // namespace qsh
