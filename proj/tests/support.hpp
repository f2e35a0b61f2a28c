#pragma once

// Test-side oracles and generators.  Nothing here calls into the library's
// elimination, normal-form or cohomology code, so results obtained through
// these helpers are independent checks.

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "lagcoh/exact_linalg.hpp"

namespace oracle {

using lagcoh::Mat;
using lagcoh::Scalar;

// Rank by fraction-free Bareiss elimination over the integers after
// clearing row denominators.
inline std::size_t rank(const Mat& m) {
  const std::size_t R = m.rows(), C = m.cols();
  std::vector<std::vector<mpz_class>> a(R, std::vector<mpz_class>(C));
  for (std::size_t i = 0; i < R; ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < C; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < C; ++j) a[i][j] = m(i, j).get_num() * (l / m(i, j).get_den());
  }
  std::size_t r = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < C && r < R; ++c) {
    std::size_t piv = r;
    while (piv < R && a[piv][c] == 0) ++piv;
    if (piv == R) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = r + 1; i < R; ++i) {
      for (std::size_t j = c + 1; j < C; ++j) a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

// Direct evaluator for the expression grammar.  Names resolve through the
// supplied map: coordinates, velocities, "sin(phi)", "cos(phi)".
class Eval {
 public:
  Eval(const std::string& s, const std::map<std::string, Scalar>& env) : s_(s), env_(env) {}
  Scalar run() {
    Scalar v = sum();
    ws();
    if (i_ != s_.size()) throw std::runtime_error("oracle: trailing input");
    return v;
  }

 private:
  const std::string& s_;
  const std::map<std::string, Scalar>& env_;
  std::size_t i_ = 0;

  void ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    ws();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  Scalar sum() {
    Scalar v = product();
    for (;;) {
      if (eat('+'))
        v += product();
      else if (eat('-'))
        v -= product();
      else
        return v;
    }
  }
  Scalar product() {
    Scalar v = unary();
    for (;;) {
      if (eat('*'))
        v *= unary();
      else if (eat('/')) {
        Scalar d = unary();
        if (d == 0) throw std::domain_error("oracle: division by zero");
        v /= d;
      } else
        return v;
    }
  }
  Scalar unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  Scalar power() {
    Scalar b = atom();
    if (eat('^')) {
      ws();
      bool neg = eat('-');
      ws();
      long e = 0;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) e = e * 10 + (s_[i_++] - '0');
      Scalar r = 1;
      for (long k = 0; k < e; ++k) r *= b;
      if (neg) r = 1 / r;
      return r;
    }
    return b;
  }
  Scalar atom() {
    ws();
    if (eat('(')) {
      Scalar v = sum();
      if (!eat(')')) throw std::runtime_error("oracle: expected )");
      return v;
    }
    if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      mpz_class n = 0;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) n = n * 10 + (s_[i_++] - '0');
      return Scalar(n);
    }
    std::string id;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) id += s_[i_++];
    if ((id == "sin" || id == "cos") && eat('(')) {
      std::string arg;
      ws();
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) arg += s_[i_++];
      if (!eat(')')) throw std::runtime_error("oracle: expected )");
      id += "(" + arg + ")";
    }
    auto it = env_.find(id);
    if (it == env_.end()) throw std::runtime_error("oracle: unbound '" + id + "'");
    return it->second;
  }
};

inline Scalar eval(const std::string& s, const std::map<std::string, Scalar>& env) { return Eval(s, env).run(); }

}  // namespace oracle

namespace gen {

using lagcoh::Scalar;

struct Rng {
  std::mt19937 eng;
  explicit Rng(unsigned seed) : eng(seed) {}
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }
  bool coin() { return integer(0, 1) == 1; }
  Scalar rational(int range = 5, int max_den = 4) {
    Scalar q(integer(-range, range), integer(1, max_den));
    q.canonicalize();
    return q;
  }
  Scalar nonzero_rational(int range = 5, int max_den = 4) {
    for (;;) {
      Scalar q = rational(range, max_den);
      if (q != 0) return q;
    }
  }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(integer(0, static_cast<int>(v.size()) - 1))];
  }
};

// Random polynomial text in the given atoms (names or sin/cos calls).
inline std::string polynomial(Rng& r, const std::vector<std::string>& atoms, int terms, int max_deg) {
  std::string s;
  for (int t = 0; t < terms; ++t) {
    Scalar c = r.nonzero_rational(4, 3);
    std::string term = "(" + c.get_str() + ")";
    int deg = r.integer(0, max_deg);
    for (int k = 0; k < deg; ++k) term += "*" + r.pick(atoms);
    s += (t ? " + " : "") + term;
  }
  return s.empty() ? "0" : s;
}

// Unit-circle point (sin, cos) from a Pythagorean triple.
inline std::pair<Scalar, Scalar> circle_point(Rng& r) {
  static const std::vector<std::pair<int, int>> mn = {{2, 1}, {3, 2}, {4, 1}, {4, 3}, {5, 2}, {5, 4}, {6, 1}};
  auto [m, n] = r.pick(mn);
  Scalar a(m * m - n * n, m * m + n * n), b(2 * m * n, m * m + n * n);
  a.canonicalize();
  b.canonicalize();
  if (r.coin()) std::swap(a, b);
  if (r.coin()) a = -a;
  if (r.coin()) b = -b;
  return {a, b};
}

}  // namespace gen
