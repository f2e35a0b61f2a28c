#include "lagcoh/symbolic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "lagcoh/errors.hpp"

namespace lagcoh {

namespace {

const ChartPtr& pick_chart(const Expr& a, const Expr& b) {
  if (!a.chart() && !b.chart()) throw Error("expression without chart");
  if (a.chart() && b.chart() && a.chart() != b.chart() && !(*a.chart() == *b.chart()))
    throw Error("expressions live on different charts");
  return a.chart() ? a.chart() : b.chart();
}

Poly with_chart(Poly p, const ChartPtr& c) {
  if (p.chart()) return p;
  Poly q(c);
  q += p;
  return q;
}

// Inserts h^e into the factor list, keeping factors monic and splitting off
// monomial content and known factors.
void add_factor(Expr::Factors& den, Poly h, int e, Scalar& scalar_out) {
  if (h.is_zero()) throw Error("division by zero");
  if (h.is_constant()) {
    Scalar c = h.constant_term();
    Scalar p = 1;
    for (int i = 0; i < e; ++i) p *= c;
    scalar_out /= p;
    return;
  }
  // monomial content
  const auto& terms = h.terms();
  const std::size_t n = terms.begin()->first.size();
  Exps mins = terms.begin()->first;
  for (const auto& [ex, c] : terms)
    for (std::size_t i = 0; i < n; ++i) mins[i] = std::min(mins[i], ex[i]);
  bool has_content = false;
  for (int x : mins) has_content = has_content || x > 0;
  if (has_content && terms.size() > 1) {
    Poly rest(h.chart());
    for (const auto& [ex, c] : terms) {
      Exps f = ex;
      for (std::size_t i = 0; i < n; ++i) f[i] -= mins[i];
      rest.add_term(f, c);
    }
    for (std::size_t i = 0; i < n; ++i)
      if (mins[i] > 0) add_factor(den, Poly::variable(h.chart(), static_cast<int>(i)), e * mins[i], scalar_out);
    add_factor(den, rest, e, scalar_out);
    return;
  }
  if (terms.size() == 1) {
    int nz = 0;
    for (int x : mins) nz += x > 0;
    if (nz > 1 || (nz == 1 && *std::max_element(mins.begin(), mins.end()) > 1)) {
      scalar_out /= [&] {
        Scalar p = 1;
        for (int i = 0; i < e; ++i) p *= terms.begin()->second;
        return p;
      }();
      for (std::size_t i = 0; i < n; ++i)
        if (mins[i] > 0) add_factor(den, Poly::variable(h.chart(), static_cast<int>(i)), e * mins[i], scalar_out);
      return;
    }
  }
  Scalar lc = h.leading_coefficient();
  {
    Scalar p = 1;
    for (int i = 0; i < e; ++i) p *= lc;
    scalar_out /= p;
  }
  h = h.monic();
  for (std::size_t idx = 0; idx < den.size(); ++idx) {
    Poly g = den[idx].first;
    if (g == h) {
      den[idx].second += e;
      return;
    }
    if (auto q = h.divide_exact(g)) {
      add_factor(den, g, e, scalar_out);
      add_factor(den, *q, e, scalar_out);
      return;
    }
    if (auto q = g.divide_exact(h)) {
      int k = den[idx].second;
      den.erase(den.begin() + static_cast<std::ptrdiff_t>(idx));
      add_factor(den, h, k + e, scalar_out);
      add_factor(den, *q, k, scalar_out);
      return;
    }
  }
  den.emplace_back(h, e);
}

}  // namespace

Expr::Expr(ChartPtr chart, const Scalar& c) : num_(std::move(chart), c) {}

Expr::Expr(Poly numerator) : num_(std::move(numerator)) {}

Expr Expr::variable(ChartPtr chart, int v) { return Expr(Poly::variable(std::move(chart), v)); }

Expr Expr::fraction(Poly numerator, Factors denominator) {
  Expr e;
  Scalar s = 1;
  ChartPtr chart = numerator.chart();
  for (auto& [f, k] : denominator) {
    if (!chart) chart = f.chart();
    if (k < 0) throw Error("negative exponent in denominator");
    if (k > 0) add_factor(e.den_, f, k, s);
  }
  e.num_ = with_chart(std::move(numerator), chart);
  e.num_ *= s;
  e.normalize();
  return e;
}

void Expr::normalize() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  for (auto& [f, k] : den_) {
    while (k > 0) {
      if (auto q = num_.divide_exact(f)) {
        num_ = std::move(*q);
        --k;
        continue;
      }
      if (f.has_trig() && num_.monic() == f) {
        num_ = Poly(num_.chart(), num_.leading_coefficient());
        --k;
        continue;
      }
      break;
    }
  }
  den_.erase(std::remove_if(den_.begin(), den_.end(), [](const auto& p) { return p.second == 0; }), den_.end());
  std::sort(den_.begin(), den_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
}

Poly Expr::denominator_poly() const {
  Poly d(chart(), 1);
  for (const auto& [f, k] : den_) d = d * f.pow(static_cast<unsigned>(k));
  return d;
}

std::optional<Scalar> Expr::constant_value() const {
  if (!den_.empty()) return std::nullopt;
  if (!num_.is_constant()) return std::nullopt;
  return num_.constant_term();
}

bool Expr::uses_var(int v) const {
  if (num_.uses_var(v)) return true;
  for (const auto& [f, k] : den_)
    if (f.uses_var(v)) return true;
  return false;
}

Expr Expr::operator-() const {
  Expr e = *this;
  e.num_ = -e.num_;
  return e;
}

Expr operator+(const Expr& a, const Expr& b) {
  const ChartPtr& c = pick_chart(a, b);
  if (a.den_.empty() && b.den_.empty()) {
    Expr e(with_chart(a.num_, c) + with_chart(b.num_, c));
    return e;
  }
  Expr::Factors lcm = a.den_;
  for (const auto& [f, k] : b.den_) {
    bool found = false;
    for (auto& [g, kk] : lcm)
      if (g == f) {
        kk = std::max(kk, k);
        found = true;
      }
    if (!found) lcm.emplace_back(f, k);
  }
  auto lift = [&](const Expr& x) {
    Poly p = with_chart(x.num_, c);
    for (const auto& [f, k] : lcm) {
      int have = 0;
      for (const auto& [g, kk] : x.den_)
        if (g == f) have = kk;
      if (k > have) p = p * f.pow(static_cast<unsigned>(k - have));
    }
    return p;
  };
  Expr e;
  e.num_ = lift(a) + lift(b);
  e.den_ = std::move(lcm);
  e.normalize();
  return e;
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  const ChartPtr& c = pick_chart(a, b);
  if (a.den_.empty() && b.den_.empty()) return Expr(with_chart(a.num_, c) * with_chart(b.num_, c));
  Expr e;
  Scalar s = 1;
  e.den_ = a.den_;
  for (const auto& [f, k] : b.den_) add_factor(e.den_, f, k, s);
  e.num_ = with_chart(a.num_, c) * with_chart(b.num_, c);
  e.num_ *= s;
  e.normalize();
  return e;
}

Expr operator*(const Scalar& s, const Expr& a) {
  Expr e = a;
  e.num_ *= s;
  if (e.num_.is_zero()) e.den_.clear();
  return e;
}

Expr Expr::inverse() const {
  if (num_.is_zero()) throw Error("division by zero expression");
  Expr e;
  Scalar s = 1;
  add_factor(e.den_, num_, 1, s);
  e.num_ = denominator_poly();
  e.num_ *= s;
  e.normalize();
  return e;
}

Expr operator/(const Expr& a, const Expr& b) { return a * b.inverse(); }

Expr Expr::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  Expr r(chart(), 1);
  Expr base = *this;
  unsigned u = static_cast<unsigned>(k);
  while (u) {
    if (u & 1u) r = r * base;
    u >>= 1u;
    if (u) base = base * base;
  }
  return r;
}

std::string Expr::str() const {
  std::string n = num_.str();
  if (den_.empty()) return n;
  if (num_.size() > 1) n = "(" + n + ")";
  std::string d;
  for (const auto& [f, k] : den_) {
    if (!d.empty()) d += "*";
    std::string fs = f.str();
    if (f.size() > 1) fs = "(" + fs + ")";
    d += fs;
    if (k > 1) d += "^" + std::to_string(k);
  }
  if (den_.size() > 1) d = "(" + d + ")";
  return n + "/" + d;
}

CommonDenominator over_common_denominator(const std::vector<Expr>& exprs) {
  CommonDenominator cd;
  for (const auto& e : exprs)
    for (const auto& [f, k] : e.denominator()) {
      bool found = false;
      for (auto& [g, kk] : cd.factors)
        if (g == f) {
          kk = std::max(kk, k);
          found = true;
        }
      if (!found) cd.factors.emplace_back(f, k);
    }
  for (const auto& e : exprs) {
    Poly p = e.numerator();
    for (const auto& [f, k] : cd.factors) {
      int have = 0;
      for (const auto& [g, kk] : e.denominator())
        if (g == f) have = kk;
      if (k > have) p = p * f.pow(static_cast<unsigned>(k - have));
    }
    cd.numerators.push_back(std::move(p));
  }
  return cd;
}

Expr apply_derivation(const Expr& e, const std::map<int, Poly>& images) {
  Expr result(e.numerator().apply_derivation(images));
  if (!result.chart()) result = Expr(e.chart(), 0) + result;
  if (e.is_polynomial()) return result;
  result = Expr::fraction(e.numerator().apply_derivation(images), e.denominator());
  for (std::size_t k = 0; k < e.denominator().size(); ++k) {
    const auto& [f, mult] = e.denominator()[k];
    Poly fd = f.apply_derivation(images);
    if (fd.is_zero()) continue;
    Expr::Factors den = e.denominator();
    den[k].second += 1;
    Poly num = e.numerator() * fd;
    num *= Scalar(mult);
    result = result - Expr::fraction(num, den);
  }
  return result;
}

namespace {

class Parser {
 public:
  Parser(const ChartPtr& chart, const std::string& text) : chart_(chart), s_(text) {}

  Expr parse() {
    Expr e = expr();
    skip();
    if (i_ < s_.size()) throw ParseError(std::string("unexpected '") + s_[i_] + "'", i_);
    return e;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool accept(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", i_);
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+'))
        e = e + term();
      else if (accept('-'))
        e = e - term();
      else
        return e;
    }
  }
  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = e * unary();
      } else if (accept('/')) {
        std::size_t at = i_;
        Expr d = unary();
        if (d.is_zero()) throw ParseError("division by zero", at);
        e = e / d;
      } else {
        return e;
      }
    }
  }
  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }
  Expr power() {
    Expr b = primary();
    if (accept('^')) {
      bool paren = accept('(');
      bool neg = false;
      if (accept('-'))
        neg = true;
      else
        accept('+');
      skip();
      std::size_t start = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (start == i_) throw ParseError("expected integer exponent", i_);
      int k = std::stoi(s_.substr(start, i_ - start));
      if (paren) expect(')');
      if (neg && b.is_zero()) throw ParseError("zero to a negative power", start);
      return b.pow(neg ? -k : k);
    }
    return b;
  }
  std::string name() {
    skip();
    std::size_t start = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    return s_.substr(start, i_ - start);
  }
  Expr primary() {
    skip();
    if (i_ >= s_.size()) throw ParseError("unexpected end of input", i_);
    char ch = s_[i_];
    if (ch == '(') {
      ++i_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t start = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      return Expr(chart_, Scalar(mpz_class(s_.substr(start, i_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t start = i_;
      std::string nm = name();
      if (nm == "sin" || nm == "cos") {
        skip();
        if (i_ < s_.size() && s_[i_] == '(') {
          ++i_;
          std::size_t at = i_;
          std::string arg = name();
          if (arg.empty()) throw ParseError("expected angle coordinate", at);
          auto mu = chart_->find_coord(arg);
          if (!mu) throw UnknownSymbol(arg);
          if (!chart_->is_angle(*mu)) throw ParseError("'" + arg + "' is not an angle coordinate", at);
          expect(')');
          return Expr::variable(chart_, nm == "sin" ? chart_->sin_var(*mu) : chart_->cos_var(*mu));
        }
      }
      if (auto mu = chart_->find_coord(nm)) {
        if (chart_->is_angle(*mu))
          throw ParseError("angle coordinate '" + nm + "' may only appear inside sin/cos", start);
        return Expr::variable(chart_, chart_->pos_var(*mu));
      }
      if (auto v = chart_->find_var(nm)) return Expr::variable(chart_, *v);
      throw UnknownSymbol(nm);
    }
    throw ParseError(std::string("unexpected '") + ch + "'", i_);
  }

  const ChartPtr& chart_;
  const std::string& s_;
  std::size_t i_ = 0;
};

std::map<int, Poly> coord_derivation(const ChartPtr& c, std::size_t mu) {
  std::map<int, Poly> img;
  if (c->is_angle(mu)) {
    img[c->sin_var(mu)] = Poly::variable(c, c->cos_var(mu));
    img[c->cos_var(mu)] = -Poly::variable(c, c->sin_var(mu));
  } else {
    img[c->pos_var(mu)] = Poly(c, 1);
  }
  return img;
}

}  // namespace

Expr parse_expr(const ChartPtr& chart, const std::string& text) {
  if (!chart) throw Error("parse_expr: null chart");
  Parser p(chart, text);
  return p.parse();
}

Expr partial_coord(const Expr& e, std::size_t mu) { return apply_derivation(e, coord_derivation(e.chart(), mu)); }

Expr partial_velocity(const Expr& e, std::size_t mu) {
  return apply_derivation(e, {{e.chart()->vel_var(mu), Poly(e.chart(), 1)}});
}

Expr partial_acceleration(const Expr& e, std::size_t mu) {
  return apply_derivation(e, {{e.chart()->acc_var(mu), Poly(e.chart(), 1)}});
}

Expr partial(const Expr& e, const std::string& generator) {
  const ChartPtr& c = e.chart();
  if (auto mu = c->find_coord(generator)) return partial_coord(e, *mu);
  if (auto v = c->find_var(generator)) {
    if (c->is_trig_var(*v)) throw UnknownSymbol(generator);
    return apply_derivation(e, {{*v, Poly(c, 1)}});
  }
  throw UnknownSymbol(generator);
}

Expr total_time_derivative(const Expr& e) {
  const ChartPtr& c = e.chart();
  if (has_accelerations(e)) throw Error("total time derivative of an expression with accelerations");
  std::map<int, Poly> img;
  for (std::size_t mu = 0; mu < c->dim(); ++mu) {
    Poly v = Poly::variable(c, c->vel_var(mu));
    if (c->is_angle(mu)) {
      img[c->sin_var(mu)] = Poly::variable(c, c->cos_var(mu)) * v;
      img[c->cos_var(mu)] = -(Poly::variable(c, c->sin_var(mu)) * v);
    } else {
      img[c->pos_var(mu)] = v;
    }
    img[c->vel_var(mu)] = Poly::variable(c, c->acc_var(mu));
  }
  img[c->tau_var()] = Poly(c, 1);
  return apply_derivation(e, img);
}

bool is_velocity_free(const Expr& e) {
  const ChartPtr& c = e.chart();
  if (!c) return true;
  for (std::size_t mu = 0; mu < c->dim(); ++mu)
    if (e.uses_var(c->vel_var(mu)) || e.uses_var(c->acc_var(mu))) return false;
  return true;
}

bool has_accelerations(const Expr& e) {
  const ChartPtr& c = e.chart();
  if (!c) return false;
  for (std::size_t mu = 0; mu < c->dim(); ++mu)
    if (e.uses_var(c->acc_var(mu))) return true;
  return false;
}

Expr coord_expr(const ChartPtr& chart, std::size_t mu) {
  if (chart->is_angle(mu)) throw Error("angle coordinate is not a function");
  return Expr::variable(chart, chart->pos_var(mu));
}
Expr velocity_expr(const ChartPtr& chart, std::size_t mu) { return Expr::variable(chart, chart->vel_var(mu)); }
Expr acceleration_expr(const ChartPtr& chart, std::size_t mu) { return Expr::variable(chart, chart->acc_var(mu)); }
Expr tau_expr(const ChartPtr& chart) { return Expr::variable(chart, chart->tau_var()); }

OneForm zero_form(const ChartPtr& chart) { return OneForm{chart, std::vector<Expr>(chart->dim(), Expr(chart, 0))}; }

OneForm operator+(const OneForm& a, const OneForm& b) {
  OneForm r = a;
  for (std::size_t i = 0; i < r.components.size(); ++i) r.components[i] += b.components[i];
  return r;
}
OneForm operator-(const OneForm& a, const OneForm& b) {
  OneForm r = a;
  for (std::size_t i = 0; i < r.components.size(); ++i) r.components[i] -= b.components[i];
  return r;
}
OneForm operator*(const Scalar& s, const OneForm& a) {
  OneForm r = a;
  for (auto& x : r.components) x = s * x;
  return r;
}
bool operator==(const OneForm& a, const OneForm& b) {
  if (a.components.size() != b.components.size()) return false;
  for (std::size_t i = 0; i < a.components.size(); ++i)
    if (!(a.components[i] == b.components[i])) return false;
  return true;
}

// Velocities are named d<coord>, so the attached Lagrangian reads as the form.
std::string str(const OneForm& w) { return form_to_lagrangian(w).str(); }

Expr form_to_lagrangian(const OneForm& w) {
  Expr L(w.chart, 0);
  for (std::size_t mu = 0; mu < w.components.size(); ++mu) L += w.components[mu] * velocity_expr(w.chart, mu);
  return L;
}

OneForm exterior_derivative(const Expr& f) {
  OneForm w{f.chart(), {}};
  for (std::size_t mu = 0; mu < f.chart()->dim(); ++mu) w.components.push_back(partial_coord(f, mu));
  return w;
}

std::map<std::pair<std::size_t, std::size_t>, Expr> exterior_derivative(const OneForm& w) {
  std::map<std::pair<std::size_t, std::size_t>, Expr> out;
  const std::size_t n = w.components.size();
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t nu = mu + 1; nu < n; ++nu)
      out[{mu, nu}] = partial_coord(w.components[nu], mu) - partial_coord(w.components[mu], nu);
  return out;
}

Expr lie_derivative_scalar(const VectorFieldExpr& x, const Expr& f) {
  Expr r(x.chart, 0);
  for (std::size_t mu = 0; mu < x.components.size(); ++mu) {
    if (x.components[mu].is_zero()) continue;
    r += x.components[mu] * partial_coord(f, mu);
  }
  return r;
}

Expr lie_derivative_lagrangian(const VectorFieldExpr& x, const Expr& L) {
  const ChartPtr& c = x.chart;
  Expr r = lie_derivative_scalar(x, L);
  for (std::size_t mu = 0; mu < x.components.size(); ++mu) {
    if (x.components[mu].is_zero()) continue;
    Expr dtx(c, 0);
    for (std::size_t nu = 0; nu < c->dim(); ++nu) dtx += velocity_expr(c, nu) * partial_coord(x.components[mu], nu);
    if (dtx.is_zero()) continue;
    r += dtx * partial_velocity(L, mu);
  }
  return r;
}

OneForm lie_derivative_form(const VectorFieldExpr& x, const OneForm& w) {
  OneForm r{w.chart, {}};
  const std::size_t n = w.components.size();
  for (std::size_t mu = 0; mu < n; ++mu) {
    Expr v = lie_derivative_scalar(x, w.components[mu]);
    for (std::size_t nu = 0; nu < n; ++nu)
      if (!w.components[nu].is_zero()) v += w.components[nu] * partial_coord(x.components[nu], mu);
    r.components.push_back(v);
  }
  return r;
}

VectorFieldExpr bracket(const VectorFieldExpr& x, const VectorFieldExpr& y) {
  VectorFieldExpr r{x.chart, {}};
  for (std::size_t mu = 0; mu < x.components.size(); ++mu)
    r.components.push_back(lie_derivative_scalar(x, y.components[mu]) - lie_derivative_scalar(y, x.components[mu]));
  return r;
}

bool operator==(const VectorFieldExpr& a, const VectorFieldExpr& b) {
  if (a.components.size() != b.components.size()) return false;
  for (std::size_t i = 0; i < a.components.size(); ++i)
    if (!(a.components[i] == b.components[i])) return false;
  return true;
}

ELForm euler_lagrange(const Expr& L) {
  const ChartPtr& c = L.chart();
  if (has_accelerations(L)) throw Error("euler_lagrange: Lagrangian contains accelerations");
  ELForm el{c, {}};
  const std::size_t n = c->dim();
  for (std::size_t mu = 0; mu < n; ++mu) {
    Expr pv = partial_velocity(L, mu);
    Expr comp = partial_coord(L, mu);
    for (std::size_t nu = 0; nu < n; ++nu) {
      comp -= partial_coord(pv, nu) * velocity_expr(c, nu);
      comp -= partial_velocity(pv, nu) * acceleration_expr(c, nu);
    }
    el.components.push_back(comp);
  }
  return el;
}

bool is_closed(const OneForm& w) {
  for (const auto& [k, v] : exterior_derivative(w))
    if (!v.is_zero()) return false;
  return true;
}

int line_degree(const Expr& e) {
  const ChartPtr& c = e.chart();
  int best = 0;
  auto lines = c->line_coords();
  for (const auto& [ex, co] : e.numerator().terms()) {
    int d = 0;
    for (auto mu : lines) d += ex[static_cast<std::size_t>(c->pos_var(mu))];
    best = std::max(best, d);
  }
  return best;
}

int fourier_order(const Expr& e) {
  const ChartPtr& c = e.chart();
  int best = 0;
  for (const auto& [ex, co] : e.numerator().terms())
    for (const auto& [s, cc] : c->trig_pairs())
      best = std::max(best, ex[static_cast<std::size_t>(s)] + ex[static_cast<std::size_t>(cc)]);
  return best;
}

std::vector<Poly> ansatz_basis(const ChartPtr& chart, int degree, int fourier) {
  auto lines = chart->line_coords();
  auto angles = chart->angle_coords();
  std::vector<Exps> line_monos;
  std::function<void(std::size_t, int, Exps&)> rec_lines = [&](std::size_t k, int left, Exps& e) {
    if (k == lines.size()) {
      line_monos.push_back(e);
      return;
    }
    auto v = static_cast<std::size_t>(chart->pos_var(lines[k]));
    for (int d = 0; d <= left; ++d) {
      e[v] = d;
      rec_lines(k + 1, left - d, e);
    }
    e[v] = 0;
  };
  Exps e0(chart->nvars(), 0);
  rec_lines(0, std::max(degree, 0), e0);
  std::vector<Exps> all;
  std::function<void(std::size_t, Exps&)> rec_angles = [&](std::size_t k, Exps& e) {
    if (k == angles.size()) {
      all.push_back(e);
      return;
    }
    auto s = static_cast<std::size_t>(chart->sin_var(angles[k]));
    auto c = static_cast<std::size_t>(chart->cos_var(angles[k]));
    for (int j = 0; j <= fourier; ++j) {
      e[s] = 0;
      e[c] = j;
      rec_angles(k + 1, e);
    }
    for (int j = 0; j + 1 <= fourier; ++j) {
      e[s] = 1;
      e[c] = j;
      rec_angles(k + 1, e);
    }
    e[s] = 0;
    e[c] = 0;
  };
  for (auto lm : line_monos) rec_angles(0, lm);
  std::vector<Poly> out;
  for (const auto& e : all) {
    Poly p(chart);
    p.add_term(e, 1);
    out.push_back(std::move(p));
  }
  return out;
}

LinearView linear_view(const std::vector<Poly>& polys) {
  LinearView lv;
  std::map<Exps, std::size_t> index;
  for (const auto& p : polys)
    for (const auto& [e, c] : p.terms()) index.emplace(e, 0);
  std::size_t k = 0;
  for (auto& [e, i] : index) {
    i = k++;
    lv.monomials.push_back(e);
  }
  lv.matrix = Mat(index.size(), polys.size());
  for (std::size_t j = 0; j < polys.size(); ++j)
    for (const auto& [e, c] : polys[j].terms()) lv.matrix(index[e], j) = c;
  return lv;
}

namespace {

// Stacks several components per column: rows are (component, monomial).
Mat stacked_view(const std::vector<std::vector<Poly>>& columns) {
  std::map<std::pair<std::size_t, Exps>, std::size_t> index;
  for (const auto& col : columns)
    for (std::size_t k = 0; k < col.size(); ++k)
      for (const auto& [e, c] : col[k].terms()) index.emplace(std::make_pair(k, e), 0);
  std::size_t r = 0;
  for (auto& [key, i] : index) i = r++;
  Mat m(index.size(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (std::size_t k = 0; k < columns[j].size(); ++k)
      for (const auto& [e, c] : columns[j][k].terms()) m(index[{k, e}], j) = c;
  return m;
}

}  // namespace

Mat coefficient_matrix(const std::vector<std::vector<Expr>>& columns) {
  if (columns.empty()) return Mat();
  const std::size_t n = columns.front().size();
  std::vector<std::vector<Poly>> polys(columns.size(), std::vector<Poly>(n));
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Expr> row;
    for (const auto& col : columns) row.push_back(col[k]);
    CommonDenominator cd = over_common_denominator(row);
    for (std::size_t j = 0; j < columns.size(); ++j) polys[j][k] = std::move(cd.numerators[j]);
  }
  return stacked_view(polys);
}

std::optional<Expr> find_potential(const OneForm& w, AnsatzSpec ansatz) {
  const ChartPtr& c = w.chart;
  if (!is_closed(w)) throw NotClosed("find_potential: form is not closed");
  const std::size_t n = c->dim();
  bool all_zero = true;
  for (const auto& x : w.components) all_zero = all_zero && x.is_zero();
  if (all_zero) return Expr(c, 0);
  CommonDenominator cd = over_common_denominator(w.components);
  Expr den_expr = Expr::fraction(Poly(c, 1), cd.factors);
  Poly D(c, 1);
  for (const auto& [f, k] : cd.factors) D = D * f.pow(static_cast<unsigned>(k));
  int deg = ansatz.degree, four = ansatz.fourier;
  if (deg < 0 || four < 0) {
    int md = 0, mf = 0;
    for (const auto& p : cd.numerators) {
      Expr e(p);
      if (p.is_zero()) continue;
      md = std::max(md, line_degree(e));
      mf = std::max(mf, fourier_order(e));
    }
    if (deg < 0) deg = md + 1;
    if (four < 0) four = mf;
  }
  auto basis = ansatz_basis(c, deg, four);
  // d(P/D) = w  <=>  dP*D - P*dD = N*D  componentwise
  std::vector<Poly> dD;
  std::vector<std::map<int, Poly>> derivs;
  for (std::size_t mu = 0; mu < n; ++mu) {
    derivs.push_back(coord_derivation(c, mu));
    dD.push_back(D.apply_derivation(derivs.back()));
  }
  std::vector<std::vector<Poly>> cols;
  for (const auto& b : basis) {
    std::vector<Poly> comp;
    for (std::size_t mu = 0; mu < n; ++mu) comp.push_back(b.apply_derivation(derivs[mu]) * D - b * dD[mu]);
    cols.push_back(std::move(comp));
  }
  std::vector<Poly> rhs;
  for (std::size_t mu = 0; mu < n; ++mu) rhs.push_back(cd.numerators[mu] * D);
  cols.push_back(rhs);
  Mat m = stacked_view(cols);
  Mat a = m.block(0, 0, m.rows(), basis.size());
  Vec b = m.column(basis.size());
  auto x = solve(a, b);
  if (!x) return std::nullopt;
  Poly P(c);
  for (std::size_t j = 0; j < basis.size(); ++j)
    if (sgn((*x)[j]) != 0) P += basis[j] * (*x)[j];
  Expr f = Expr::fraction(P, cd.factors);
  if (!(exterior_derivative(f) == w)) throw InvariantViolation("find_potential: reconstruction failed");
  return f;
}

Expr angle_average(const Expr& e) {
  const ChartPtr& c = e.chart();
  for (const auto& [f, k] : e.denominator())
    if (f.has_trig()) throw Error("angle_average: denominator depends on an angle");
  Poly avg(c);
  for (const auto& [ex, co] : e.numerator().terms()) {
    Scalar factor = co;
    Exps f = ex;
    bool zero = false;
    for (const auto& [s, cc] : c->trig_pairs()) {
      int es = ex[static_cast<std::size_t>(s)], ec = ex[static_cast<std::size_t>(cc)];
      if (es % 2 == 1 || ec % 2 == 1) {
        zero = true;
        break;
      }
      // mean of cos^(2m) is binom(2m, m) / 4^m
      mpz_class b;
      mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(ec), static_cast<unsigned long>(ec / 2));
      mpz_class p = 1;
      p <<= static_cast<mp_bitcnt_t>(ec);
      factor *= Scalar(b, p);
      f[static_cast<std::size_t>(s)] = 0;
      f[static_cast<std::size_t>(cc)] = 0;
    }
    if (zero) continue;
    factor.canonicalize();
    avg.add_term(f, factor);
  }
  return Expr::fraction(avg, e.denominator());
}

DeRhamSplit derham_split(const OneForm& w, AnsatzSpec ansatz) {
  const ChartPtr& c = w.chart;
  if (!is_closed(w)) throw NotClosed("derham_split: form is not closed");
  DeRhamSplit out;
  OneForm rest = w;
  for (auto mu : c->angle_coords()) {
    Expr avg = angle_average(w.components[mu]);
    auto val = avg.constant_value();
    if (!val) throw InvariantViolation("derham_split: harmonic coefficient is not constant");
    out.harmonic[mu] = *val;
    rest.components[mu] -= Expr(c, *val);
  }
  auto f = find_potential(rest, ansatz);
  if (!f) throw AnsatzExhausted("derham_split: no potential within the ansatz");
  out.potential = *f;
  return out;
}

std::vector<Scalar> point_assignment(const Chart& chart, const Point& p) {
  if (p.size() != chart.dim()) throw Error("point has wrong number of coordinates");
  std::vector<Scalar> a(chart.nvars());
  for (std::size_t mu = 0; mu < chart.dim(); ++mu) {
    if (chart.is_angle(mu)) {
      if (p[mu].sin * p[mu].sin + p[mu].cos * p[mu].cos != 1)
        throw Error("angle value of coordinate '" + chart.coords()[mu].name + "' is not on the unit circle");
      a[static_cast<std::size_t>(chart.sin_var(mu))] = p[mu].sin;
      a[static_cast<std::size_t>(chart.cos_var(mu))] = p[mu].cos;
    } else {
      a[static_cast<std::size_t>(chart.pos_var(mu))] = p[mu].value;
    }
  }
  return a;
}

Scalar evaluate(const Expr& e, const std::vector<Scalar>& assignment) {
  Scalar d = 1;
  for (const auto& [f, k] : e.denominator()) {
    Scalar v = f.evaluate(assignment);
    if (sgn(v) == 0) throw EvaluationPole("denominator vanishes at the evaluation point");
    for (int i = 0; i < k; ++i) d *= v;
  }
  return e.numerator().evaluate(assignment) / d;
}

Scalar evaluate_at(const Expr& e, const Point& p) { return evaluate(e, point_assignment(*e.chart(), p)); }

std::string point_str(const Chart& chart, const Point& p) {
  std::string s;
  for (std::size_t mu = 0; mu < chart.dim(); ++mu) {
    if (mu) s += ", ";
    s += chart.coords()[mu].name + "=";
    if (chart.is_angle(mu))
      s += "(" + p[mu].sin.get_str() + "," + p[mu].cos.get_str() + ")";
    else
      s += p[mu].value.get_str();
  }
  return s;
}

}  // namespace lagcoh
