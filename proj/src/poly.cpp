#include "lagcoh/poly.hpp"

#include <set>
#include <sstream>

#include "lagcoh/errors.hpp"

namespace lagcoh {

Chart::Chart(std::vector<Coord> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw Error("chart needs at least one coordinate");
  const std::size_t n = coords_.size();
  pos_.assign(n, -1);
  sin_.assign(n, -1);
  cos_.assign(n, -1);
  vel_.assign(n, -1);
  acc_.assign(n, -1);
  auto push = [&](const std::string& name, char k) {
    names_.push_back(name);
    kind_.push_back(k);
    return static_cast<int>(names_.size() - 1);
  };
  for (std::size_t mu = 0; mu < n; ++mu) {
    const auto& c = coords_[mu];
    if (c.name.empty()) throw Error("empty coordinate name");
    if (c.kind == CoordKind::Line) {
      pos_[mu] = push(c.name, 'p');
    } else {
      sin_[mu] = push("sin(" + c.name + ")", 's');
      cos_[mu] = push("cos(" + c.name + ")", 'c');
      trig_.emplace_back(sin_[mu], cos_[mu]);
    }
  }
  for (std::size_t mu = 0; mu < n; ++mu) vel_[mu] = push("d" + coords_[mu].name, 'v');
  for (std::size_t mu = 0; mu < n; ++mu) acc_[mu] = push("dd" + coords_[mu].name, 'a');
  tau_ = push("tau", 't');
  std::set<std::string> seen;
  for (const auto& c : coords_) seen.insert(c.name);
  if (seen.size() != n) throw Error("duplicate coordinate names");
  for (std::size_t v = 0; v < names_.size(); ++v) {
    if (kind_[v] == 'p') continue;
    std::string nm = names_[v];
    if (kind_[v] == 's' || kind_[v] == 'c') continue;
    if (seen.count(nm)) throw Error("coordinate name '" + nm + "' collides with a derived symbol");
  }
}

std::optional<int> Chart::find_var(const std::string& name) const {
  for (std::size_t v = 0; v < names_.size(); ++v)
    if (names_[v] == name) return static_cast<int>(v);
  return std::nullopt;
}

std::optional<std::size_t> Chart::find_coord(const std::string& name) const {
  for (std::size_t mu = 0; mu < coords_.size(); ++mu)
    if (coords_[mu].name == name) return mu;
  return std::nullopt;
}

std::vector<std::size_t> Chart::angle_coords() const {
  std::vector<std::size_t> r;
  for (std::size_t mu = 0; mu < coords_.size(); ++mu)
    if (is_angle(mu)) r.push_back(mu);
  return r;
}

std::vector<std::size_t> Chart::line_coords() const {
  std::vector<std::size_t> r;
  for (std::size_t mu = 0; mu < coords_.size(); ++mu)
    if (!is_angle(mu)) r.push_back(mu);
  return r;
}

bool Chart::is_trig_var(int v) const {
  char k = kind_[static_cast<std::size_t>(v)];
  return k == 's' || k == 'c';
}
bool Chart::is_position_var(int v) const { return kind_[static_cast<std::size_t>(v)] == 'p'; }
bool Chart::is_velocity_var(int v) const { return kind_[static_cast<std::size_t>(v)] == 'v'; }
bool Chart::is_acceleration_var(int v) const { return kind_[static_cast<std::size_t>(v)] == 'a'; }

ChartPtr make_chart(std::vector<Coord> coords) { return std::make_shared<const Chart>(std::move(coords)); }

Poly::Poly(ChartPtr chart, const Scalar& c) : chart_(std::move(chart)) {
  if (sgn(c) != 0) terms_[Exps(chart_->nvars(), 0)] = c;
}

Poly Poly::variable(ChartPtr chart, int v) {
  Poly p(chart);
  Exps e(chart->nvars(), 0);
  e[static_cast<std::size_t>(v)] = 1;
  p.terms_[e] = 1;
  return p;
}

bool Poly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  for (int x : terms_.begin()->first)
    if (x) return false;
  return true;
}

Scalar Poly::constant_term() const {
  if (terms_.empty()) return 0;
  const auto& first = terms_.begin()->first;
  for (int x : first)
    if (x) return 0;
  return terms_.begin()->second;
}

Scalar Poly::leading_coefficient() const {
  if (terms_.empty()) return 0;
  return terms_.rbegin()->second;
}

Poly Poly::monic() const {
  if (terms_.empty()) return *this;
  Poly p = *this;
  Scalar inv = 1 / leading_coefficient();
  for (auto& [e, c] : p.terms_) c *= inv;
  return p;
}

bool Poly::uses_var(int v) const {
  for (const auto& [e, c] : terms_)
    if (e[static_cast<std::size_t>(v)]) return true;
  return false;
}

bool Poly::uses_any(const std::vector<int>& vars) const {
  for (int v : vars)
    if (uses_var(v)) return true;
  return false;
}

bool Poly::has_trig() const {
  if (!chart_) return false;
  for (const auto& [s, c] : chart_->trig_pairs())
    if (uses_var(s) || uses_var(c)) return true;
  return false;
}

void Poly::add_term(const Exps& e, const Scalar& c) {
  if (sgn(c) == 0) return;
  if (chart_) {
    for (const auto& [s, co] : chart_->trig_pairs()) {
      auto si = static_cast<std::size_t>(s), ci = static_cast<std::size_t>(co);
      if (e[si] >= 2) {
        // sin^2 = 1 - cos^2
        Exps a = e;
        a[si] -= 2;
        add_term(a, c);
        a[ci] += 2;
        add_term(a, -c);
        return;
      }
    }
  }
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& [e, c] : p.terms_) c = -c;
  return p;
}

Poly& Poly::operator+=(const Poly& o) {
  if (!chart_) chart_ = o.chart_;
  for (const auto& [e, c] : o.terms_) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (!chart_) chart_ = o.chart_;
  for (const auto& [e, c] : o.terms_) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, -c);
    } else {
      it->second -= c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }
  return *this;
}

Poly& Poly::operator*=(const Scalar& s) {
  if (sgn(s) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r(a.chart_ ? a.chart_ : b.chart_);
  if (a.terms_.empty() || b.terms_.empty()) return r;
  const std::size_t n = a.terms_.begin()->first.size();
  Exps e(n);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

Poly Poly::pow(unsigned k) const {
  Poly r(chart_, 1);
  Poly base = *this;
  while (k) {
    if (k & 1u) r = r * base;
    k >>= 1u;
    if (k) base = base * base;
  }
  return r;
}

Poly Poly::diff(int v) const {
  Poly r(chart_);
  auto vi = static_cast<std::size_t>(v);
  for (const auto& [e, c] : terms_) {
    if (!e[vi]) continue;
    Exps f = e;
    f[vi] -= 1;
    r.add_term(f, c * e[vi]);
  }
  return r;
}

Poly Poly::apply_derivation(const std::map<int, Poly>& images) const {
  Poly r(chart_);
  for (const auto& [v, img] : images) {
    if (img.is_zero() || !uses_var(v)) continue;
    r += diff(v) * img;
  }
  return r;
}

std::optional<Poly> Poly::divide_exact(const Poly& f) const {
  if (f.is_zero()) throw Error("division by zero polynomial");
  if (f.has_trig()) return std::nullopt;
  Poly q(chart_), rem = *this;
  const auto& [lf, lc] = *f.terms_.rbegin();
  const std::size_t n = lf.size();
  while (!rem.terms_.empty()) {
    const auto [lr, lrc] = *rem.terms_.rbegin();
    Exps t(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (lr[i] < lf[i]) return std::nullopt;
      t[i] = lr[i] - lf[i];
    }
    Scalar c = lrc / lc;
    q.terms_[t] += c;
    for (const auto& [ef, cf] : f.terms_) {
      Exps m(n);
      for (std::size_t i = 0; i < n; ++i) m[i] = t[i] + ef[i];
      auto it = rem.terms_.find(m);
      Scalar d = c * cf;
      if (it == rem.terms_.end()) {
        rem.terms_.emplace(m, -d);
      } else {
        it->second -= d;
        if (sgn(it->second) == 0) rem.terms_.erase(it);
      }
    }
  }
  return q;
}

Scalar Poly::evaluate(const std::vector<Scalar>& values) const {
  Scalar total = 0;
  for (const auto& [e, c] : terms_) {
    Scalar t = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) t *= values[i];
    total += t;
  }
  return total;
}

std::string monomial_str(const Chart& chart, const Exps& e) {
  std::string s;
  for (std::size_t v = 0; v < e.size(); ++v) {
    if (!e[v]) continue;
    if (!s.empty()) s += "*";
    s += chart.var_name(static_cast<int>(v));
    if (e[v] > 1) s += "^" + std::to_string(e[v]);
  }
  return s;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string m = chart_ ? monomial_str(*chart_, e) : std::string();
    Scalar a = abs(c);
    bool neg = sgn(c) < 0;
    std::string body;
    if (m.empty())
      body = a.get_str();
    else if (a == 1)
      body = m;
    else
      body = a.get_str() + "*" + m;
    if (first)
      os << (neg ? "-" : "") << body;
    else
      os << (neg ? " - " : " + ") << body;
    first = false;
  }
  return os.str();
}

}  // namespace lagcoh
