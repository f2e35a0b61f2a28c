#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lagcoh/exact_linalg.hpp"

namespace lagcoh {

enum class CoordKind { Line, Angle };

struct Coord {
  std::string name;
  CoordKind kind = CoordKind::Line;
  bool operator==(const Coord&) const = default;
};

// Coordinates of a chart R^a x T^b together with the polynomial variables
// they induce.  Variable order: for each coordinate either its position
// (line) or sin, cos (angle); then all velocities; then all accelerations;
// then the time symbol tau.
class Chart {
 public:
  explicit Chart(std::vector<Coord> coords);

  const std::vector<Coord>& coords() const { return coords_; }
  std::size_t dim() const { return coords_.size(); }
  std::size_t nvars() const { return names_.size(); }

  bool is_angle(std::size_t mu) const { return coords_[mu].kind == CoordKind::Angle; }
  int pos_var(std::size_t mu) const { return pos_[mu]; }
  int sin_var(std::size_t mu) const { return sin_[mu]; }
  int cos_var(std::size_t mu) const { return cos_[mu]; }
  int vel_var(std::size_t mu) const { return vel_[mu]; }
  int acc_var(std::size_t mu) const { return acc_[mu]; }
  int tau_var() const { return tau_; }

  const std::string& var_name(int v) const { return names_[static_cast<std::size_t>(v)]; }
  std::optional<int> find_var(const std::string& name) const;
  std::optional<std::size_t> find_coord(const std::string& name) const;

  std::vector<std::size_t> angle_coords() const;
  std::vector<std::size_t> line_coords() const;
  // Pairs (sin var, cos var) of every angle coordinate.
  const std::vector<std::pair<int, int>>& trig_pairs() const { return trig_; }
  bool is_trig_var(int v) const;
  bool is_position_var(int v) const;
  bool is_velocity_var(int v) const;
  bool is_acceleration_var(int v) const;

  bool operator==(const Chart& o) const { return coords_ == o.coords_; }

 private:
  std::vector<Coord> coords_;
  std::vector<std::string> names_;
  std::vector<int> pos_, sin_, cos_, vel_, acc_;
  int tau_ = -1;
  std::vector<std::pair<int, int>> trig_;
  std::vector<char> kind_;  // per variable: 'p','s','c','v','a','t'
};

using ChartPtr = std::shared_ptr<const Chart>;
ChartPtr make_chart(std::vector<Coord> coords);

using Exps = std::vector<int>;

// Polynomial over the rationals in the chart variables, kept in the normal
// form of Q[...]/(sin^2 + cos^2 - 1): every sin exponent is 0 or 1.
class Poly {
 public:
  using Terms = std::map<Exps, Scalar>;

  Poly() = default;
  explicit Poly(ChartPtr chart) : chart_(std::move(chart)) {}
  Poly(ChartPtr chart, const Scalar& c);
  static Poly variable(ChartPtr chart, int v);

  const ChartPtr& chart() const { return chart_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Scalar constant_term() const;
  Scalar leading_coefficient() const;
  Poly monic() const;
  bool uses_var(int v) const;
  bool uses_any(const std::vector<int>& vars) const;
  bool has_trig() const;

  // Adds c * monomial, reducing the monomial into normal form first.
  void add_term(const Exps& e, const Scalar& c);

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Scalar& s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Scalar& s) { return a *= s; }
  Poly pow(unsigned k) const;

  // Formal derivative with respect to one variable (no chain rule).
  Poly diff(int v) const;
  // Derivation sending variable v to images[v] (absent entries map to 0).
  Poly apply_derivation(const std::map<int, Poly>& images) const;

  // Exact quotient by f if f divides this polynomial; only attempted for
  // trig-free f.
  std::optional<Poly> divide_exact(const Poly& f) const;

  Scalar evaluate(const std::vector<Scalar>& values) const;

  std::string str() const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
  friend bool operator<(const Poly& a, const Poly& b) { return a.terms_ < b.terms_; }

 private:
  ChartPtr chart_;
  Terms terms_;
};

std::string monomial_str(const Chart& chart, const Exps& e);

}  // namespace lagcoh
