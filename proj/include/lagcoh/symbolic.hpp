#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lagcoh/poly.hpp"

namespace lagcoh {

// Fraction N / (f_1^e_1 ... f_k^e_k) with monic, pairwise distinct
// denominator factors that do not divide N.  Equality is decided exactly by
// clearing denominators.
class Expr {
 public:
  using Factors = std::vector<std::pair<Poly, int>>;

  Expr() = default;
  Expr(ChartPtr chart, const Scalar& c);
  explicit Expr(Poly numerator);
  static Expr variable(ChartPtr chart, int v);
  static Expr fraction(Poly numerator, Factors denominator);

  const ChartPtr& chart() const { return num_.chart(); }
  const Poly& numerator() const { return num_; }
  const Factors& denominator() const { return den_; }
  Poly denominator_poly() const;

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.empty(); }
  std::optional<Scalar> constant_value() const;
  bool uses_var(int v) const;

  Expr operator-() const;
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator*(const Scalar& s, const Expr& a);
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }
  Expr inverse() const;
  Expr pow(int k) const;

  friend bool operator==(const Expr& a, const Expr& b) { return (a - b).is_zero(); }

  std::string str() const;

 private:
  void normalize();
  Poly num_;
  Factors den_;
};

// Least common multiple of the denominators of all expressions, with each
// expression rewritten over it.
struct CommonDenominator {
  Expr::Factors factors;
  std::vector<Poly> numerators;
};
CommonDenominator over_common_denominator(const std::vector<Expr>& exprs);

// Applies the derivation v -> images[v] to an expression (quotient rule).
Expr apply_derivation(const Expr& e, const std::map<int, Poly>& images);

Expr parse_expr(const ChartPtr& chart, const std::string& text);

// Partial derivative by name: a coordinate, velocity d<c>, acceleration
// dd<c>, or tau.  Angle coordinates act through sin/cos by the chain rule.
Expr partial(const Expr& e, const std::string& generator);
Expr partial_coord(const Expr& e, std::size_t mu);
Expr partial_velocity(const Expr& e, std::size_t mu);
Expr partial_acceleration(const Expr& e, std::size_t mu);
Expr total_time_derivative(const Expr& e);

bool is_velocity_free(const Expr& e);
bool has_accelerations(const Expr& e);

Expr coord_expr(const ChartPtr& chart, std::size_t mu);     // line position
Expr velocity_expr(const ChartPtr& chart, std::size_t mu);
Expr acceleration_expr(const ChartPtr& chart, std::size_t mu);
Expr tau_expr(const ChartPtr& chart);

struct OneForm {
  ChartPtr chart;
  std::vector<Expr> components;
};

struct VectorFieldExpr {
  ChartPtr chart;
  std::vector<Expr> components;
};

struct ELForm {
  ChartPtr chart;
  std::vector<Expr> components;
};

OneForm zero_form(const ChartPtr& chart);
OneForm operator+(const OneForm& a, const OneForm& b);
OneForm operator-(const OneForm& a, const OneForm& b);
OneForm operator*(const Scalar& s, const OneForm& a);
bool operator==(const OneForm& a, const OneForm& b);
std::string str(const OneForm& w);

// The rank-1 Lagrangian w_mu dq^mu attached to a 1-form.
Expr form_to_lagrangian(const OneForm& w);
OneForm exterior_derivative(const Expr& f);
// Components (mu < nu) of dw.
std::map<std::pair<std::size_t, std::size_t>, Expr> exterior_derivative(const OneForm& w);

Expr lie_derivative_scalar(const VectorFieldExpr& x, const Expr& f);
Expr lie_derivative_lagrangian(const VectorFieldExpr& x, const Expr& L);
OneForm lie_derivative_form(const VectorFieldExpr& x, const OneForm& w);
VectorFieldExpr bracket(const VectorFieldExpr& x, const VectorFieldExpr& y);
bool operator==(const VectorFieldExpr& a, const VectorFieldExpr& b);

ELForm euler_lagrange(const Expr& L);
bool is_closed(const OneForm& w);

struct AnsatzSpec {
  int degree = -1;   // total degree in line coordinates; -1 = default
  int fourier = -1;  // per-angle Fourier order; -1 = default
};

int line_degree(const Expr& e);
int fourier_order(const Expr& e);

// Functions spanned by line monomials of total degree <= degree times
// trig products of per-angle order <= fourier.
std::vector<Poly> ansatz_basis(const ChartPtr& chart, int degree, int fourier);

struct DeRhamSplit {
  std::map<std::size_t, Scalar> harmonic;  // angle coordinate -> c_j
  Expr potential;
};

DeRhamSplit derham_split(const OneForm& w, AnsatzSpec ansatz = {});
std::optional<Expr> find_potential(const OneForm& w, AnsatzSpec ansatz = {});
// Mean over all angles (requires angle-free denominators).
Expr angle_average(const Expr& e);

// A chart point: line coordinates carry a value, angle coordinates an exact
// (sin, cos) pair on the unit circle.
struct CoordValue {
  Scalar value;
  Scalar sin, cos;
};
using Point = std::vector<CoordValue>;

std::vector<Scalar> point_assignment(const Chart& chart, const Point& p);
Scalar evaluate(const Expr& e, const std::vector<Scalar>& assignment);
Scalar evaluate_at(const Expr& e, const Point& p);
std::string point_str(const Chart& chart, const Point& p);

// Linear-algebra view of a family of expressions: coordinates of the
// numerators over the common denominator in a shared monomial basis.
struct LinearView {
  std::vector<Exps> monomials;
  Mat matrix;  // rows = monomials, columns = expressions
};
LinearView linear_view(const std::vector<Poly>& polys);

// Coefficient matrix of a family of vector-valued expressions.  columns[j][k]
// is component k of vector j; each component is put over the common
// denominator of that component across all columns, and rows are indexed by
// (component, numerator monomial).  A linear relation among the columns holds
// as an Expr identity iff it holds for this matrix.
Mat coefficient_matrix(const std::vector<std::vector<Expr>>& columns);

}  // namespace lagcoh
