#include "lagcoh/lie_algebra.hpp"

#include "lagcoh/errors.hpp"

namespace lagcoh {

StructureConstants::StructureConstants(std::vector<std::string> basis_names) : names_(std::move(basis_names)) {
  for (std::size_t i = 0; i < names_.size(); ++i)
    for (std::size_t j = i + 1; j < names_.size(); ++j)
      if (names_[i] == names_[j]) throw Error("duplicate basis name '" + names_[i] + "'");
}

std::optional<std::size_t> StructureConstants::find(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

Scalar StructureConstants::c(std::size_t i, std::size_t j, std::size_t k) const {
  if (i == j) return 0;
  bool flip = i > j;
  auto it = c_.find(flip ? std::make_tuple(j, i, k) : std::make_tuple(i, j, k));
  if (it == c_.end()) return 0;
  return flip ? Scalar(-it->second) : it->second;
}

void StructureConstants::set(std::size_t i, std::size_t j, std::size_t k, const Scalar& value) {
  const std::size_t n = dim();
  if (i >= n || j >= n || k >= n) throw Error("structure constant index out of range");
  if (i == j) {
    if (sgn(value) != 0) throw Error("[e_i, e_i] must vanish");
    return;
  }
  Scalar v = i < j ? value : Scalar(-value);
  auto key = i < j ? std::make_tuple(i, j, k) : std::make_tuple(j, i, k);
  if (sgn(v) == 0)
    c_.erase(key);
  else
    c_[key] = v;
}

JacobiReport jacobi_check(const StructureConstants& g) {
  JacobiReport r;
  const std::size_t n = g.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          Scalar s = 0;
          for (std::size_t m = 0; m < n; ++m)
            s += g.c(i, j, m) * g.c(m, k, l) + g.c(j, k, m) * g.c(m, i, l) + g.c(k, i, m) * g.c(m, j, l);
          if (sgn(s) != 0) {
            r.ok = false;
            r.violations.push_back({i, j, k, l});
          }
        }
  return r;
}

Vec bracket(const StructureConstants& g, const Vec& x, const Vec& y) {
  const std::size_t n = g.dim();
  if (x.size() != n || y.size() != n) throw Error("bracket: vector length mismatch");
  Vec r(n);
  for (const auto& [key, v] : g.entries()) {
    auto [i, j, k] = key;
    r[k] += v * (x[i] * y[j] - x[j] * y[i]);
  }
  return r;
}

StructureConstants derive_structure_constants(const std::vector<std::string>& names,
                                              const std::vector<VectorFieldExpr>& fields) {
  const std::size_t n = fields.size();
  if (names.size() != n) throw Error("derive_structure_constants: name/field count mismatch");
  StructureConstants g(names);
  if (n == 0) return g;
  std::vector<std::vector<Expr>> cols;
  for (const auto& x : fields) cols.push_back(x.components);
  if (rank(coefficient_matrix(cols)) != n) throw ValidationFailure("fundamental fields are linearly dependent");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      auto with_b = cols;
      with_b.push_back(bracket(fields[i], fields[j]).components);
      Mat m = coefficient_matrix(with_b);
      auto x = solve(m.block(0, 0, m.rows(), n), m.column(n));
      if (!x)
        throw ValidationFailure("bracket [" + names[i] + ", " + names[j] + "] is not in the span of the fields");
      for (std::size_t k = 0; k < n; ++k) g.set(i, j, k, (*x)[k]);
    }
  return g;
}

ChartPtr spacetime_chart() {
  return make_chart({{"t", CoordKind::Line}, {"x1", CoordKind::Line}, {"x2", CoordKind::Line}, {"x3", CoordKind::Line}});
}

std::vector<std::string> spacetime_basis_names() { return {"p0", "p1", "p2", "p3", "B1", "B2", "B3", "L1", "L2", "L3"}; }

std::vector<VectorFieldExpr> spacetime_fields(const ChartPtr& ch, const std::optional<Scalar>& c) {
  auto zero = [&] { return VectorFieldExpr{ch, std::vector<Expr>(4, Expr(ch, 0))}; };
  std::vector<VectorFieldExpr> out;
  auto p0 = zero();
  p0.components[0] = Expr(ch, 1);
  out.push_back(p0);
  for (std::size_t i = 1; i <= 3; ++i) {
    auto p = zero();
    p.components[i] = Expr(ch, 1);
    out.push_back(p);
  }
  for (std::size_t i = 1; i <= 3; ++i) {
    auto b = zero();
    b.components[i] = coord_expr(ch, 0);
    if (c) b.components[0] = (1 / ((*c) * (*c))) * coord_expr(ch, i);
    out.push_back(b);
  }
  // L_i = -eps_ijk x^j d/dx^k
  for (std::size_t i = 1; i <= 3; ++i) {
    auto l = zero();
    std::size_t j = i % 3 + 1, k = j % 3 + 1;  // (i, j, k) cyclic
    l.components[k] = -coord_expr(ch, j);
    l.components[j] = coord_expr(ch, k);
    out.push_back(l);
  }
  return out;
}

namespace {

StructureConstants poincare(const Scalar& c) {
  auto ch = spacetime_chart();
  return derive_structure_constants(spacetime_basis_names(), spacetime_fields(ch, c));
}

StructureConstants galilean() {
  // Contraction: drop every constant that changes with c.
  StructureConstants a = poincare(1), b = poincare(2);
  StructureConstants g(spacetime_basis_names());
  const std::size_t n = g.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (a.c(i, j, k) == b.c(i, j, k)) g.set(i, j, k, a.c(i, j, k));
  auto direct = derive_structure_constants(spacetime_basis_names(), spacetime_fields(spacetime_chart(), std::nullopt));
  if (!(direct == g)) throw InvariantViolation("galilean contraction disagrees with the galilean fields");
  return g;
}

}  // namespace

StructureConstants catalog(const std::string& name, const CatalogParams& params) {
  if (name == "abelian") {
    if (!params.n || *params.n == 0) throw BadParams("abelian needs a positive dimension n");
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= *params.n; ++i) names.push_back("e" + std::to_string(i));
    return StructureConstants(names);
  }
  if (name == "l3") {
    StructureConstants g({"e1", "e2", "e3"});
    g.set(0, 1, 2, 1);
    return g;
  }
  if (name == "so3") {
    StructureConstants g({"e1", "e2", "e3"});
    g.set(0, 1, 2, 1);
    g.set(1, 2, 0, 1);
    g.set(2, 0, 1, 1);
    return g;
  }
  if (name == "poincare") {
    if (!params.c || sgn(*params.c) <= 0) throw BadParams("poincare needs a positive rational c");
    return poincare(*params.c);
  }
  if (name == "galilean") return galilean();
  throw UnknownName("unknown algebra '" + name + "'");
}

}  // namespace lagcoh
