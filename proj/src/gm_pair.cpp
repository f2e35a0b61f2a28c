#include "lagcoh/gm_pair.hpp"

#include <deque>
#include <functional>

#include "lagcoh/errors.hpp"

namespace lagcoh {

namespace {

VectorFieldExpr combination(const GMPair& p, const std::function<Scalar(std::size_t)>& coef) {
  VectorFieldExpr v{p.chart, std::vector<Expr>(p.chart->dim(), Expr(p.chart, 0))};
  for (std::size_t k = 0; k < p.fields.size(); ++k) {
    Scalar c = coef(k);
    if (sgn(c) == 0) continue;
    for (std::size_t mu = 0; mu < v.components.size(); ++mu) v.components[mu] += c * p.fields[k].components[mu];
  }
  return v;
}

}  // namespace

PairReport validate_pair(const GMPair& p) {
  PairReport r;
  const std::size_t n = p.algebra.dim();
  if (p.fields.size() != n) throw ValidationFailure("pair has the wrong number of fields");
  for (const auto& x : p.fields)
    if (x.components.size() != p.chart->dim()) throw ValidationFailure("field has the wrong number of components");
    else
      for (const auto& c : x.components)
        if (!is_velocity_free(c) || c.uses_var(p.chart->tau_var()))
          throw ValidationFailure("field components must be functions on the chart");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      VectorFieldExpr lhs = bracket(p.fields[i], p.fields[j]);
      VectorFieldExpr rhs = combination(p, [&](std::size_t k) { return p.algebra.c(i, j, k); });
      if (!(lhs == rhs)) {
        r.ok = false;
        r.violations.emplace_back(i, j);
      }
    }
  return r;
}

FunctionCochain1 delta0(const GMPair& p, const Expr& f) {
  FunctionCochain1 out;
  for (const auto& x : p.fields) out.push_back(lie_derivative_scalar(x, f));
  return out;
}

FunctionCochain2 delta1(const GMPair& p, const FunctionCochain1& a) {
  FunctionCochain2 out;
  const std::size_t n = p.algebra.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Expr v = lie_derivative_scalar(p.fields[i], a[j]) - lie_derivative_scalar(p.fields[j], a[i]);
      for (std::size_t k = 0; k < n; ++k) {
        Scalar c = p.algebra.c(i, j, k);
        if (sgn(c) != 0) v -= c * a[k];
      }
      out[{i, j}] = v;
    }
  return out;
}

bool is_function_cocycle(const GMPair& p, const FunctionCochain1& a) {
  for (const auto& [k, v] : delta1(p, a))
    if (!v.is_zero()) return false;
  return true;
}

FunctionCochain1 pi_map(const GMPair& p, const OneForm& w) {
  FunctionCochain1 out;
  for (const auto& x : p.fields) {
    Expr v(p.chart, 0);
    for (std::size_t mu = 0; mu < w.components.size(); ++mu)
      if (!w.components[mu].is_zero() && !x.components[mu].is_zero()) v += w.components[mu] * x.components[mu];
    out.push_back(v);
  }
  if (is_closed(w)) {
    if (!is_function_cocycle(p, out)) throw InvariantViolation("pi of a closed form is not a cocycle");
    for (std::size_t i = 0; i < p.fields.size(); ++i)
      if (!(lie_derivative_form(p.fields[i], w) == exterior_derivative(out[i])))
        throw InvariantViolation("L_X w != d(pi w) for a closed form");
  }
  return out;
}

std::optional<Vec> FunctionModule::coordinates(const Expr& f) const {
  std::vector<std::vector<Expr>> cols;
  for (const auto& b : basis) cols.push_back({b});
  cols.push_back({f});
  Mat m = coefficient_matrix(cols);
  return solve(m.block(0, 0, m.rows(), basis.size()), m.column(basis.size()));
}

Cochain FunctionModule::cochain(const FunctionCochain1& a) const {
  Cochain c;
  c.degree = 1;
  c.module_dim = basis.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto v = coordinates(a[i]);
    if (!v) throw Error("cochain component lies outside the function module");
    if (!is_zero(*v)) c.components[{i}] = *v;
  }
  return c;
}

FunctionModule closure_module(const GMPair& p, const std::vector<Expr>& seeds, std::size_t cap) {
  FunctionModule fm;
  fm.chart = p.chart;
  for (const auto& s : seeds)
    if (!is_velocity_free(s)) throw Error("closure_module: seeds must be velocity-free");
  std::vector<std::vector<Expr>> cols;
  std::size_t current_rank = 0;
  std::deque<Expr> queue(seeds.begin(), seeds.end());
  while (!queue.empty()) {
    Expr f = queue.front();
    queue.pop_front();
    if (f.is_zero()) continue;
    cols.push_back({f});
    std::size_t rk = rank(coefficient_matrix(cols));
    if (rk == current_rank) {
      cols.pop_back();
      continue;
    }
    current_rank = rk;
    fm.basis.push_back(f);
    if (fm.basis.size() > cap)
      throw CapExceeded("closure_module: action does not close within " + std::to_string(cap) +
                            " dimensions (last new element " + f.str() + ")",
                        fm.basis.size());
    for (const auto& x : p.fields) queue.push_back(lie_derivative_scalar(x, f));
  }
  const std::size_t m = fm.basis.size();
  fm.module.dim = m;
  for (const auto& b : fm.basis) fm.module.basis_labels.push_back(b.str());
  for (const auto& x : p.fields) {
    Mat rho(m, m);
    for (std::size_t j = 0; j < m; ++j) {
      auto v = fm.coordinates(lie_derivative_scalar(x, fm.basis[j]));
      if (!v) throw InvariantViolation("closure_module: basis is not closed");
      for (std::size_t i = 0; i < m; ++i) rho(i, j) = (*v)[i];
    }
    fm.module.rho.push_back(std::move(rho));
  }
  if (!validate_module(p.algebra, fm.module).ok) throw InvariantViolation("closure_module: module axiom fails");
  return fm;
}

namespace {

AnsatzSpec resolve(AnsatzSpec a) {
  if (a.degree < 0) a.degree = 3;
  if (a.fourier < 0) a.fourier = 3;
  return a;
}

std::vector<Expr> ansatz_functions(const GMPair& p, AnsatzSpec a) {
  std::vector<Expr> out;
  for (auto& b : ansatz_basis(p.chart, a.degree, a.fourier)) out.emplace_back(std::move(b));
  return out;
}

Expr combine(const std::vector<Expr>& basis, const Vec& coef, std::size_t offset, const ChartPtr& chart) {
  Expr e(chart, 0);
  for (std::size_t j = 0; j < basis.size(); ++j)
    if (sgn(coef[offset + j]) != 0) e += coef[offset + j] * basis[j];
  return e;
}

}  // namespace

std::vector<Expr> invariant_functions(const GMPair& p, AnsatzSpec ansatz) {
  auto basis = ansatz_functions(p, resolve(ansatz));
  std::vector<std::vector<Expr>> cols;
  for (const auto& b : basis) cols.push_back(delta0(p, b));
  Subspace k = kernel_basis(coefficient_matrix(cols));
  std::vector<Expr> out;
  for (const auto& v : k.basis) out.push_back(combine(basis, v, 0, p.chart));
  return out;
}

InvariantForms invariant_closed_forms(const GMPair& p, AnsatzSpec ansatz) {
  const ChartPtr& ch = p.chart;
  const std::size_t n = p.algebra.dim();
  auto angles = ch->angle_coords();
  auto basis = ansatz_functions(p, resolve(ansatz));
  // unknowns (c_j, h, kappa): sum_j c_j pi(d phi_j)_i + X_i h - kappa_i = 0
  std::vector<std::vector<Expr>> cols;
  for (auto mu : angles) {
    OneForm dphi = zero_form(ch);
    dphi.components[mu] = Expr(ch, 1);
    cols.push_back(pi_map(p, dphi));
  }
  for (const auto& b : basis) cols.push_back(delta0(p, b));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Expr> e(n, Expr(ch, 0));
    e[i] = Expr(ch, -1);
    cols.push_back(e);
  }
  Subspace s = kernel_basis(coefficient_matrix(cols));
  InvariantForms out;
  std::vector<Vec> harmonic;
  std::vector<OneForm> forms;
  for (const auto& v : s.basis) {
    OneForm w = exterior_derivative(combine(basis, v, angles.size(), ch));
    Vec c(angles.size());
    for (std::size_t j = 0; j < angles.size(); ++j) {
      c[j] = v[j];
      w.components[angles[j]] += Expr(ch, v[j]);
    }
    harmonic.push_back(c);
    forms.push_back(w);
  }
  out.harmonic_image = span_of(angles.size(), harmonic);
  for (const auto& w : forms) {
    if (!is_closed(w)) throw InvariantViolation("invariant_closed_forms: produced a non-closed form");
    for (const auto& x : p.fields)
      for (const auto& c : lie_derivative_form(x, w).components)
        if (!c.is_zero()) throw InvariantViolation("invariant_closed_forms: produced a non-invariant form");
  }
  // quotient by differentials of invariant functions, in a shared coordinate space
  std::vector<OneForm> exact;
  for (const auto& f : invariant_functions(p, ansatz)) exact.push_back(exterior_derivative(f));
  std::vector<std::vector<Expr>> all;
  for (const auto& w : forms) all.push_back(w.components);
  for (const auto& w : exact) all.push_back(w.components);
  Mat m = coefficient_matrix(all);
  std::vector<Vec> zc, bc;
  for (std::size_t j = 0; j < forms.size(); ++j) zc.push_back(m.column(j));
  for (std::size_t j = 0; j < exact.size(); ++j) bc.push_back(m.column(forms.size() + j));
  Subspace z = span_of(m.rows(), zc);
  Subspace b = span_of(m.rows(), bc);
  // keep only independent forms as the basis
  {
    std::vector<Vec> seen;
    for (std::size_t j = 0; j < forms.size(); ++j) {
      auto cand = seen;
      cand.push_back(zc[j]);
      if (span_of(m.rows(), cand).dim() > seen.size()) {
        seen.push_back(zc[j]);
        out.closed_invariant.push_back(forms[j]);
      }
    }
  }
  out.h1_inv = quotient(z, b);
  for (const auto& rep : out.h1_inv.representatives())
    for (std::size_t j = 0; j < forms.size(); ++j)
      if (zc[j] == rep) {
        out.h1_inv_representatives.push_back(forms[j]);
        break;
      }
  return out;
}

std::vector<Vec> stability_basis_at(const GMPair& p, const Point& point) {
  const std::size_t n = p.algebra.dim();
  auto assign = point_assignment(*p.chart, point);
  if (p.stabilizer) {
    Vec s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = evaluate((*p.stabilizer)[i], assign);
    return {s};
  }
  return stability_subalgebra(p, point).basis;
}

Subspace stability_subalgebra(const GMPair& p, const Point& point) {
  const std::size_t n = p.algebra.dim(), d = p.chart->dim();
  auto assign = point_assignment(*p.chart, point);
  Mat e(d, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t mu = 0; mu < d; ++mu) e(mu, i) = evaluate(p.fields[i].components[mu], assign);
  return kernel_basis(e);
}

Vec restrict_values(const GMPair& p, const std::vector<Vec>& stab, const FunctionCochain1& alpha, const Point& point) {
  auto assign = point_assignment(*p.chart, point);
  Vec vals(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) vals[i] = evaluate(alpha[i], assign);
  Vec out;
  for (const auto& s : stab) {
    Scalar v = 0;
    for (std::size_t i = 0; i < s.size(); ++i) v += s[i] * vals[i];
    out.push_back(v);
  }
  return out;
}

Restriction restrict_cocycle(const GMPair& p, const FunctionCochain1& alpha, const Point& point,
                             const std::vector<Point>& extra_points) {
  if (!is_function_cocycle(p, alpha)) throw NotACocycle("restrict_cocycle: alpha is not a cocycle");
  Restriction r;
  r.stability_basis = stability_basis_at(p, point);
  if (p.stabilizer) {
    const std::size_t d = p.chart->dim();
    auto assign = point_assignment(*p.chart, point);
    for (std::size_t mu = 0; mu < d; ++mu) {
      Scalar v = 0;
      for (std::size_t i = 0; i < p.fields.size(); ++i)
        v += r.stability_basis[0][i] * evaluate(p.fields[i].components[mu], assign);
      if (sgn(v) != 0) throw ValidationFailure("stabilizer section does not annihilate the fields");
    }
  }
  r.values = restrict_values(p, r.stability_basis, alpha, point);
  if (p.transitive && p.stabilizer)
    for (const auto& q : extra_points)
      if (restrict_values(p, stability_basis_at(p, q), alpha, q) != r.values)
        throw InvariantViolation("restriction value is not constant on a transitive pair");
  return r;
}

}  // namespace lagcoh
