#include "lagcoh/hierarchy.hpp"

#include <algorithm>
#include <functional>

namespace lagcoh {

namespace {

using TwoForm = std::map<std::pair<std::size_t, std::size_t>, Expr>;

Subspace z1_trivial(const StructureConstants& g) {
  return kernel_basis(ce_differential(g, trivial_module(g), 1));
}

bool in_z1(const StructureConstants& g, const Vec& t) {
  Mat d = ce_differential(g, trivial_module(g), 1);
  return d.rows() == 0 || is_zero(d * t);
}

FunctionCochain1 constants(const ChartPtr& ch, const Vec& t) {
  FunctionCochain1 out;
  for (const auto& x : t) out.emplace_back(ch, x);
  return out;
}

std::vector<Expr> ansatz_exprs(const ChartPtr& ch, int degree, int fourier) {
  std::vector<Expr> out;
  for (auto& b : ansatz_basis(ch, degree, fourier)) out.emplace_back(std::move(b));
  return out;
}

OneForm harmonic_form(const ChartPtr& ch, const Vec& c) {
  OneForm w = zero_form(ch);
  auto angles = ch->angle_coords();
  for (std::size_t j = 0; j < angles.size(); ++j) w.components[angles[j]] = Expr(ch, c[j]);
  return w;
}

std::string harmonic_str(const ChartPtr& ch, const Vec& c) {
  auto angles = ch->angle_coords();
  std::string s;
  for (std::size_t j = 0; j < angles.size(); ++j) {
    if (sgn(c[j]) == 0) continue;
    std::string name = "[d" + ch->coords()[angles[j]].name + "]";
    Scalar a = abs(c[j]);
    std::string term = a == 1 ? name : a.get_str() + "*" + name;
    if (s.empty())
      s = (sgn(c[j]) < 0 ? "-" : "") + term;
    else
      s += (sgn(c[j]) < 0 ? " - " : " + ") + term;
  }
  return s.empty() ? "0" : s;
}

TwoForm lie_derivative_two_form(const VectorFieldExpr& x, const TwoForm& w, std::size_t d) {
  auto get = [&](std::size_t a, std::size_t b) -> Expr {
    if (a == b) return Expr(x.chart, 0);
    if (a < b) return w.at({a, b});
    return -w.at({b, a});
  };
  TwoForm out;
  for (std::size_t mu = 0; mu < d; ++mu)
    for (std::size_t nu = mu + 1; nu < d; ++nu) {
      Expr v = lie_derivative_scalar(x, w.at({mu, nu}));
      for (std::size_t rho = 0; rho < d; ++rho) {
        Expr a = get(rho, nu), b = get(mu, rho);
        if (!a.is_zero()) v += a * partial_coord(x.components[rho], mu);
        if (!b.is_zero()) v += b * partial_coord(x.components[rho], nu);
      }
      out[{mu, nu}] = v;
    }
  return out;
}

std::vector<Expr> flatten(const TwoForm& w) {
  std::vector<Expr> v;
  for (const auto& [k, e] : w) v.push_back(e);
  return v;
}

}  // namespace

std::string to_string(ClassState s) {
  switch (s) {
    case ClassState::Zero: return "zero";
    case ClassState::NonZero: return "nonzero";
    case ClassState::NotReached: return "not-reached";
  }
  return "?";
}

WeakInvarianceSplit weak_invariance_split(const GMPair& p, const Expr& L) {
  if (has_accelerations(L)) throw Error("Lagrangian must not contain accelerations");
  if (L.uses_var(p.chart->tau_var())) throw Error("Lagrangian must not depend on tau");
  WeakInvarianceSplit s;
  const std::size_t n = p.algebra.dim();
  for (std::size_t i = 0; i < n; ++i) {
    Expr d = lie_derivative_lagrangian(p.fields[i], L);
    const std::string& name = p.algebra.basis_names()[i];
    OneForm w{p.chart, {}};
    for (std::size_t mu = 0; mu < p.chart->dim(); ++mu) {
      Expr c = partial_velocity(d, mu);
      if (!is_velocity_free(c)) throw NotWeaklyInvariant(i, name, d.str());
      w.components.push_back(c);
    }
    Expr rest = d - form_to_lagrangian(w);
    auto t = rest.constant_value();
    if (!t) throw NotWeaklyInvariant(i, name, d.str());
    if (!is_closed(w)) throw NotWeaklyInvariant(i, name, d.str());
    s.w.push_back(std::move(w));
    s.t.push_back(*t);
  }
  if (!in_z1(p.algebra, s.t)) throw InvariantViolation("weak invariance split: t is not a 1-cocycle");
  return s;
}

Vec psi(const GMPair& p, const WeakInvarianceSplit& s) {
  if (!in_z1(p.algebra, s.t)) throw InvariantViolation("psi: t is not a 1-cocycle");
  return s.t;
}

Phi1Result phi1(const GMPair& p, const WeakInvarianceSplit& s, AnsatzSpec ansatz) {
  Phi1Result r;
  const std::size_t n = p.algebra.dim();
  auto angles = p.chart->angle_coords();
  r.harmonic = Mat(n, angles.size());
  for (std::size_t i = 0; i < n; ++i) {
    DeRhamSplit d;
    try {
      d = derham_split(s.w[i], ansatz);
    } catch (const AnsatzExhausted& e) {
      throw Undetermined(1, std::string("phi1: ") + e.what());
    }
    for (std::size_t j = 0; j < angles.size(); ++j) r.harmonic(i, j) = d.harmonic[angles[j]];
    r.potentials.push_back(d.potential);
  }
  for (std::size_t j = 0; j < angles.size(); ++j)
    if (!in_z1(p.algebra, r.harmonic.column(j))) throw InvariantViolation("phi1: harmonic column is not a cocycle");
  r.state = r.harmonic.is_zero() ? ClassState::Zero : ClassState::NonZero;
  return r;
}

Phi2Result phi2(const GMPair& p, const FunctionCochain1& alpha) {
  Phi2Result r;
  const StructureConstants& g = p.algebra;
  const std::size_t n = g.dim();
  GModule triv = trivial_module(g);
  r.f.degree = 2;
  r.f.module_dim = 1;
  for (const auto& [ij, v] : delta1(p, alpha)) {
    auto c = v.constant_value();
    if (!c) throw InvariantViolation("phi2: (delta alpha)_ij is not constant");
    if (sgn(*c) != 0) r.f.components[{ij.first, ij.second}] = Vec{*c};
  }
  if (!is_cocycle(g, triv, r.f)) throw InvariantViolation("phi2: delta f != 0");
  if (r.f.components.empty()) {
    r.state = ClassState::Zero;
    r.t_prime = Vec(n);
  } else if (auto b = coboundary_witness(g, triv, r.f)) {
    r.state = ClassState::Zero;
    r.t_prime = to_coordinates(*b, n);
  } else {
    r.state = ClassState::NonZero;
    return r;
  }
  for (std::size_t i = 0; i < n; ++i) r.alpha_adjusted.push_back(alpha[i] - Expr(p.chart, (*r.t_prime)[i]));
  if (!is_function_cocycle(p, r.alpha_adjusted)) throw InvariantViolation("phi2: adjusted alpha is not a cocycle");
  return r;
}

Phi3Result phi3(const GMPair& p, const FunctionCochain1& alpha, const std::vector<Point>& points, AnsatzSpec ansatz) {
  Phi3Result r;
  const ChartPtr& ch = p.chart;
  const std::size_t n = p.algebra.dim();
  auto angles = ch->angle_coords();
  if (!is_function_cocycle(p, alpha)) throw InvariantViolation("phi3: alpha is not a cocycle");
  Subspace z1 = z1_trivial(p.algebra);
  // ansatz for g: numerator degree bound over the common denominator of alpha
  CommonDenominator cd = over_common_denominator(alpha);
  int deg = ansatz.degree, four = ansatz.fourier;
  if (deg < 0 || four < 0) {
    int md = 0, mf = 0;
    for (const auto& num : cd.numerators) {
      if (num.is_zero()) continue;
      md = std::max(md, line_degree(Expr(num)));
      mf = std::max(mf, fourier_order(Expr(num)));
    }
    if (deg < 0) deg = md + 1;
    if (four < 0) four = mf;
  }
  Expr inv_den = Expr::fraction(Poly(ch, 1), cd.factors);
  std::vector<Expr> gbasis;
  for (auto& b : ansatz_exprs(ch, deg, four)) gbasis.push_back(b * inv_den);
  // Coboundary columns first: the particular solution then leaves c and t''
  // at zero whenever delta g alone accounts for alpha.
  std::vector<std::vector<Expr>> cols;
  for (const auto& b : gbasis) cols.push_back(delta0(p, b));
  for (auto mu : angles) {
    OneForm dphi = zero_form(ch);
    dphi.components[mu] = Expr(ch, 1);
    cols.push_back(pi_map(p, dphi));
  }
  for (const auto& z : z1.basis) cols.push_back(constants(ch, z));
  cols.push_back(alpha);
  Mat m = coefficient_matrix(cols);
  const std::size_t nu = cols.size() - 1, ng = gbasis.size();
  auto x = solve(m.block(0, 0, m.rows(), nu), m.column(nu));
  if (x) {
    K3Witness w;
    w.g = Expr(ch, 0);
    for (std::size_t k = 0; k < ng; ++k) {
      const Scalar& c = (*x)[k];
      if (sgn(c) != 0) w.g += c * gbasis[k];
    }
    w.c = Vec(angles.size());
    for (std::size_t j = 0; j < angles.size(); ++j) w.c[j] = (*x)[ng + j];
    w.t2 = Vec(n);
    for (std::size_t k = 0; k < z1.dim(); ++k) w.t2 = w.t2 + (*x)[ng + angles.size() + k] * z1.basis[k];
    auto pw = pi_map(p, harmonic_form(ch, w.c));
    auto dg = delta0(p, w.g);
    for (std::size_t i = 0; i < n; ++i)
      if (!(alpha[i] == pw[i] + Expr(ch, w.t2[i]) + dg[i])) throw InvariantViolation("phi3: witness check failed");
    r.state = ClassState::Zero;
    r.witness = std::move(w);
    return r;
  }
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Point& pt = points[k];
    std::vector<Vec> stab;
    Vec v;
    std::vector<Vec> tvals;
    try {
      stab = stability_basis_at(p, pt);
      if (stab.empty()) continue;
      v = restrict_values(p, stab, alpha, pt);
      for (const auto& z : z1.basis) tvals.push_back(restrict_values(p, stab, constants(ch, z), pt));
    } catch (const EvaluationPole&) {
      continue;
    }
    if (contains(span_of(stab.size(), tvals), Subspace{stab.size(), {v}}) || is_zero(v)) continue;
    std::vector<Point> others;
    for (std::size_t l = 0; l < points.size(); ++l)
      if (l != k) others.push_back(points[l]);
    if (p.transitive && p.stabilizer) restrict_cocycle(p, alpha, pt, others);
    r.state = ClassState::NonZero;
    r.certificate = K3Certificate{pt, stab, v};
    return r;
  }
  throw Undetermined(3, "phi3: no witness within the ansatz and no restriction certificate");
}

Phi4Result phi4(const GMPair& p, const Expr& L, const WeakInvarianceSplit& s, const K3Witness& witness,
                AnsatzSpec ansatz) {
  Phi4Result r;
  const ChartPtr& ch = p.chart;
  const std::size_t n = p.algebra.dim();
  auto angles = ch->angle_coords();
  AnsatzSpec a = ansatz;
  if (a.degree < 0) a.degree = std::max(3, line_degree(witness.g) + 1);
  if (a.fourier < 0) a.fourier = std::max(3, fourier_order(witness.g));
  InvariantForms inv = invariant_closed_forms(p, a);
  QuotientSpace k4 = quotient(Subspace{angles.size(), [&] {
                                std::vector<Vec> e;
                                for (std::size_t j = 0; j < angles.size(); ++j) {
                                  Vec v(angles.size());
                                  v[j] = 1;
                                  e.push_back(v);
                                }
                                return e;
                              }()},
                              inv.harmonic_image);
  r.class_coords = k4.reduce(witness.c);
  Vec reduced(angles.size());
  for (std::size_t k = 0; k < k4.dim(); ++k) reduced = reduced + r.class_coords[k] * k4.representatives()[k];
  if (!is_zero(r.class_coords)) {
    r.state = ClassState::NonZero;
    r.class_repr = harmonic_str(ch, reduced);
    return r;
  }
  r.state = ClassState::Zero;
  r.class_repr = "0";
  // h with c pi(dphi) + delta h = kappa constant
  auto pw = pi_map(p, harmonic_form(ch, witness.c));
  auto hbasis = ansatz_exprs(ch, a.degree, a.fourier);
  std::vector<std::vector<Expr>> cols;
  for (const auto& b : hbasis) cols.push_back(delta0(p, b));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Expr> e(n, Expr(ch, 0));
    e[i] = Expr(ch, -1);
    cols.push_back(e);
  }
  std::vector<Expr> rhs;
  for (const auto& x : pw) rhs.push_back(-x);
  cols.push_back(rhs);
  Mat m = coefficient_matrix(cols);
  const std::size_t nu = cols.size() - 1;
  auto x = solve(m.block(0, 0, m.rows(), nu), m.column(nu));
  if (!x) throw Undetermined(4, "phi4: invariant completion of the harmonic part not found");
  Expr h(ch, 0);
  for (std::size_t k = 0; k < hbasis.size(); ++k)
    if (sgn((*x)[k]) != 0) h += (*x)[k] * hbasis[k];
  Decomposition d;
  d.w_inv = harmonic_form(ch, witness.c) + exterior_derivative(h);
  d.f = witness.g - h;
  d.l_inv = L - form_to_lagrangian(d.w_inv) - total_time_derivative(d.f);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(lie_derivative_lagrangian(p.fields[i], d.l_inv) == Expr(ch, s.t[i])))
      throw InvariantViolation("phi4: decomposition check failed for L_inv");
    for (const auto& c : lie_derivative_form(p.fields[i], d.w_inv).components)
      if (!c.is_zero()) throw InvariantViolation("phi4: w_inv is not invariant");
  }
  r.decomposition = std::move(d);
  return r;
}

std::vector<Point> default_points(const ChartPtr& chart, const std::vector<Expr>& avoid, std::size_t count) {
  static const Scalar line_vals[] = {Scalar(1, 2), Scalar(2, 3), Scalar(-3, 7), Scalar(5, 4), Scalar(-7, 5),
                                     Scalar(3, 11), Scalar(9, 8), Scalar(-2, 9), Scalar(4, 13), Scalar(11, 6)};
  static const std::pair<Scalar, Scalar> trig_vals[] = {
      {Scalar(3, 5), Scalar(4, 5)},    {Scalar(5, 13), Scalar(-12, 13)}, {Scalar(-8, 17), Scalar(15, 17)},
      {Scalar(24, 25), Scalar(7, 25)}, {Scalar(-20, 29), Scalar(-21, 29)}};
  std::vector<Point> out;
  const std::size_t d = chart->dim();
  for (std::size_t attempt = 0; out.size() < count && attempt < 40; ++attempt) {
    Point pt(d);
    for (std::size_t mu = 0; mu < d; ++mu) {
      std::size_t k = attempt * 3 + mu * 7 + attempt * mu;
      if (chart->is_angle(mu)) {
        const auto& [s, c] = trig_vals[k % 5];
        pt[mu].sin = s;
        pt[mu].cos = c;
      } else {
        pt[mu].value = line_vals[k % 10];
      }
    }
    bool ok = true;
    auto assign = point_assignment(*chart, pt);
    for (const auto& e : avoid) try {
        evaluate(e, assign);
      } catch (const EvaluationPole&) {
        ok = false;
        break;
      }
    if (ok) out.push_back(pt);
  }
  return out;
}

FloorReport classify(const GMPair& p, const Expr& L, const ClassifyOptions& opt) {
  FloorReport rep;
  rep.split = weak_invariance_split(p, L);
  Vec t = psi(p, rep.split);
  rep.psi_state = is_zero(t) ? ClassState::Zero : ClassState::NonZero;
  rep.sign = rep.psi_state == ClassState::Zero ? '+' : '-';
  try {
    rep.k1 = phi1(p, rep.split, opt.ansatz);
    if (rep.k1.state == ClassState::NonZero) {
      rep.floor = 0;
      return rep;
    }
    rep.k2 = phi2(p, rep.k1.potentials);
    if (rep.k2.state == ClassState::NonZero) {
      rep.floor = 1;
      return rep;
    }
    std::vector<Point> pts = opt.points;
    if (pts.empty()) {
      std::vector<Expr> avoid = rep.k2.alpha_adjusted;
      for (const auto& x : p.fields)
        for (const auto& c : x.components) avoid.push_back(c);
      if (p.stabilizer)
        for (const auto& c : *p.stabilizer) avoid.push_back(c);
      pts = default_points(p.chart, avoid);
    }
    rep.k3 = phi3(p, rep.k2.alpha_adjusted, pts, opt.ansatz);
    if (rep.k3.state == ClassState::NonZero) {
      rep.floor = 2;
      return rep;
    }
    rep.k4 = phi4(p, L, rep.split, *rep.k3.witness, opt.ansatz);
    rep.floor = rep.k4.state == ClassState::NonZero ? 3 : 4;
  } catch (const Undetermined& u) {
    rep.status = FloorReport::Status::Undetermined;
    rep.undetermined_stage = u.stage;
    rep.undetermined_reason = u.what();
  }
  return rep;
}

std::vector<Expr> noether_charges(const GMPair& p, const Expr& L, AnsatzSpec ansatz) {
  WeakInvarianceSplit s = weak_invariance_split(p, L);
  const ChartPtr& ch = p.chart;
  ELForm el = euler_lagrange(L);
  std::vector<Expr> out;
  for (std::size_t i = 0; i < p.fields.size(); ++i) {
    DeRhamSplit d;
    try {
      d = derham_split(s.w[i], ansatz);
    } catch (const AnsatzExhausted& e) {
      throw PotentialUnavailable(std::string("noether: ") + e.what());
    }
    for (const auto& [mu, c] : d.harmonic)
      if (sgn(c) != 0) throw PotentialUnavailable("noether: w_" + p.algebra.basis_names()[i] + " is not exact");
    Expr N(ch, 0);
    const auto& x = p.fields[i];
    for (std::size_t mu = 0; mu < ch->dim(); ++mu)
      if (!x.components[mu].is_zero()) N += x.components[mu] * partial_velocity(L, mu);
    N = N - d.potential - Scalar(s.t[i]) * tau_expr(ch);
    Expr residual = total_time_derivative(N);
    for (std::size_t mu = 0; mu < ch->dim(); ++mu)
      if (!x.components[mu].is_zero()) residual += x.components[mu] * el.components[mu];
    if (!residual.is_zero()) throw InvariantViolation("noether: conservation identity fails");
    out.push_back(N);
  }
  return out;
}

namespace {

// Subspace of V0 (coordinates over `elems`) that is mapped into itself by
// each action; images given as component vectors.
Subspace core_subspace(const std::vector<std::vector<Expr>>& elems,
                       const std::vector<std::vector<std::vector<Expr>>>& images) {
  const std::size_t m = elems.size();
  Subspace v{m, {}};
  for (std::size_t j = 0; j < m; ++j) {
    Vec e(m);
    e[j] = 1;
    v.basis.push_back(e);
  }
  if (m == 0) return v;
  std::vector<std::vector<Expr>> cols = elems;
  for (const auto& img : images) cols.insert(cols.end(), img.begin(), img.end());
  Mat all = coefficient_matrix(cols);
  Mat B = all.block(0, 0, all.rows(), m);
  std::vector<Mat> A;
  for (std::size_t i = 0; i < images.size(); ++i) A.push_back(all.block(0, m * (i + 1), all.rows(), m));
  for (;;) {
    std::size_t d = v.dim();
    if (d == 0) return v;
    Mat V = v.matrix();
    Mat BV = B * V;
    // unknowns (y, u_1..u_k): A_i V y - B V u_i = 0
    const std::size_t k = A.size();
    Mat sys(all.rows() * k, d * (k + 1));
    for (std::size_t i = 0; i < k; ++i) {
      Mat AV = A[i] * V;
      for (std::size_t r = 0; r < all.rows(); ++r)
        for (std::size_t c = 0; c < d; ++c) {
          sys(i * all.rows() + r, c) = AV(r, c);
          sys(i * all.rows() + r, d * (i + 1) + c) = -BV(r, c);
        }
    }
    Subspace ker = kernel_basis(sys);
    std::vector<Vec> ys;
    for (const auto& kv : ker.basis) ys.push_back(V * Vec(kv.begin(), kv.begin() + static_cast<std::ptrdiff_t>(d)));
    Subspace next = span_of(m, ys);
    if (next.dim() == d) return v;
    v = next;
  }
}

template <class T>
std::vector<T> combine_all(const std::vector<T>& elems, const Subspace& s, const std::function<T(const T&, const Scalar&)>& scale,
                           const std::function<T(const T&, const T&)>& add, const T& zero) {
  std::vector<T> out;
  for (const auto& v : s.basis) {
    T acc = zero;
    for (std::size_t j = 0; j < elems.size(); ++j)
      if (sgn(v[j]) != 0) acc = add(acc, scale(elems[j], v[j]));
    out.push_back(acc);
  }
  return out;
}

std::vector<Expr> scaled(const std::vector<Expr>& v, const Scalar& c) {
  std::vector<Expr> out;
  for (const auto& e : v) out.push_back(c * e);
  return out;
}

std::vector<Expr> added(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  std::vector<Expr> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
  return out;
}

std::vector<std::vector<Expr>> core_of(const std::vector<std::vector<Expr>>& elems,
                                       const std::function<std::vector<Expr>(std::size_t, const std::vector<Expr>&)>& act,
                                       std::size_t n_actions) {
  std::vector<std::vector<std::vector<Expr>>> images(n_actions);
  for (std::size_t i = 0; i < n_actions; ++i)
    for (const auto& e : elems) images[i].push_back(act(i, e));
  Subspace s = core_subspace(elems, images);
  if (elems.empty()) return {};
  std::vector<Expr> zero(elems.front().size(), Expr(elems.front().front().chart(), 0));
  return combine_all<std::vector<Expr>>(elems, s, scaled, added, zero);
}

}  // namespace

CoreForms core_forms(const GMPair& p, const Truncation& t) {
  const ChartPtr& ch = p.chart;
  const std::size_t d = ch->dim();
  const std::size_t n = p.algebra.dim();
  auto basis = ansatz_exprs(ch, t.degree, t.fourier);
  CoreForms out;
  {
    std::vector<std::vector<Expr>> elems;
    for (const auto& b : basis) elems.push_back({b});
    auto core = core_of(elems, [&](std::size_t i, const std::vector<Expr>& e) {
      return std::vector<Expr>{lie_derivative_scalar(p.fields[i], e[0])};
    }, n);
    for (auto& c : core) out.functions.push_back(c[0]);
  }
  {
    std::vector<std::vector<Expr>> elems;
    for (std::size_t mu = 0; mu < d; ++mu)
      for (const auto& b : basis) {
        std::vector<Expr> e(d, Expr(ch, 0));
        e[mu] = b;
        elems.push_back(e);
      }
    auto core = core_of(elems, [&](std::size_t i, const std::vector<Expr>& e) {
      return lie_derivative_form(p.fields[i], OneForm{ch, e}).components;
    }, n);
    for (auto& c : core) out.one_forms.push_back(OneForm{ch, c});
  }
  if (d >= 2) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t mu = 0; mu < d; ++mu)
      for (std::size_t nu = mu + 1; nu < d; ++nu) pairs.emplace_back(mu, nu);
    std::vector<std::vector<Expr>> elems;
    for (std::size_t k = 0; k < pairs.size(); ++k)
      for (const auto& b : basis) {
        std::vector<Expr> e(pairs.size(), Expr(ch, 0));
        e[k] = b;
        elems.push_back(e);
      }
    auto to_form = [&](const std::vector<Expr>& e) {
      TwoForm w;
      for (std::size_t k = 0; k < pairs.size(); ++k) w[pairs[k]] = e[k];
      return w;
    };
    auto core = core_of(elems, [&](std::size_t i, const std::vector<Expr>& e) {
      return flatten(lie_derivative_two_form(p.fields[i], to_form(e), d));
    }, n);
    for (auto& c : core) out.two_forms.push_back(to_form(c));
  }
  return out;
}

namespace {

// Coordinates of each target in the span of `basis` (all as component vectors).
Mat coordinates_in(const std::vector<std::vector<Expr>>& basis, const std::vector<std::vector<Expr>>& targets) {
  Mat out(basis.size(), targets.size());
  if (basis.empty() || targets.empty()) return out;
  std::vector<std::vector<Expr>> cols = basis;
  cols.insert(cols.end(), targets.begin(), targets.end());
  Mat m = coefficient_matrix(cols);
  Mat a = m.block(0, 0, m.rows(), basis.size());
  for (std::size_t j = 0; j < targets.size(); ++j) {
    auto x = solve(a, m.column(basis.size() + j));
    if (!x) throw InvariantViolation("truncated space is not closed");
    for (std::size_t i = 0; i < basis.size(); ++i) out(i, j) = (*x)[i];
  }
  return out;
}

}  // namespace

DoubleComplex build_invariance_double_complex(const GMPair& p, const Truncation& t) {
  const ChartPtr& ch = p.chart;
  const std::size_t n = p.algebra.dim();
  const std::size_t d = ch->dim();
  CoreForms core = core_forms(p, t);
  std::vector<std::vector<std::vector<Expr>>> spaces(3);
  for (const auto& f : core.functions) spaces[0].push_back({f});
  for (const auto& w : core.one_forms) spaces[1].push_back(w.components);
  for (const auto& w : core.two_forms) spaces[2].push_back(flatten(w));
  auto act = [&](std::size_t q, std::size_t i, const std::vector<Expr>& e) -> std::vector<Expr> {
    if (q == 0) return {lie_derivative_scalar(p.fields[i], e[0])};
    if (q == 1) return lie_derivative_form(p.fields[i], OneForm{ch, e}).components;
    TwoForm w;
    std::size_t k = 0;
    for (std::size_t mu = 0; mu < d; ++mu)
      for (std::size_t nu = mu + 1; nu < d; ++nu) w[{mu, nu}] = e[k++];
    return flatten(lie_derivative_two_form(p.fields[i], w, d));
  };
  std::vector<GModule> modules(3);
  for (std::size_t q = 0; q < 3; ++q) {
    modules[q].dim = spaces[q].size();
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::vector<Expr>> imgs;
      for (const auto& e : spaces[q]) imgs.push_back(act(q, i, e));
      modules[q].rho.push_back(coordinates_in(spaces[q], imgs));
    }
    if (!validate_module(p.algebra, modules[q]).ok) throw InvariantViolation("truncated forms are not a module");
  }
  // exterior derivatives in core coordinates
  std::vector<Mat> D(2);
  {
    std::vector<std::vector<Expr>> imgs;
    for (const auto& f : core.functions) imgs.push_back(exterior_derivative(f).components);
    D[0] = coordinates_in(spaces[1], imgs);
    if (spaces[1].empty()) D[0] = Mat(0, spaces[0].size());
  }
  {
    std::vector<std::vector<Expr>> imgs;
    for (const auto& w : core.one_forms) imgs.push_back(flatten(exterior_derivative(w)));
    D[1] = spaces[2].empty() ? Mat(0, spaces[1].size()) : coordinates_in(spaces[2], imgs);
  }
  std::vector<std::vector<std::size_t>> dims(n + 1, std::vector<std::size_t>(3));
  for (std::size_t pp = 0; pp <= n; ++pp)
    for (std::size_t q = 0; q < 3; ++q) dims[pp][q] = increasing_tuples(n, pp).size() * spaces[q].size();
  DoubleComplex dc = make_double_complex(dims);
  for (std::size_t pp = 0; pp <= n; ++pp) {
    std::size_t nt = increasing_tuples(n, pp).size();
    for (std::size_t q = 0; q < 3; ++q) {
      if (pp < n) dc.d2[pp][q] = ce_differential(p.algebra, modules[q], pp);
      if (q < 2) {
        Mat m(nt * spaces[q + 1].size(), nt * spaces[q].size());
        for (std::size_t tt = 0; tt < nt; ++tt)
          for (std::size_t a = 0; a < D[q].rows(); ++a)
            for (std::size_t b = 0; b < D[q].cols(); ++b)
              m(tt * D[q].rows() + a, tt * D[q].cols() + b) = D[q](a, b);
        dc.d1[pp][q] = m;
      }
    }
  }
  auto rep = validate_double_complex(dc);
  if (!rep.ok) throw InvariantViolation("invariance double complex fails validation: " + rep.violations.front());
  return dc;
}

KSpacesReport k_spaces(const GMPair& p, const Truncation& t) {
  KSpacesReport rep;
  rep.truncation = t;
  const StructureConstants& g = p.algebra;
  const ChartPtr& ch = p.chart;
  const std::size_t n = g.dim();
  GModule triv = trivial_module(g);
  auto h1 = cohomology(g, triv, 1);
  auto h2 = cohomology(g, triv, 2);
  rep.k0 = h1.dim();
  rep.k2 = h2.dim();
  rep.k0_reps = h1.representatives;
  rep.k2_reps = h2.representatives;
  auto angles = ch->angle_coords();
  rep.k1 = angles.size() * rep.k0;
  for (auto mu : angles)
    for (const auto& r : h1.representatives) rep.k1_reps.push_back("d" + ch->coords()[mu].name + " (x) " + str(r, g));
  // K4
  AnsatzSpec a{t.degree, t.fourier};
  InvariantForms inv = invariant_closed_forms(p, a);
  rep.k4 = angles.size() - inv.harmonic_image.dim();
  {
    std::vector<Vec> e;
    for (std::size_t j = 0; j < angles.size(); ++j) {
      Vec v(angles.size());
      v[j] = 1;
      e.push_back(v);
    }
    QuotientSpace q = quotient(Subspace{angles.size(), e}, inv.harmonic_image);
    for (const auto& r : q.representatives()) rep.k4_reps.push_back(harmonic_str(ch, r));
  }
  // K3: Z^1(V) / ((delta V+ cap V^n) + pi(H^1(M)) + Z^1(G))
  auto basis = ansatz_exprs(ch, t.degree, t.fourier);
  auto plus = ansatz_exprs(ch, t.degree + 1, t.fourier);
  const std::size_t m = basis.size();
  std::vector<std::vector<Expr>> vcols;  // elements e_i (x) b_j, index i*m + j
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& b : basis) {
      std::vector<Expr> e(n, Expr(ch, 0));
      e[i] = b;
      vcols.push_back(e);
    }
  std::vector<std::vector<Expr>> dcols;
  for (const auto& v : vcols) {
    std::vector<Expr> comps;
    for (const auto& [ij, e] : delta1(p, v)) comps.push_back(e);
    dcols.push_back(comps);
  }
  Subspace z = n < 2 ? [&] {
    Subspace s{n * m, {}};
    for (std::size_t k = 0; k < n * m; ++k) {
      Vec e(n * m);
      e[k] = 1;
      s.basis.push_back(e);
    }
    return s;
  }()
                     : kernel_basis(coefficient_matrix(dcols));
  auto cochain_of = [&](const Vec& r) {
    FunctionCochain1 a(n, Expr(ch, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (sgn(r[i * m + j]) != 0) a[i] += r[i * m + j] * basis[j];
    return a;
  };
  Subspace z1g = z1_trivial(g);
  if (p.transitive) {
    // pi of a closed form restricts to zero on the stabilizer, so only the
    // restriction values of Z^1(V) beyond those of Z^1(G) survive.
    rep.k3_method = "restriction";
    std::vector<Expr> avoid;
    for (const auto& x : p.fields)
      for (const auto& c : x.components) avoid.push_back(c);
    if (p.stabilizer)
      for (const auto& c : *p.stabilizer) avoid.push_back(c);
    auto pts = default_points(ch, avoid, 2);
    if (pts.empty()) throw Undetermined(3, "k_spaces: no regular base point found");
    std::optional<std::size_t> dim_seen;
    for (const auto& pt : pts) {
      auto stab = stability_basis_at(p, pt);
      std::vector<Vec> tv;
      for (const auto& zz : z1g.basis) tv.push_back(restrict_values(p, stab, constants(ch, zz), pt));
      Subspace acc = span_of(stab.size(), tv);
      const std::size_t base = acc.dim();
      std::vector<FunctionCochain1> reps;
      for (const auto& zv : z.basis) {
        auto a = cochain_of(zv);
        Vec r = restrict_values(p, stab, a, pt);
        Subspace next = sum(acc, Subspace{stab.size(), {r}});
        if (next.dim() > acc.dim()) {
          acc = next;
          reps.push_back(a);
        }
      }
      const std::size_t d = acc.dim() - base;
      if (dim_seen && *dim_seen != d) throw InvariantViolation("k_spaces: restriction rank depends on the base point");
      if (!dim_seen) rep.k3_reps = reps;
      dim_seen = d;
    }
    rep.k3 = *dim_seen;
    return rep;
  }
  rep.k3_method = "filtered";
  std::vector<std::vector<Expr>> extra;
  for (const auto& b : plus) extra.push_back(delta0(p, b));
  const std::size_t n_plus = extra.size();
  for (auto mu : angles) {
    OneForm dphi = zero_form(ch);
    dphi.components[mu] = Expr(ch, 1);
    extra.push_back(pi_map(p, dphi));
  }
  for (const auto& zz : z1g.basis) extra.push_back(constants(ch, zz));
  std::vector<std::vector<Expr>> cols = vcols;
  cols.insert(cols.end(), extra.begin(), extra.end());
  Mat all = coefficient_matrix(cols);
  Mat MV = all.block(0, 0, all.rows(), n * m);
  std::vector<Vec> den;
  {
    // delta(V+) cap V^n: MV x + Mplus y = 0, keep x
    Mat sys = all.block(0, 0, all.rows(), n * m + n_plus);
    for (const auto& kv : kernel_basis(sys).basis) den.push_back(Vec(kv.begin(), kv.begin() + static_cast<std::ptrdiff_t>(n * m)));
  }
  for (std::size_t k = n_plus; k < extra.size(); ++k)
    if (auto x = solve(MV, all.column(n * m + k))) den.push_back(*x);
  Subspace dsp = span_of(n * m, den);
  QuotientSpace k3 = quotient(z, dsp);
  rep.k3 = k3.dim();
  for (const auto& r : k3.representatives()) rep.k3_reps.push_back(cochain_of(r));
  return rep;
}

}  // namespace lagcoh
