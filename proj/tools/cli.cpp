#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

#include "lagcoh/errors.hpp"
#include "lagcoh/hierarchy.hpp"
#include "lagcoh/problem.hpp"

namespace lagcoh::cli {

namespace {

struct Report {
  std::vector<std::pair<std::string, std::string>> lines;
  void add(const std::string& k, const std::string& v) { lines.emplace_back(k, v); }
  void add(const std::string& k, std::size_t v) { add(k, std::to_string(v)); }

  void print(std::ostream& os, bool machine) const {
    if (machine) {
      for (const auto& [k, v] : lines) os << k << " = " << v << "\n";
      return;
    }
    std::size_t w = 0;
    for (const auto& [k, v] : lines) w = std::max(w, k.size());
    for (const auto& [k, v] : lines) os << k << std::string(w - k.size() + 2, ' ') << v << "\n";
  }
};

std::string vec_str(const Vec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].get_str();
  return s + ")";
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
  return s;
}

std::string dims_str(const std::vector<std::vector<std::size_t>>& d) {
  std::vector<std::string> rows;
  for (const auto& r : d) {
    std::vector<std::string> c;
    for (auto x : r) c.push_back(std::to_string(x));
    rows.push_back("[" + join(c, ", ") + "]");
  }
  return "[" + join(rows, ", ") + "]";
}

std::string sizes_str(const std::vector<std::size_t>& d) {
  std::vector<std::string> c;
  for (auto x : d) c.push_back(std::to_string(x));
  return "[" + join(c, ", ") + "]";
}

// sum_j m(i, j) d(angle_j) for every generator i
std::string harmonic_matrix_str(const Chart& ch, const Mat& m) {
  auto angles = ch.angle_coords();
  std::vector<std::string> comps;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::string s;
    for (std::size_t j = 0; j < angles.size(); ++j) {
      const Scalar& c = m(i, j);
      if (sgn(c) == 0) continue;
      std::string name = "d" + ch.coords()[angles[j]].name;
      Scalar a = abs(c);
      std::string term = a == 1 ? name : a.get_str() + "*" + name;
      if (s.empty())
        s = (sgn(c) < 0 ? "-" : "") + term;
      else
        s += (sgn(c) < 0 ? " - " : " + ") + term;
    }
    comps.push_back(s.empty() ? "0" : s);
  }
  return "(" + join(comps, ", ") + ")";
}

std::string cochain1_str(const FunctionCochain1& a) {
  std::vector<std::string> c;
  for (const auto& e : a) c.push_back(e.str());
  return "(" + join(c, ", ") + ")";
}

struct Common {
  std::string file;
  std::string format = "human";
  std::string set;
  int ansatz_degree = -1;
  int fourier = -1;
  std::size_t closure_cap = default_closure_cap;
};

struct Loaded {
  ProblemFile pf;
  std::map<std::string, Scalar> params;
};

Loaded load(const Common& c) {
  Loaded l;
  l.pf = load_problem(c.file);
  l.params = parse_set(l.pf.options.set);
  for (const auto& [k, v] : parse_set(c.set)) l.params[k] = v;
  return l;
}

Truncation truncation_of(const Common& c) {
  Truncation t;
  if (c.ansatz_degree >= 0) t.degree = c.ansatz_degree;
  if (c.fourier >= 0) t.fourier = c.fourier;
  t.closure_cap = c.closure_cap;
  return t;
}

std::string pick_lagrangian(const ProblemFile& pf, const std::string& requested) {
  if (!requested.empty()) return requested;
  if (pf.lagrangians.empty()) throw UnknownName("the problem file has no [lagrangian] entries");
  return pf.lagrangians.front().first;
}

int cmd_check_algebra(const Common& c, Report& r) {
  auto l = load(c);
  StructureConstants g = build_algebra(l.pf);
  r.add("algebra", join(g.basis_names(), ","));
  r.add("dim", g.dim());
  auto j = jacobi_check(g);
  r.add("jacobi", j.ok ? "ok" : "violated");
  for (std::size_t k = 0; k < j.violations.size(); ++k) {
    const auto& v = j.violations[k];
    r.add("violation." + std::to_string(k + 1),
          "(" + g.basis_names()[v[0]] + ", " + g.basis_names()[v[1]] + ", " + g.basis_names()[v[2]] + ") component " +
              g.basis_names()[v[3]]);
  }
  return j.ok ? Ok : Invalid;
}

int cmd_check_pair(const Common& c, Report& r) {
  auto l = load(c);
  GMPair p = build_pair(l.pf, l.params);
  auto j = jacobi_check(p.algebra);
  r.add("jacobi", j.ok ? "ok" : "violated");
  auto rep = validate_pair(p);
  r.add("homomorphism", rep.ok ? "ok" : "violated");
  for (std::size_t k = 0; k < rep.violations.size(); ++k) {
    const auto& [a, b] = rep.violations[k];
    r.add("violation." + std::to_string(k + 1),
          "[" + p.algebra.basis_names()[a] + ", " + p.algebra.basis_names()[b] + "]");
  }
  r.add("transitive", p.transitive ? "true" : "false");
  r.add("stabilizer", p.stabilizer ? "given" : "none");
  return j.ok && rep.ok ? Ok : Invalid;
}

int cmd_cohomology(const Common& c, Report& r, const std::vector<std::size_t>& degrees, const std::string& module) {
  auto l = load(c);
  StructureConstants g = build_algebra(l.pf);
  if (!jacobi_check(g).ok) throw ValidationFailure("structure constants violate the Jacobi identity");
  GModule a = module.empty() ? trivial_module(g) : build_module(l.pf, module, c.closure_cap);
  auto mr = validate_module(g, a);
  if (!mr.ok) throw ValidationFailure("module '" + module + "' is not a representation");
  r.add("module", module.empty() ? "trivial" : module);
  r.add("module.dim", a.dim);
  for (auto q : degrees) {
    auto h = cohomology(g, a, q);
    std::string pre = "h" + std::to_string(q);
    r.add(pre + ".dim", h.dim());
    for (std::size_t k = 0; k < h.representatives.size(); ++k)
      r.add(pre + ".rep." + std::to_string(k + 1), str(h.representatives[k], g));
  }
  return Ok;
}

int cmd_k_spaces(const Common& c, Report& r) {
  auto l = load(c);
  GMPair p = build_pair(l.pf, l.params);
  if (!validate_pair(p).ok) throw ValidationFailure("the action is not a Lie algebra homomorphism");
  Truncation t = truncation_of(c);
  auto k = k_spaces(p, t);
  r.add("truncation.degree", std::to_string(t.degree));
  r.add("truncation.fourier", std::to_string(t.fourier));
  r.add("k0", k.k0);
  for (std::size_t i = 0; i < k.k0_reps.size(); ++i) r.add("k0.rep." + std::to_string(i + 1), str(k.k0_reps[i], p.algebra));
  r.add("k1", k.k1);
  for (std::size_t i = 0; i < k.k1_reps.size(); ++i) r.add("k1.rep." + std::to_string(i + 1), k.k1_reps[i]);
  r.add("k2", k.k2);
  for (std::size_t i = 0; i < k.k2_reps.size(); ++i) r.add("k2.rep." + std::to_string(i + 1), str(k.k2_reps[i], p.algebra));
  r.add("k3", k.k3);
  for (std::size_t i = 0; i < k.k3_reps.size(); ++i) r.add("k3.rep." + std::to_string(i + 1), cochain1_str(k.k3_reps[i]));
  r.add("k3.method", k.k3_method);
  r.add("k3_caveat", k.k3_caveat ? "true" : "false");
  r.add("k4", k.k4);
  for (std::size_t i = 0; i < k.k4_reps.size(); ++i) r.add("k4.rep." + std::to_string(i + 1), k.k4_reps[i]);
  return Ok;
}

int cmd_classify(const Common& c, Report& r, const std::string& lname) {
  auto l = load(c);
  GMPair p = build_pair(l.pf, l.params);
  if (!validate_pair(p).ok) throw ValidationFailure("the action is not a Lie algebra homomorphism");
  std::string name = pick_lagrangian(l.pf, lname);
  Expr L = build_lagrangian(l.pf, p.chart, name, l.params);
  r.add("lagrangian", name);
  r.add("L", L.str());
  ClassifyOptions opt;
  opt.ansatz = {c.ansatz_degree, c.fourier};
  opt.points = build_points(l.pf, *p.chart);
  FloorReport f;
  try {
    f = classify(p, L, opt);
  } catch (const NotWeaklyInvariant& e) {
    r.add("status", "not-weakly-invariant");
    r.add("generator", p.algebra.basis_names()[e.generator]);
    r.add("residue", e.residue);
    return NotInvariant;
  }
  const auto& names = p.algebra.basis_names();
  if (f.status == FloorReport::Status::Undetermined) {
    r.add("status", "undetermined");
    r.add("stage", std::to_string(f.undetermined_stage));
    r.add("reason", f.undetermined_reason);
  } else {
    r.add("status", "classified");
    r.add("floor", std::to_string(f.floor));
    r.add("sign", std::string(1, f.sign));
  }
  for (std::size_t i = 0; i < names.size(); ++i)
    r.add("split.w." + names[i], str(f.split.w[i]));
  r.add("psi", vec_str(f.split.t));
  r.add("k1.state", to_string(f.k1.state));
  if (f.k1.state != ClassState::NotReached) r.add("k1", harmonic_matrix_str(*p.chart, f.k1.harmonic));
  r.add("k2.state", to_string(f.k2.state));
  if (f.k2.state != ClassState::NotReached) {
    r.add("alpha", cochain1_str(f.k1.potentials));
    r.add("k2.cocycle", f.k2.f.components.empty() ? "0" : str(f.k2.f, p.algebra));
    r.add("k2", f.k2.state == ClassState::Zero ? "0" : "[" + str(f.k2.f, p.algebra) + "]");
    if (f.k2.t_prime) r.add("k2.t_prime", vec_str(*f.k2.t_prime));
  }
  r.add("k3.state", to_string(f.k3.state));
  if (f.k3.witness) {
    OneForm w = zero_form(p.chart);
    auto angles = p.chart->angle_coords();
    for (std::size_t j = 0; j < angles.size(); ++j) w.components[angles[j]] = Expr(p.chart, f.k3.witness->c[j]);
    r.add("k3.witness.w", str(w));
    r.add("k3.witness.t2", vec_str(f.k3.witness->t2));
    r.add("k3.witness.f", f.k3.witness->g.str());
  }
  if (f.k3.certificate) {
    r.add("k3.certificate.point", point_str(*p.chart, f.k3.certificate->point));
    std::vector<std::string> sb;
    for (const auto& s : f.k3.certificate->stability_basis) sb.push_back(vec_str(s));
    r.add("k3.certificate.stability", join(sb, " "));
    r.add("k3.certificate.restriction", vec_str(f.k3.certificate->values));
  }
  r.add("k4.state", to_string(f.k4.state));
  if (f.k4.state != ClassState::NotReached) r.add("k4", f.k4.class_repr);
  if (f.k4.decomposition) {
    r.add("decomposition.l_inv", f.k4.decomposition->l_inv.str());
    r.add("decomposition.w_inv", str(f.k4.decomposition->w_inv));
    r.add("decomposition.f", f.k4.decomposition->f.str());
  }
  return f.status == FloorReport::Status::Undetermined ? Incomplete : Ok;
}

int cmd_noether(const Common& c, Report& r, const std::string& lname) {
  auto l = load(c);
  GMPair p = build_pair(l.pf, l.params);
  if (!validate_pair(p).ok) throw ValidationFailure("the action is not a Lie algebra homomorphism");
  std::string name = pick_lagrangian(l.pf, lname);
  Expr L = build_lagrangian(l.pf, p.chart, name, l.params);
  r.add("lagrangian", name);
  std::vector<Expr> n;
  try {
    n = noether_charges(p, L, {c.ansatz_degree, c.fourier});
  } catch (const NotWeaklyInvariant& e) {
    r.add("status", "not-weakly-invariant");
    r.add("generator", p.algebra.basis_names()[e.generator]);
    r.add("residue", e.residue);
    return NotInvariant;
  }
  for (std::size_t i = 0; i < n.size(); ++i) r.add("N." + p.algebra.basis_names()[i], n[i].str());
  r.add("identity", "verified");
  return Ok;
}

int cmd_spectral(const Common& c, Report& r, const std::string& complex, std::vector<std::size_t> pages) {
  auto l = load(c);
  DoubleComplex dc;
  if (!complex.empty()) {
    dc = build_double_complex(l.pf, complex);
    r.add("complex", complex);
  } else if (!l.pf.double_complexes.empty()) {
    dc = build_double_complex(l.pf, l.pf.double_complexes.front().name);
    r.add("complex", l.pf.double_complexes.front().name);
  } else {
    GMPair p = build_pair(l.pf, l.params);
    if (!validate_pair(p).ok) throw ValidationFailure("the action is not a Lie algebra homomorphism");
    dc = build_invariance_double_complex(p, truncation_of(c));
    r.add("complex", "invariance");
  }
  auto v = validate_double_complex(dc);
  if (!v.ok) {
    r.add("valid", "false");
    for (std::size_t k = 0; k < v.violations.size(); ++k) r.add("violation." + std::to_string(k + 1), v.violations[k]);
    return Invalid;
  }
  r.add("valid", "true");
  r.add("shape", std::to_string(dc.P) + "x" + std::to_string(dc.Q));
  r.add("stable_page", stable_page_index(dc));
  if (pages.empty())
    for (std::size_t k = 0; k <= stable_page_index(dc); ++k) pages.push_back(k);
  for (auto k : pages) r.add("E" + std::to_string(k), dims_str(page(dc, k).dims()));
  auto a = abutment_check(dc);
  r.add("total", sizes_str(a.total_dims));
  r.add("graded", sizes_str(a.graded_dims));
  r.add("graded.transposed", sizes_str(a.transposed_dims));
  r.add("abutment", a.ok ? "ok" : "failed");
  return a.ok ? Ok : Invalid;
}

void common_options(CLI::App* sub, Common& c) {
  sub->add_option("file", c.file, "problem file")->required();
  sub->add_option("--format", c.format, "human or machine")->check(CLI::IsMember({"human", "machine"}));
  sub->add_option("--set", c.set, "parameter values, e.g. a=1,b=-1/2");
  sub->add_option("--ansatz-degree", c.ansatz_degree, "line degree of ansatz spaces");
  sub->add_option("--fourier", c.fourier, "per-angle Fourier order of ansatz spaces");
  sub->add_option("--closure-cap", c.closure_cap, "dimension cap for module closures");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lie algebra cohomology of weakly invariant Lagrangians", "lagcoh"};
  app.require_subcommand(1);
  Common c;
  std::vector<std::size_t> degrees, pages;
  std::string module, lagrangian, complex;
  auto* ca = app.add_subcommand("check-algebra", "Jacobi identity of the structure constants");
  common_options(ca, c);
  auto* cp = app.add_subcommand("check-pair", "check that the action is a Lie algebra homomorphism");
  common_options(cp, c);
  auto* co = app.add_subcommand("cohomology", "Chevalley-Eilenberg cohomology");
  common_options(co, c);
  co->add_option("--degree", degrees, "degrees to compute (default 0 1 2)");
  co->add_option("--module", module, "module name from the problem file (default trivial)");
  auto* ks = app.add_subcommand("k-spaces", "obstruction spaces K0..K4");
  common_options(ks, c);
  auto* cl = app.add_subcommand("classify", "hierarchy floor of a Lagrangian");
  common_options(cl, c);
  cl->add_option("--lagrangian", lagrangian, "Lagrangian name (default first)");
  auto* no = app.add_subcommand("noether", "Noether charges");
  common_options(no, c);
  no->add_option("--lagrangian", lagrangian, "Lagrangian name (default first)");
  auto* sp = app.add_subcommand("spectral", "spectral sequence pages of a double complex");
  common_options(sp, c);
  sp->add_option("--complex", complex, "double complex name (default first, else the invariance complex)");
  sp->add_option("--page", pages, "pages to print (default 0 .. stable)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? Ok : ParseFailure;
  }

  Report r;
  std::string name = app.get_subcommands().front()->get_name();
  r.add("command", name);
  r.add("file", c.file);
  int code = Ok;
  try {
    if (name == "check-algebra")
      code = cmd_check_algebra(c, r);
    else if (name == "check-pair")
      code = cmd_check_pair(c, r);
    else if (name == "cohomology")
      code = cmd_cohomology(c, r, degrees.empty() ? std::vector<std::size_t>{0, 1, 2} : degrees, module);
    else if (name == "k-spaces")
      code = cmd_k_spaces(c, r);
    else if (name == "classify")
      code = cmd_classify(c, r, lagrangian);
    else if (name == "noether")
      code = cmd_noether(c, r, lagrangian);
    else
      code = cmd_spectral(c, r, complex, pages);
  } catch (const ParseError& e) {
    r.add("status", "parse-error");
    r.add("error", e.what());
    code = ParseFailure;
  } catch (const UnknownSymbol& e) {
    r.add("status", "parse-error");
    r.add("error", e.what());
    code = ParseFailure;
  } catch (const UnknownName& e) {
    r.add("status", "parse-error");
    r.add("error", e.what());
    code = ParseFailure;
  } catch (const BadParams& e) {
    r.add("status", "parse-error");
    r.add("error", e.what());
    code = ParseFailure;
  } catch (const NotWeaklyInvariant& e) {
    r.add("status", "not-weakly-invariant");
    r.add("error", e.what());
    code = NotInvariant;
  } catch (const Undetermined& e) {
    r.add("status", "undetermined");
    r.add("stage", std::to_string(e.stage));
    r.add("error", e.what());
    code = Incomplete;
  } catch (const CapExceeded& e) {
    r.add("status", "cap-exceeded");
    r.add("error", e.what());
    code = Incomplete;
  } catch (const AnsatzExhausted& e) {
    r.add("status", "undetermined");
    r.add("error", e.what());
    code = Incomplete;
  } catch (const PotentialUnavailable& e) {
    r.add("status", "potential-unavailable");
    r.add("error", e.what());
    code = Incomplete;
  } catch (const Error& e) {
    r.add("status", "invalid");
    r.add("error", e.what());
    code = Invalid;
  }
  r.add("exit", std::to_string(code));
  r.print(out, c.format == "machine");
  return code;
}

}  // namespace lagcoh::cli
