#include "lagcoh/ce_cohomology.hpp"

#include <algorithm>

#include "lagcoh/errors.hpp"

namespace lagcoh {

GModule trivial_module(const StructureConstants& g, std::size_t dim) {
  GModule a;
  a.dim = dim;
  a.rho.assign(g.dim(), Mat(dim, dim));
  return a;
}

ModuleReport validate_module(const StructureConstants& g, const GModule& a) {
  ModuleReport r;
  const std::size_t n = g.dim();
  if (a.rho.size() != n) throw ValidationFailure("module has the wrong number of action matrices");
  for (const auto& m : a.rho)
    if (m.rows() != a.dim || m.cols() != a.dim) throw ValidationFailure("action matrix has the wrong shape");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Mat lhs = a.rho[i] * a.rho[j] - a.rho[j] * a.rho[i];
      for (std::size_t k = 0; k < n; ++k) {
        Scalar c = g.c(i, j, k);
        if (sgn(c) != 0) lhs = lhs - c * a.rho[k];
      }
      if (!lhs.is_zero()) {
        r.ok = false;
        r.violations.emplace_back(i, j);
      }
    }
  return r;
}

std::vector<IndexTuple> increasing_tuples(std::size_t n, std::size_t q) {
  std::vector<IndexTuple> out;
  if (q > n) return out;
  IndexTuple t(q);
  for (std::size_t i = 0; i < q; ++i) t[i] = i;
  for (;;) {
    out.push_back(t);
    std::size_t i = q;
    while (i > 0 && t[i - 1] == n - q + i - 1) --i;
    if (i == 0) break;
    ++t[i - 1];
    for (std::size_t j = i; j < q; ++j) t[j] = t[j - 1] + 1;
  }
  return out;
}

const Vec* Cochain::at(const IndexTuple& t) const {
  auto it = components.find(t);
  return it == components.end() ? nullptr : &it->second;
}

std::size_t cochain_space_dim(std::size_t n, std::size_t q, std::size_t m) {
  return increasing_tuples(n, q).size() * m;
}

Vec to_coordinates(const Cochain& c, std::size_t n) {
  auto tuples = increasing_tuples(n, c.degree);
  Vec v(tuples.size() * c.module_dim);
  for (std::size_t t = 0; t < tuples.size(); ++t)
    if (const Vec* x = c.at(tuples[t]))
      for (std::size_t a = 0; a < c.module_dim; ++a) v[t * c.module_dim + a] = (*x)[a];
  return v;
}

Cochain from_coordinates(const Vec& v, std::size_t n, std::size_t q, std::size_t m) {
  auto tuples = increasing_tuples(n, q);
  if (v.size() != tuples.size() * m) throw Error("cochain coordinate vector has the wrong length");
  Cochain c;
  c.degree = q;
  c.module_dim = m;
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    Vec x(v.begin() + static_cast<std::ptrdiff_t>(t * m), v.begin() + static_cast<std::ptrdiff_t>((t + 1) * m));
    if (!is_zero(x)) c.components[tuples[t]] = std::move(x);
  }
  return c;
}

Mat ce_differential(const StructureConstants& g, const GModule& a, std::size_t q) {
  const std::size_t n = g.dim(), m = a.dim;
  auto src = increasing_tuples(n, q);
  auto dst = increasing_tuples(n, q + 1);
  Mat d(dst.size() * m, src.size() * m);
  if (src.empty() || dst.empty()) return d;
  std::map<IndexTuple, std::size_t> index;
  for (std::size_t s = 0; s < src.size(); ++s) index[src[s]] = s;
  for (std::size_t r = 0; r < dst.size(); ++r) {
    const IndexTuple& t = dst[r];
    // sum_i (-1)^i h_i . c(..., omit i, ...)
    for (std::size_t i = 0; i <= q; ++i) {
      IndexTuple s = t;
      s.erase(s.begin() + static_cast<std::ptrdiff_t>(i));
      std::size_t col = index.at(s);
      const Mat& rho = a.rho[t[i]];
      int sign = i % 2 == 0 ? 1 : -1;
      for (std::size_t x = 0; x < m; ++x)
        for (std::size_t y = 0; y < m; ++y)
          if (sgn(rho(x, y)) != 0) d(r * m + x, col * m + y) += sign * rho(x, y);
    }
    // sum_{i<j} (-1)^{i+j} c([h_i, h_j], ...)
    for (std::size_t i = 0; i <= q; ++i)
      for (std::size_t j = i + 1; j <= q; ++j) {
        IndexTuple rest;
        for (std::size_t l = 0; l <= q; ++l)
          if (l != i && l != j) rest.push_back(t[l]);
        int sign = (i + j) % 2 == 0 ? 1 : -1;
        for (std::size_t k = 0; k < n; ++k) {
          Scalar c = g.c(t[i], t[j], k);
          if (sgn(c) == 0) continue;
          if (std::find(rest.begin(), rest.end(), k) != rest.end()) continue;
          // sort (k, rest): k moves past every smaller entry
          IndexTuple s = rest;
          std::size_t pos = static_cast<std::size_t>(std::lower_bound(s.begin(), s.end(), k) - s.begin());
          s.insert(s.begin() + static_cast<std::ptrdiff_t>(pos), k);
          int perm = pos % 2 == 0 ? 1 : -1;
          std::size_t col = index.at(s);
          for (std::size_t x = 0; x < m; ++x) d(r * m + x, col * m + x) += sign * perm * c;
        }
      }
  }
  return d;
}

CohomologyResult cohomology(const StructureConstants& g, const GModule& a, std::size_t q) {
  const std::size_t n = g.dim(), m = a.dim;
  CohomologyResult res;
  res.degree = q;
  std::size_t cq = cochain_space_dim(n, q, m);
  Mat dq = ce_differential(g, a, q);
  Subspace z = dq.rows() == 0 ? Subspace{cq, {}} : kernel_basis(dq);
  if (dq.rows() == 0) {
    for (std::size_t i = 0; i < cq; ++i) {
      Vec e(cq);
      e[i] = 1;
      z.basis.push_back(e);
    }
  }
  Subspace b{cq, {}};
  if (q > 0) {
    Mat dp = ce_differential(g, a, q - 1);
    if (dq.rows() > 0 && !(dq * dp).is_zero()) throw InvariantViolation("delta^2 != 0");
    b = image_basis(dp);
  }
  res.quotient = quotient(z, b);
  for (const auto& r : res.quotient.representatives()) res.representatives.push_back(from_coordinates(r, n, q, m));
  return res;
}

bool is_cocycle(const StructureConstants& g, const GModule& a, const Cochain& z) {
  Mat d = ce_differential(g, a, z.degree);
  if (d.rows() == 0) return true;
  return is_zero(d * to_coordinates(z, g.dim()));
}

std::optional<Cochain> coboundary_witness(const StructureConstants& g, const GModule& a, const Cochain& z) {
  if (z.degree == 0) throw Error("coboundary_witness needs degree >= 1");
  if (!is_cocycle(g, a, z)) throw NotACocycle("coboundary_witness: input is not a cocycle");
  Mat d = ce_differential(g, a, z.degree - 1);
  auto x = solve(d, to_coordinates(z, g.dim()));
  if (!x) return std::nullopt;
  return from_coordinates(*x, g.dim(), z.degree - 1, a.dim);
}

std::string str(const Cochain& c, const StructureConstants& g) {
  std::string s;
  for (const auto& [t, v] : c.components) {
    if (!s.empty()) s += ", ";
    s += "(";
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + g.basis_names()[t[i]];
    s += ")=";
    if (v.size() == 1) {
      s += v[0].get_str();
    } else {
      s += "[";
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
      s += "]";
    }
  }
  return s.empty() ? "0" : s;
}

}  // namespace lagcoh
