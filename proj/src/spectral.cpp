#include "lagcoh/spectral.hpp"

#include <algorithm>
#include <random>

#include "lagcoh/errors.hpp"

namespace lagcoh {

namespace {

int parity_sign(long n) { return ((n % 2) + 2) % 2 == 0 ? 1 : -1; }

// Sparse block system: unknown blocks of given sizes, each equation a target
// block width plus a list of (unknown block, matrix) terms.
struct Term {
  std::size_t block;
  Mat m;
};
struct Equation {
  std::size_t rows;
  std::vector<Term> terms;
};

std::vector<std::size_t> offsets(const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> off(sizes.size() + 1, 0);
  for (std::size_t i = 0; i < sizes.size(); ++i) off[i + 1] = off[i] + sizes[i];
  return off;
}

Mat assemble(const std::vector<std::size_t>& sizes, const std::vector<Equation>& eqs) {
  auto off = offsets(sizes);
  std::size_t rows = 0;
  for (const auto& e : eqs) rows += e.rows;
  Mat m(rows, off.back());
  std::size_t r0 = 0;
  for (const auto& e : eqs) {
    for (const auto& t : e.terms)
      for (std::size_t i = 0; i < t.m.rows(); ++i)
        for (std::size_t j = 0; j < t.m.cols(); ++j)
          if (sgn(t.m(i, j)) != 0) m(r0 + i, off[t.block] + j) += t.m(i, j);
    r0 += e.rows;
  }
  return m;
}

Vec slice(const Vec& v, std::size_t from, std::size_t len) {
  return Vec(v.begin() + static_cast<std::ptrdiff_t>(from), v.begin() + static_cast<std::ptrdiff_t>(from + len));
}

Subspace full_space(std::size_t n) {
  Subspace s{n, {}};
  for (std::size_t i = 0; i < n; ++i) {
    Vec e(n);
    e[i] = 1;
    s.basis.push_back(e);
  }
  return s;
}

// Zig-zag system for Z_r at (p, q): unknowns c = c_0 at (p, q) and c_k at
// (p+k, q-k); Q(c_0 + ... + c_{r-1}) must vanish in columns p .. p+r-1.
Mat z_system(const DoubleComplex& dc, std::size_t r, long p, long q, std::vector<std::size_t>& sizes) {
  sizes.clear();
  for (std::size_t k = 0; k < r; ++k) sizes.push_back(dc.dim(p + static_cast<long>(k), q - static_cast<long>(k)));
  std::vector<Equation> eqs;
  for (std::size_t k = 0; k < r; ++k) {
    long pk = p + static_cast<long>(k), qk = q - static_cast<long>(k);
    Equation e{dc.dim(pk, qk + 1), {}};
    if (k > 0) e.terms.push_back({k - 1, Scalar(parity_sign(qk + 1)) * dc.horizontal(pk - 1, qk + 1)});
    e.terms.push_back({k, dc.vertical(pk, qk)});
    eqs.push_back(std::move(e));
  }
  return assemble(sizes, eqs);
}

Subspace z_space(const DoubleComplex& dc, std::size_t r, long p, long q) {
  std::size_t n = dc.dim(p, q);
  if (r == 0) return full_space(n);
  std::vector<std::size_t> sizes;
  Mat m = z_system(dc, r, p, q, sizes);
  Subspace k = kernel_basis(m);
  std::vector<Vec> heads;
  for (const auto& v : k.basis) heads.push_back(slice(v, 0, n));
  return span_of(n, heads);
}

Subspace b_space(const DoubleComplex& dc, std::size_t r, long p, long q) {
  std::size_t n = dc.dim(p, q);
  if (r == 0 || n == 0) return Subspace{n, {}};
  // unknowns b_k at (p-k, q-1+k)
  std::vector<std::size_t> sizes;
  for (std::size_t k = 0; k < r; ++k) sizes.push_back(dc.dim(p - static_cast<long>(k), q - 1 + static_cast<long>(k)));
  std::vector<Equation> eqs;
  for (std::size_t k = 1; k < r; ++k) {
    long pk = p - static_cast<long>(k), qk = q - 1 + static_cast<long>(k);
    Equation e{dc.dim(pk, qk + 1), {{k, dc.vertical(pk, qk)}}};
    if (k + 1 < r) e.terms.push_back({k + 1, Scalar(parity_sign(qk + 1)) * dc.horizontal(pk - 1, qk + 1)});
    eqs.push_back(std::move(e));
  }
  Equation out{n, {{0, dc.vertical(p, q - 1)}}};
  if (r >= 2) out.terms.push_back({1, Scalar(parity_sign(q)) * dc.horizontal(p - 1, q)});
  Mat om = assemble(sizes, {out});
  if (eqs.empty()) return image_basis(om);
  Subspace k = kernel_basis(assemble(sizes, eqs));
  std::vector<Vec> imgs;
  for (const auto& v : k.basis) imgs.push_back(om * v);
  return span_of(n, imgs);
}

}  // namespace

std::size_t DoubleComplex::dim(long p, long q) const {
  if (p < 0 || q < 0 || p >= static_cast<long>(P) || q >= static_cast<long>(Q)) return 0;
  return dims[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
}

Mat DoubleComplex::vertical(long p, long q) const {
  if (dim(p, q) == 0 || dim(p, q + 1) == 0) return Mat(dim(p, q + 1), dim(p, q));
  return d1[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
}

Mat DoubleComplex::horizontal(long p, long q) const {
  if (dim(p, q) == 0 || dim(p + 1, q) == 0) return Mat(dim(p + 1, q), dim(p, q));
  return d2[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
}

DoubleComplex make_double_complex(std::vector<std::vector<std::size_t>> dims) {
  DoubleComplex dc;
  dc.P = dims.size();
  dc.Q = dims.empty() ? 0 : dims.front().size();
  for (const auto& col : dims)
    if (col.size() != dc.Q) throw ValidationFailure("double complex: ragged dimension grid");
  dc.dims = std::move(dims);
  dc.d1.assign(dc.P, std::vector<Mat>(dc.Q));
  dc.d2.assign(dc.P, std::vector<Mat>(dc.Q));
  for (std::size_t p = 0; p < dc.P; ++p)
    for (std::size_t q = 0; q < dc.Q; ++q) {
      long lp = static_cast<long>(p), lq = static_cast<long>(q);
      dc.d1[p][q] = Mat(dc.dim(lp, lq + 1), dc.dim(lp, lq));
      dc.d2[p][q] = Mat(dc.dim(lp + 1, lq), dc.dim(lp, lq));
    }
  return dc;
}

DoubleComplexReport validate_double_complex(const DoubleComplex& dc) {
  DoubleComplexReport rep;
  auto fail = [&](const std::string& s) {
    rep.ok = false;
    rep.violations.push_back(s);
  };
  if (dc.dims.size() != dc.P || dc.d1.size() != dc.P || dc.d2.size() != dc.P) {
    fail("grid size mismatch");
    return rep;
  }
  for (std::size_t p = 0; p < dc.P; ++p)
    if (dc.dims[p].size() != dc.Q || dc.d1[p].size() != dc.Q || dc.d2[p].size() != dc.Q) {
      fail("grid size mismatch in column " + std::to_string(p));
      return rep;
    }
  bool shapes = true;
  for (std::size_t p = 0; p < dc.P; ++p)
    for (std::size_t q = 0; q < dc.Q; ++q) {
      long lp = static_cast<long>(p), lq = static_cast<long>(q);
      const Mat& a = dc.d1[p][q];
      const Mat& b = dc.d2[p][q];
      std::string at = "(" + std::to_string(p) + "," + std::to_string(q) + ")";
      if (a.rows() != dc.dim(lp, lq + 1) || a.cols() != dc.dim(lp, lq)) {
        fail("d1 shape at " + at);
        shapes = false;
      }
      if (b.rows() != dc.dim(lp + 1, lq) || b.cols() != dc.dim(lp, lq)) {
        fail("d2 shape at " + at);
        shapes = false;
      }
    }
  if (!shapes) return rep;
  for (std::size_t p = 0; p < dc.P; ++p)
    for (std::size_t q = 0; q < dc.Q; ++q) {
      long lp = static_cast<long>(p), lq = static_cast<long>(q);
      std::string at = "(" + std::to_string(p) + "," + std::to_string(q) + ")";
      if (!(dc.vertical(lp, lq + 1) * dc.vertical(lp, lq)).is_zero()) fail("d1 d1 != 0 at " + at);
      if (!(dc.horizontal(lp + 1, lq) * dc.horizontal(lp, lq)).is_zero()) fail("d2 d2 != 0 at " + at);
      if (!(dc.vertical(lp + 1, lq) * dc.horizontal(lp, lq) == dc.horizontal(lp, lq + 1) * dc.vertical(lp, lq)))
        fail("d1 d2 != d2 d1 at " + at);
    }
  return rep;
}

TotalComplex total_complex(const DoubleComplex& dc) {
  TotalComplex t;
  if (dc.P == 0 || dc.Q == 0) return t;
  const long top = static_cast<long>(dc.P + dc.Q - 2);
  auto cell_offsets = [&](long m) {
    std::vector<std::pair<long, std::size_t>> off;  // (p, offset)
    std::size_t o = 0;
    for (long p = 0; p < static_cast<long>(dc.P); ++p) {
      long q = m - p;
      if (q < 0 || q >= static_cast<long>(dc.Q)) continue;
      off.emplace_back(p, o);
      o += dc.dim(p, q);
    }
    return std::make_pair(off, o);
  };
  for (long m = 0; m <= top; ++m) t.dims.push_back(cell_offsets(m).second);
  for (long m = 0; m <= top; ++m) {
    auto [src, ns] = cell_offsets(m);
    auto [dst, nd] = cell_offsets(m + 1);
    Mat qm(m + 1 <= top ? nd : 0, ns);
    if (m + 1 <= top) {
      auto dst_off = [&](long p) -> std::optional<std::size_t> {
        for (auto [pp, o] : dst)
          if (pp == p) return o;
        return std::nullopt;
      };
      for (auto [p, so] : src) {
        long q = m - p;
        if (auto o = dst_off(p)) {
          Mat v = dc.vertical(p, q);
          for (std::size_t i = 0; i < v.rows(); ++i)
            for (std::size_t j = 0; j < v.cols(); ++j) qm(*o + i, so + j) += v(i, j);
        }
        if (auto o = dst_off(p + 1)) {
          Mat h = dc.horizontal(p, q);
          int s = parity_sign(q);
          for (std::size_t i = 0; i < h.rows(); ++i)
            for (std::size_t j = 0; j < h.cols(); ++j) qm(*o + i, so + j) += s * h(i, j);
        }
      }
    }
    t.q.push_back(std::move(qm));
  }
  for (std::size_t m = 0; m + 1 < t.q.size(); ++m)
    if (!(t.q[m + 1] * t.q[m]).is_zero()) throw InvariantViolation("Q^2 != 0 on the total complex");
  return t;
}

QuotientSpace total_cohomology(const DoubleComplex& dc, std::size_t m) {
  TotalComplex t = total_complex(dc);
  if (m >= t.dims.size()) return quotient(Subspace{0, {}}, Subspace{0, {}});
  Subspace z = t.q[m].rows() == 0 ? full_space(t.dims[m]) : kernel_basis(t.q[m]);
  Subspace b = m == 0 ? Subspace{t.dims[m], {}} : image_basis(t.q[m - 1]);
  return quotient(z, b);
}

std::vector<std::vector<std::size_t>> Page::dims() const {
  std::vector<std::vector<std::size_t>> d;
  for (const auto& col : cells) {
    d.emplace_back();
    for (const auto& c : col) d.back().push_back(c.dim());
  }
  return d;
}

Page page(const DoubleComplex& dc, std::size_t r) {
  Page pg;
  pg.r = r;
  pg.cells.assign(dc.P, std::vector<QuotientSpace>(dc.Q));
  pg.lifts.assign(dc.P, std::vector<std::vector<Vec>>(dc.Q));
  for (std::size_t p = 0; p < dc.P; ++p)
    for (std::size_t q = 0; q < dc.Q; ++q) {
      long lp = static_cast<long>(p), lq = static_cast<long>(q);
      Subspace z = z_space(dc, r, lp, lq);
      Subspace b = b_space(dc, r, lp, lq);
      pg.cells[p][q] = quotient(z, b);
      if (r < 2) {
        pg.lifts[p][q].assign(pg.cells[p][q].dim(), Vec());
        continue;
      }
      std::vector<std::size_t> sizes;
      Mat m = z_system(dc, r, lp, lq, sizes);
      std::size_t n = sizes[0];
      Mat head = m.block(0, 0, m.rows(), n);
      Mat rest = m.block(0, n, m.rows(), m.cols() - n);
      for (const auto& rep : pg.cells[p][q].representatives()) {
        Vec rhs = Scalar(-1) * (head * rep);
        auto y = solve(rest, rhs);
        if (!y) throw InvariantViolation("zig-zag lift failed for a Z_r representative");
        pg.lifts[p][q].push_back(*y);
      }
    }
  return pg;
}

Mat page_differential(const DoubleComplex& dc, const Page& pg, std::size_t p, std::size_t q) {
  const std::size_t r = pg.r;
  long lp = static_cast<long>(p), lq = static_cast<long>(q);
  if (r == 0) return dc.vertical(lp, lq);
  long tp = lp + static_cast<long>(r), tq = lq + 1 - static_cast<long>(r);
  const QuotientSpace& src = pg.cells[p][q];
  if (dc.dim(tp, tq) == 0) return Mat(0, src.dim());
  const QuotientSpace& dst = pg.cells[static_cast<std::size_t>(tp)][static_cast<std::size_t>(tq)];
  Mat out(dst.dim(), src.dim());
  // last chain element c_{r-1} sits at (p+r-1, q-r+1)
  long lcp = lp + static_cast<long>(r) - 1, lcq = lq - static_cast<long>(r) + 1;
  std::size_t last_dim = dc.dim(lcp, lcq);
  Mat h = Scalar(parity_sign(lcq)) * dc.horizontal(lcp, lcq);
  for (std::size_t i = 0; i < src.dim(); ++i) {
    Vec c_last;
    if (r == 1) {
      c_last = src.representatives()[i];
    } else {
      const Vec& lift = pg.lifts[p][q][i];
      c_last = slice(lift, lift.size() - last_dim, last_dim);
    }
    Vec img = last_dim == 0 ? Vec(dc.dim(tp, tq)) : h * c_last;
    if (!dst.in_numerator(img)) throw InvariantViolation("d_r image is not an r-cocycle");
    Vec coords = dst.reduce(img);
    for (std::size_t k = 0; k < dst.dim(); ++k) out(k, i) = coords[k];
  }
  return out;
}

std::vector<std::vector<std::size_t>> page_cohomology_dims(const DoubleComplex& dc, const Page& pg) {
  const std::size_t r = pg.r;
  std::vector<std::vector<std::size_t>> h(dc.P, std::vector<std::size_t>(dc.Q));
  for (std::size_t p = 0; p < dc.P; ++p)
    for (std::size_t q = 0; q < dc.Q; ++q) {
      std::size_t out_rank = rank(page_differential(dc, pg, p, q));
      long sp = static_cast<long>(p) - static_cast<long>(r), sq = static_cast<long>(q) + static_cast<long>(r) - 1;
      std::size_t in_rank = 0;
      if (dc.dim(sp, sq) > 0)
        in_rank = rank(page_differential(dc, pg, static_cast<std::size_t>(sp), static_cast<std::size_t>(sq)));
      h[p][q] = pg.cells[p][q].dim() - out_rank - in_rank;
    }
  return h;
}

Mat page_differential(const DoubleComplex& dc, std::size_t r, std::size_t p, std::size_t q) {
  Page pg = page(dc, r);
  Mat d = page_differential(dc, pg, p, q);
  long tp = static_cast<long>(p + r), tq = static_cast<long>(q) + 1 - static_cast<long>(r);
  if (dc.dim(tp, tq) > 0) {
    Mat d_next = page_differential(dc, pg, static_cast<std::size_t>(tp), static_cast<std::size_t>(tq));
    if (!(d_next * d).is_zero()) throw InvariantViolation("d_r o d_r != 0");
  }
  auto h = page_cohomology_dims(dc, pg);
  Page next = page(dc, r + 1);
  if (h != next.dims()) throw InvariantViolation("page r+1 differs from H(d_r)");
  return d;
}

std::size_t stable_page_index(const DoubleComplex& dc) { return std::max(dc.P, dc.Q) + 1; }

DoubleComplex transpose(const DoubleComplex& dc) {
  DoubleComplex t;
  t.P = dc.Q;
  t.Q = dc.P;
  t.dims.assign(t.P, std::vector<std::size_t>(t.Q));
  t.d1.assign(t.P, std::vector<Mat>(t.Q));
  t.d2.assign(t.P, std::vector<Mat>(t.Q));
  for (std::size_t a = 0; a < t.P; ++a)
    for (std::size_t b = 0; b < t.Q; ++b) {
      t.dims[a][b] = dc.dims[b][a];
      t.d1[a][b] = dc.d2[b][a];
      t.d2[a][b] = dc.d1[b][a];
    }
  return t;
}

namespace {

std::vector<std::size_t> graded_infinity_dims(const DoubleComplex& dc) {
  Page inf = page(dc, stable_page_index(dc));
  std::vector<std::size_t> g(dc.P + dc.Q - 1, 0);
  for (std::size_t p = 0; p < dc.P; ++p)
    for (std::size_t q = 0; q < dc.Q; ++q) g[p + q] += inf.cells[p][q].dim();
  return g;
}

}  // namespace

AbutmentReport abutment_check(const DoubleComplex& dc) {
  AbutmentReport rep;
  if (dc.P == 0 || dc.Q == 0) return rep;
  TotalComplex t = total_complex(dc);
  for (std::size_t m = 0; m < t.dims.size(); ++m) rep.total_dims.push_back(total_cohomology(dc, m).dim());
  rep.graded_dims = graded_infinity_dims(dc);
  DoubleComplex tr = transpose(dc);
  rep.transposed_dims = graded_infinity_dims(tr);
  for (std::size_t m = 0; m < t.dims.size(); ++m)
    if (total_cohomology(tr, m).dim() != rep.total_dims[m]) rep.ok = false;
  rep.ok = rep.ok && rep.graded_dims == rep.total_dims && rep.transposed_dims == rep.total_dims;
  return rep;
}

namespace {

// Random element of span(basis) with small integer weights.
Vec random_combination(std::mt19937& rng, const std::vector<Vec>& basis, std::size_t n) {
  std::uniform_int_distribution<int> coef(-2, 2);
  Vec v(n);
  for (const auto& b : basis) {
    int c = coef(rng);
    if (c != 0) v = v + Scalar(c) * b;
  }
  return v;
}

// Coefficient of X(i, j) for an a x b unknown matrix, row-major.
std::size_t var(std::size_t i, std::size_t j, std::size_t b) { return i * b + j; }

}  // namespace

DoubleComplex random_double_complex(std::uint32_t seed, std::size_t P, std::size_t Q, std::size_t max_cell_dim) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> dimd(0, max_cell_dim);
  std::vector<std::vector<std::size_t>> dims(P, std::vector<std::size_t>(Q));
  for (auto& col : dims)
    for (auto& d : col) d = dimd(rng);
  DoubleComplex dc = make_double_complex(dims);
  std::bernoulli_distribution thin(0.3);
  // d1 column by column: each map kills the image of the previous one
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t q = 0; q + 1 < Q; ++q) {
      long lp = static_cast<long>(p), lq = static_cast<long>(q);
      std::size_t a = dc.dim(lp, lq + 1), b = dc.dim(lp, lq);
      if (a == 0 || b == 0) continue;
      Mat prev = dc.vertical(lp, lq - 1);  // b x dim(p, q-1)
      Subspace rows = prev.cols() == 0 ? full_space(b) : kernel_basis(prev.transpose());
      Mat x(a, b);
      for (std::size_t i = 0; i < a; ++i) {
        if (thin(rng)) continue;
        Vec v = random_combination(rng, rows.basis, b);
        for (std::size_t j = 0; j < b; ++j) x(i, j) = v[j];
      }
      dc.d1[p][q] = x;
    }
  // d2 column by column from the linear constraints
  for (std::size_t p = 0; p + 1 < P; ++p) {
    long lp = static_cast<long>(p);
    std::vector<std::size_t> off(Q + 1, 0);
    for (std::size_t q = 0; q < Q; ++q) off[q + 1] = off[q] + dc.dim(lp + 1, static_cast<long>(q)) * dc.dim(lp, static_cast<long>(q));
    std::size_t nvar = off[Q];
    if (nvar == 0) continue;
    std::vector<Vec> rows;
    for (std::size_t q = 0; q < Q; ++q) {
      long lq = static_cast<long>(q);
      std::size_t a = dc.dim(lp + 1, lq), b = dc.dim(lp, lq);
      // d1(p+1,q) X_q - X_{q+1} d1(p,q) = 0
      if (q + 1 < Q) {
        Mat up = dc.vertical(lp + 1, lq);  // a' x a
        Mat dn = dc.vertical(lp, lq);      // b' x b
        std::size_t a2 = dc.dim(lp + 1, lq + 1);
        std::size_t b2 = dc.dim(lp, lq + 1);
        for (std::size_t i = 0; i < a2; ++i)
          for (std::size_t j = 0; j < b; ++j) {
            Vec row(nvar);
            for (std::size_t k = 0; k < a; ++k) row[off[q] + var(k, j, b)] += up(i, k);
            for (std::size_t k = 0; k < b2; ++k) row[off[q + 1] + var(i, k, b2)] -= dn(k, j);
            if (!is_zero(row)) rows.push_back(std::move(row));
          }
      }
      // X_q d2(p-1, q) = 0
      Mat prev = dc.horizontal(lp - 1, lq);  // b x c
      for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < prev.cols(); ++j) {
          Vec row(nvar);
          for (std::size_t k = 0; k < b; ++k) row[off[q] + var(i, k, b)] += prev(k, j);
          if (!is_zero(row)) rows.push_back(std::move(row));
        }
    }
    Subspace sol = rows.empty() ? full_space(nvar) : kernel_basis(Mat::from_rows(rows, nvar));
    Vec x = random_combination(rng, sol.basis, nvar);
    for (std::size_t q = 0; q < Q; ++q) {
      long lq = static_cast<long>(q);
      std::size_t a = dc.dim(lp + 1, lq), b = dc.dim(lp, lq);
      Mat m(a, b);
      for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < b; ++j) m(i, j) = x[off[q] + var(i, j, b)];
      dc.d2[p][q] = m;
    }
  }
  return dc;
}

}  // namespace lagcoh
