#include "lagcoh/exact_linalg.hpp"

#include <sstream>
#include <utility>

#include "lagcoh/errors.hpp"

namespace lagcoh {

Scalar parse_scalar(const std::string& text) {
  std::string t;
  for (char ch : text)
    if (ch != ' ' && ch != '\t') t.push_back(ch);
  if (t.empty()) throw ParseError("empty rational literal", 0);
  if (t[0] == '+') t.erase(0, 1);
  std::size_t slash = t.find('/');
  auto check_int = [&](const std::string& s, std::size_t offset) {
    std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (start == s.size()) throw ParseError("malformed rational '" + text + "'", offset);
    for (std::size_t i = start; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') throw ParseError("malformed rational '" + text + "'", offset + i);
  };
  if (slash == std::string::npos) {
    check_int(t, 0);
    return Scalar(mpz_class(t));
  }
  std::string num = t.substr(0, slash), den = t.substr(slash + 1);
  check_int(num, 0);
  check_int(den, slash + 1);
  mpz_class d(den);
  if (d == 0) throw ParseError("zero denominator in '" + text + "'", slash + 1);
  Scalar q(mpz_class(num), d);
  q.canonicalize();
  return q;
}

std::string to_string(const Scalar& s) { return s.get_str(); }

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Mat Mat::from_rows(const std::vector<Vec>& rows, std::size_t cols) {
  if (!rows.empty()) cols = rows[0].size();
  Mat m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error("ragged rows in Mat::from_rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Mat Mat::from_columns(const std::vector<Vec>& cols, std::size_t rows) {
  if (!cols.empty()) rows = cols[0].size();
  Mat m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw Error("ragged columns in Mat::from_columns");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

Vec Mat::row(std::size_t i) const {
  return Vec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
             data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

Vec Mat::column(std::size_t j) const {
  Vec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Mat Mat::transpose() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Mat::is_zero() const {
  for (const auto& x : data_)
    if (sgn(x) != 0) return false;
  return true;
}

Mat Mat::hstack(const Mat& right) const {
  if (right.rows_ != rows_) throw Error("hstack: row mismatch");
  Mat m(rows_, cols_ + right.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
    for (std::size_t j = 0; j < right.cols_; ++j) m(i, cols_ + j) = right(i, j);
  }
  return m;
}

Mat Mat::vstack(const Mat& below) const {
  if (below.cols_ != cols_) throw Error("vstack: column mismatch");
  Mat m(rows_ + below.rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
  for (std::size_t i = 0; i < below.rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(rows_ + i, j) = below(i, j);
  return m;
}

Mat Mat::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  Mat m(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
  return m;
}

bool operator==(const Mat& a, const Mat& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols_ != b.rows_) throw Error("matrix product: shape mismatch");
  Mat c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& x = a(i, k);
      if (sgn(x) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (sgn(b(k, j)) != 0) c(i, j) += x * b(k, j);
    }
  return c;
}

Vec operator*(const Mat& a, const Vec& v) {
  if (a.cols_ != v.size()) throw Error("matrix-vector product: shape mismatch");
  Vec r(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k)
      if (sgn(a(i, k)) != 0 && sgn(v[k]) != 0) r[i] += a(i, k) * v[k];
  return r;
}

Mat operator+(const Mat& a, const Mat& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error("matrix sum: shape mismatch");
  Mat c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
  return c;
}

Mat operator-(const Mat& a, const Mat& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error("matrix difference: shape mismatch");
  Mat c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
  return c;
}

Mat operator*(const Scalar& s, const Mat& a) {
  Mat c = a;
  for (auto& x : c.data_) x *= s;
  return c;
}

std::string to_string(const Mat& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j).get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

Vec operator+(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw Error("vector sum: length mismatch");
  Vec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Vec operator-(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw Error("vector difference: length mismatch");
  Vec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

Vec operator*(const Scalar& s, const Vec& a) {
  Vec r = a;
  for (auto& x : r) x *= s;
  return r;
}

bool is_zero(const Vec& v) {
  for (const auto& x : v)
    if (sgn(x) != 0) return false;
  return true;
}

Mat Subspace::matrix() const { return Mat::from_columns(basis, ambient_dim); }

std::optional<Vec> Subspace::coordinates(const Vec& v) const {
  if (v.size() != ambient_dim) throw Error("Subspace::coordinates: length mismatch");
  if (basis.empty()) {
    if (is_zero(v)) return Vec{};
    return std::nullopt;
  }
  return solve(matrix(), v);
}

bool Subspace::contains(const Vec& v) const { return coordinates(v).has_value(); }

RowEchelon rref(const Mat& m) {
  RowEchelon out;
  Mat a = m;
  const std::size_t R = a.rows(), C = a.cols();
  std::size_t r = 0;
  std::vector<std::size_t> nz;
  for (std::size_t c = 0; c < C && r < R; ++c) {
    std::size_t piv = R;
    for (std::size_t i = r; i < R; ++i)
      if (sgn(a(i, c)) != 0) {
        piv = i;
        break;
      }
    if (piv == R) continue;
    if (piv != r)
      for (std::size_t j = 0; j < C; ++j) swap(a(piv, j), a(r, j));
    Scalar inv = 1 / a(r, c);
    nz.clear();
    for (std::size_t j = c; j < C; ++j)
      if (sgn(a(r, j)) != 0) {
        a(r, j) *= inv;
        nz.push_back(j);
      }
    for (std::size_t i = 0; i < R; ++i) {
      if (i == r || sgn(a(i, c)) == 0) continue;
      Scalar f = a(i, c);
      for (std::size_t j : nz) a(i, j) -= f * a(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(a);
  return out;
}

std::size_t rank(const Mat& m) { return rref(m).pivots.size(); }

Subspace kernel_basis(const Mat& m) {
  Subspace k;
  k.ambient_dim = m.cols();
  RowEchelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vec v(m.cols());
    v[f] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, f);
    k.basis.push_back(std::move(v));
  }
  return k;
}

Subspace image_basis(const Mat& m) {
  Subspace im;
  im.ambient_dim = m.rows();
  RowEchelon e = rref(m);
  for (auto p : e.pivots) im.basis.push_back(m.column(p));
  if (im.dim() + (m.cols() - e.pivots.size()) != m.cols())
    throw InvariantViolation("rank-nullity failed");
  return im;
}

Subspace span_of(std::size_t ambient, const std::vector<Vec>& vectors) {
  Subspace s;
  s.ambient_dim = ambient;
  if (vectors.empty()) return s;
  Mat m = Mat::from_columns(vectors, ambient);
  RowEchelon e = rref(m);
  for (auto p : e.pivots) s.basis.push_back(vectors[p]);
  return s;
}

Subspace sum(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim != b.ambient_dim) throw Error("Subspace sum: ambient mismatch");
  std::vector<Vec> all = a.basis;
  all.insert(all.end(), b.basis.begin(), b.basis.end());
  return span_of(a.ambient_dim, all);
}

Subspace intersection(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim != b.ambient_dim) throw Error("Subspace intersection: ambient mismatch");
  Subspace out;
  out.ambient_dim = a.ambient_dim;
  if (a.basis.empty() || b.basis.empty()) return out;
  // x = A y = B z  <=>  [A | -B](y, z) = 0
  Mat A = a.matrix(), B = b.matrix();
  Mat M = A.hstack(Scalar(-1) * B);
  Subspace k = kernel_basis(M);
  std::vector<Vec> vs;
  for (const auto& kv : k.basis) {
    Vec y(kv.begin(), kv.begin() + static_cast<std::ptrdiff_t>(a.dim()));
    vs.push_back(A * y);
  }
  return span_of(a.ambient_dim, vs);
}

bool contains(const Subspace& big, const Subspace& small) {
  for (const auto& v : small.basis)
    if (!big.contains(v)) return false;
  return true;
}

std::optional<Vec> solve(const Mat& m, const Vec& rhs) {
  if (rhs.size() != m.rows()) throw Error("solve: rhs length mismatch");
  Mat aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = rhs[i];
  }
  RowEchelon e = rref(aug);
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  Vec x(m.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, m.cols());
  return x;
}

std::optional<Mat> inverse(const Mat& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  const std::size_t n = m.rows();
  RowEchelon e = rref(m.hstack(Mat::identity(n)));
  if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] != n - 1)) return std::nullopt;
  return e.reduced.block(0, n, n, n);
}

bool QuotientSpace::in_numerator(const Vec& v) const { return numerator_.contains(v); }

Vec QuotientSpace::reduce(const Vec& v) const {
  auto y = numerator_.coordinates(v);
  if (!y) throw Error("QuotientSpace::reduce: vector not in numerator");
  if (dim() == 0) return Vec{};
  return reduction_ * *y;
}

bool QuotientSpace::is_zero_class(const Vec& v) const { return is_zero(reduce(v)); }

QuotientSpace quotient(const Subspace& z, const Subspace& b) {
  if (z.ambient_dim != b.ambient_dim) throw Error("quotient: ambient dimension mismatch");
  QuotientSpace q;
  q.numerator_ = span_of(z.ambient_dim, z.basis);
  q.denominator_ = span_of(b.ambient_dim, b.basis);
  const std::size_t k = q.numerator_.dim();
  std::vector<Vec> ycols;
  for (const auto& bv : q.denominator_.basis) {
    auto y = q.numerator_.coordinates(bv);
    if (!y) throw DenominatorNotContained("quotient: denominator vector not in numerator");
    ycols.push_back(*y);
  }
  // Greedy extension of the denominator by unit vectors, read off from the
  // pivots of [Y | I].
  std::vector<Vec> square = ycols;
  std::vector<std::size_t> reps;
  if (k > 0) {
    Mat yi = Mat::from_columns(ycols, k).hstack(Mat::identity(k));
    for (auto p : rref(yi).pivots)
      if (p >= ycols.size()) {
        Vec e(k);
        e[p - ycols.size()] = 1;
        square.push_back(std::move(e));
        reps.push_back(p - ycols.size());
      }
  }
  if (square.size() != k) throw InvariantViolation("quotient: complement construction failed");
  for (auto j : reps) q.representatives_.push_back(q.numerator_.basis[j]);
  if (k > 0) {
    auto inv = inverse(Mat::from_columns(square, k));
    if (!inv) throw InvariantViolation("quotient: singular change of basis");
    const std::size_t nb = ycols.size();
    q.reduction_ = inv->block(nb, 0, k - nb, k);
  }
  if (q.dim() + q.denominator_.dim() != q.numerator_.dim())
    throw InvariantViolation("quotient: dimension count failed");
  return q;
}

}  // namespace lagcoh
