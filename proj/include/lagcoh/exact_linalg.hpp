#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace lagcoh {

using Scalar = mpq_class;
using Vec = std::vector<Scalar>;

Scalar parse_scalar(const std::string& text);
std::string to_string(const Scalar& s);

// Dense row-major rational matrix.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Mat identity(std::size_t n);
  static Mat from_rows(const std::vector<Vec>& rows, std::size_t cols = 0);
  static Mat from_columns(const std::vector<Vec>& cols, std::size_t rows = 0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vec row(std::size_t i) const;
  Vec column(std::size_t j) const;
  Mat transpose() const;
  bool is_zero() const;

  Mat hstack(const Mat& right) const;
  Mat vstack(const Mat& below) const;
  Mat block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

  friend bool operator==(const Mat& a, const Mat& b);
  friend Mat operator*(const Mat& a, const Mat& b);
  friend Vec operator*(const Mat& a, const Vec& v);
  friend Mat operator+(const Mat& a, const Mat& b);
  friend Mat operator-(const Mat& a, const Mat& b);
  friend Mat operator*(const Scalar& s, const Mat& a);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

std::string to_string(const Mat& m);

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(const Scalar& s, const Vec& a);
bool is_zero(const Vec& v);

struct Subspace {
  std::size_t ambient_dim = 0;
  std::vector<Vec> basis;

  std::size_t dim() const { return basis.size(); }
  // Columns are the basis vectors.
  Mat matrix() const;
  bool contains(const Vec& v) const;
  // Coordinates of v in the basis, if v lies in the span.
  std::optional<Vec> coordinates(const Vec& v) const;
};

struct RowEchelon {
  Mat reduced;
  std::vector<std::size_t> pivots;
};

// Reduced row echelon form; pivots are taken left to right, always the
// topmost remaining nonzero entry of the column.
RowEchelon rref(const Mat& m);
std::size_t rank(const Mat& m);

Subspace kernel_basis(const Mat& m);
Subspace image_basis(const Mat& m);
// Independent subset of the given vectors, in order of first appearance.
Subspace span_of(std::size_t ambient, const std::vector<Vec>& vectors);
Subspace sum(const Subspace& a, const Subspace& b);
Subspace intersection(const Subspace& a, const Subspace& b);
bool contains(const Subspace& big, const Subspace& small);

std::optional<Vec> solve(const Mat& m, const Vec& rhs);
std::optional<Mat> inverse(const Mat& m);

class QuotientSpace {
 public:
  QuotientSpace() = default;

  std::size_t ambient_dim() const { return numerator_.ambient_dim; }
  std::size_t dim() const { return representatives_.size(); }
  const Subspace& numerator() const { return numerator_; }
  const Subspace& denominator() const { return denominator_; }
  const std::vector<Vec>& representatives() const { return representatives_; }

  bool in_numerator(const Vec& v) const;
  // Coordinates of the class of v (v must lie in the numerator).
  Vec reduce(const Vec& v) const;
  bool is_zero_class(const Vec& v) const;

  friend QuotientSpace quotient(const Subspace& z, const Subspace& b);

 private:
  Subspace numerator_;
  Subspace denominator_;
  std::vector<Vec> representatives_;
  // Maps numerator-basis coordinates to quotient coordinates.
  Mat reduction_;
};

QuotientSpace quotient(const Subspace& z, const Subspace& b);

}  // namespace lagcoh
