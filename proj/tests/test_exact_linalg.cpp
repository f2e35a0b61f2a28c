#include <doctest.h>

#include "lagcoh/errors.hpp"
#include "lagcoh/exact_linalg.hpp"
#include "support.hpp"

using namespace lagcoh;

namespace {

Mat random_matrix(gen::Rng& r, std::size_t rows, std::size_t cols) {
  Mat m(rows, cols);
  // low-rank products show up often enough to exercise nontrivial kernels
  if (r.integer(0, 2) == 0 && rows > 1 && cols > 1) {
    std::size_t k = static_cast<std::size_t>(r.integer(1, static_cast<int>(std::min(rows, cols)) - 1));
    Mat a(rows, k), b(k, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < k; ++j) a(i, j) = r.rational(3, 3);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < cols; ++j) b(i, j) = r.rational(3, 3);
    return a * b;
  }
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = r.integer(0, 2) ? r.rational(4, 3) : Scalar(0);
  return m;
}

}  // namespace

TEST_CASE("kernel examples") {
  auto k0 = kernel_basis(Mat(2, 2));
  REQUIRE(k0.dim() == 2);
  CHECK(k0.basis[0] == Vec{1, 0});
  CHECK(k0.basis[1] == Vec{0, 1});
  CHECK(kernel_basis(Mat::identity(3)).dim() == 0);
  auto k = kernel_basis(Mat::from_rows({{1, 2}, {2, 4}}));
  REQUIRE(k.dim() == 1);
  CHECK(k.basis[0] == Vec{-2, 1});
}

TEST_CASE("image examples") {
  CHECK(image_basis(Mat(3, 2)).dim() == 0);
  CHECK(image_basis(Mat::identity(4)).dim() == 4);
  auto im = image_basis(Mat::from_rows({{1, 2}, {2, 4}}));
  REQUIRE(im.dim() == 1);
  CHECK(im.basis[0] == Vec{1, 2});
}

TEST_CASE("quotient examples") {
  Subspace r2{2, {{1, 0}, {0, 1}}};
  CHECK(quotient(r2, Subspace{2, {}}).dim() == 2);
  Subspace line{2, {{1, 0}}};
  CHECK(quotient(line, line).dim() == 0);
  Subspace r3{3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  auto q = quotient(r3, Subspace{3, {{1, 1, 0}}});
  CHECK(q.dim() == 2);
  CHECK(q.is_zero_class(Vec{2, 2, 0}));
  CHECK_FALSE(q.is_zero_class(Vec{1, 0, 0}));
  CHECK(q.reduce(Vec{1, 0, 0}) == q.reduce(Vec{0, -1, 0}));
  CHECK_THROWS_AS(quotient(line, Subspace{2, {{0, 1}}}), DenominatorNotContained);
}

TEST_CASE("solve examples") {
  auto x = solve(Mat::identity(2), Vec{1, 2});
  REQUIRE(x);
  CHECK(*x == Vec{1, 2});
  CHECK_FALSE(solve(Mat(2, 2), Vec{1, 0}));
  auto h = solve(Mat::from_rows({{2}}), Vec{3});
  REQUIRE(h);
  CHECK((*h)[0] == Scalar(3, 2));
}

TEST_CASE("scalar parsing") {
  CHECK(parse_scalar("-6/4") == Scalar(-3, 2));
  CHECK(parse_scalar(" 7 ") == Scalar(7));
  CHECK_THROWS_AS(parse_scalar("1/0"), ParseError);
  CHECK_THROWS_AS(parse_scalar("x"), ParseError);
  CHECK_THROWS_AS(parse_scalar(""), ParseError);
}

TEST_CASE("property: rank-nullity against an independent rank oracle") {
  gen::Rng r(11);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t rows = static_cast<std::size_t>(r.integer(1, 7)), cols = static_cast<std::size_t>(r.integer(1, 7));
    Mat m = random_matrix(r, rows, cols);
    auto k = kernel_basis(m);
    auto im = image_basis(m);
    CHECK(k.dim() + im.dim() == cols);
    CHECK(im.dim() == oracle::rank(m));
    CHECK(rank(m) == oracle::rank(m));
    for (const auto& v : k.basis) CHECK(is_zero(m * v));
    for (const auto& v : im.basis) CHECK(solve(m, v).has_value());
  }
}

TEST_CASE("property: solve(m, m x) reproduces m x") {
  gen::Rng r(12);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t rows = static_cast<std::size_t>(r.integer(1, 6)), cols = static_cast<std::size_t>(r.integer(1, 6));
    Mat m = random_matrix(r, rows, cols);
    Vec x(cols);
    for (auto& e : x) e = r.rational();
    Vec b = m * x;
    auto y = solve(m, b);
    REQUIRE(y);
    CHECK(m * *y == b);
  }
}

TEST_CASE("property: quotient dimension and reduction") {
  gen::Rng r(13);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = static_cast<std::size_t>(r.integer(1, 6));
    std::vector<Vec> zv, bv;
    std::size_t kz = static_cast<std::size_t>(r.integer(0, static_cast<int>(n)));
    for (std::size_t i = 0; i < kz; ++i) {
      Vec v(n);
      for (auto& e : v) e = r.rational();
      zv.push_back(v);
    }
    Subspace z = span_of(n, zv);
    for (int i = 0; i < r.integer(0, 3); ++i) {
      Vec v(n);
      for (const auto& b : z.basis) v = v + r.rational() * b;
      bv.push_back(v);
    }
    Subspace b = span_of(n, bv);
    auto q = quotient(z, b);
    CHECK(q.dim() + b.dim() == z.dim());
    for (const auto& v : b.basis) CHECK(q.is_zero_class(v));
    for (std::size_t i = 0; i < q.dim(); ++i) {
      Vec e(q.dim());
      e[i] = 1;
      CHECK(q.reduce(q.representatives()[i]) == e);
    }
  }
}

TEST_CASE("property: deterministic results") {
  gen::Rng r1(99), r2(99);
  for (int trial = 0; trial < 30; ++trial) {
    Mat a = random_matrix(r1, 5, 6), b = random_matrix(r2, 5, 6);
    REQUIRE(a == b);
    CHECK(kernel_basis(a).basis == kernel_basis(b).basis);
    CHECK(rref(a).reduced == rref(b).reduced);
  }
}

TEST_CASE("subspace operations") {
  Subspace a{3, {{1, 0, 0}, {0, 1, 0}}}, b{3, {{0, 1, 0}, {0, 0, 1}}};
  CHECK(sum(a, b).dim() == 3);
  auto i = intersection(a, b);
  REQUIRE(i.dim() == 1);
  CHECK(i.contains(Vec{0, 5, 0}));
  CHECK(contains(sum(a, b), a));
  CHECK_FALSE(contains(a, b));
  auto inv = inverse(Mat::from_rows({{1, 2}, {3, 4}}));
  REQUIRE(inv);
  CHECK(*inv * Mat::from_rows({{1, 2}, {3, 4}}) == Mat::identity(2));
  CHECK_FALSE(inverse(Mat::from_rows({{1, 2}, {2, 4}})));
}
