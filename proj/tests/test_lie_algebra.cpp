#include <doctest.h>

#include "lagcoh/errors.hpp"
#include "lagcoh/lie_algebra.hpp"
#include "support.hpp"

using namespace lagcoh;

namespace {

std::vector<StructureConstants> catalog_algebras() {
  return {catalog("abelian", {.n = 1}), catalog("abelian", {.n = 3}), catalog("l3"), catalog("so3"),
          catalog("poincare", {.c = Scalar(1)}), catalog("poincare", {.c = Scalar(3, 2)}), catalog("galilean")};
}

Vec random_vec(gen::Rng& r, std::size_t n) {
  Vec v(n);
  for (auto& e : v) e = r.rational();
  return v;
}

Vec unit(std::size_t n, std::size_t i) {
  Vec v(n);
  v[i] = 1;
  return v;
}

// Spacetime fields typed in directly; p0 = d/dt, p_i = d/dx^i,
// B_i = x^i/c^2 d/dt + t d/dx^i, L_i as the rotations of R^3.
std::vector<VectorFieldExpr> hand_fields(const ChartPtr& ch, const std::string& inv_c2) {
  std::vector<std::vector<std::string>> f = {
      {"1", "0", "0", "0"},
      {"0", "1", "0", "0"},
      {"0", "0", "1", "0"},
      {"0", "0", "0", "1"},
      {inv_c2 + "*x1", "t", "0", "0"},
      {inv_c2 + "*x2", "0", "t", "0"},
      {inv_c2 + "*x3", "0", "0", "t"},
      {"0", "0", "x3", "-x2"},
      {"0", "-x3", "0", "x1"},
      {"0", "x2", "-x1", "0"},
  };
  std::vector<VectorFieldExpr> out;
  for (const auto& comps : f) {
    VectorFieldExpr x{ch, {}};
    for (const auto& s : comps) x.components.push_back(parse_expr(ch, s));
    out.push_back(x);
  }
  return out;
}

}  // namespace

TEST_CASE("Jacobi examples") {
  CHECK(jacobi_check(catalog("abelian", {.n = 4})).ok);
  CHECK(jacobi_check(catalog("l3")).ok);
  CHECK(jacobi_check(catalog("so3")).ok);

  StructureConstants bad({"a", "b", "c"});
  bad.set(0, 1, 2, 1);
  bad.set(1, 2, 0, 1);
  bad.set(0, 2, 2, 1);
  auto rep = jacobi_check(bad);
  CHECK_FALSE(rep.ok);
  CHECK_FALSE(rep.violations.empty());
}

TEST_CASE("catalog entries") {
  auto ab = catalog("abelian", {.n = 3});
  CHECK(ab.dim() == 3);
  CHECK(ab.entries().empty());

  auto l3 = catalog("l3");
  CHECK(bracket(l3, unit(3, 0), unit(3, 1)) == unit(3, 2));
  CHECK(is_zero(bracket(l3, unit(3, 1), unit(3, 2))));
  CHECK(is_zero(bracket(l3, unit(3, 2), unit(3, 0))));

  auto so3 = catalog("so3");
  CHECK(bracket(so3, unit(3, 0), unit(3, 1)) == unit(3, 2));
  CHECK(bracket(so3, unit(3, 1), unit(3, 2)) == unit(3, 0));
  CHECK(bracket(so3, unit(3, 2), unit(3, 0)) == unit(3, 1));

  auto gal = catalog("galilean");
  for (std::size_t i = 1; i <= 3; ++i)
    for (std::size_t j = 4; j <= 6; ++j) {
      CHECK(is_zero(bracket(gal, unit(10, i), unit(10, j))));
      for (std::size_t k = 4; k <= 6; ++k) CHECK(is_zero(bracket(gal, unit(10, j), unit(10, k))));
    }

  CHECK_THROWS_AS(catalog("sl2"), UnknownName);
  CHECK_THROWS_AS(catalog("abelian"), BadParams);
  CHECK_THROWS_AS(catalog("poincare", {.c = Scalar(0)}), BadParams);
}

TEST_CASE("poincare brackets agree with directly commuted fields") {
  auto ch = spacetime_chart();
  for (auto [c, inv] : std::vector<std::pair<Scalar, std::string>>{{Scalar(1), "1"}, {Scalar(2), "1/4"}}) {
    auto g = catalog("poincare", {.c = c});
    auto f = hand_fields(ch, inv);
    const std::size_t n = f.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        VectorFieldExpr rhs{ch, std::vector<Expr>(4, Expr(ch, 0))};
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t mu = 0; mu < 4; ++mu) rhs.components[mu] += g.c(i, j, k) * f[k].components[mu];
        CHECK(bracket(f[i], f[j]) == rhs);
      }
    // [p_i, B_i] = (1/c^2) p0 with the homomorphism convention [X_a, X_b] = c^k_ab X_k
    for (std::size_t i = 1; i <= 3; ++i) CHECK(g.c(i, i + 3, 0) == 1 / (c * c));
  }
}

TEST_CASE("galilean is the contraction of poincare") {
  auto gal = catalog("galilean");
  auto p1 = catalog("poincare", {.c = Scalar(1)});
  auto p3 = catalog("poincare", {.c = Scalar(3)});
  const std::size_t n = gal.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (p1.c(i, j, k) == p3.c(i, j, k)) {
          CHECK(gal.c(i, j, k) == p1.c(i, j, k));
        } else {
          // a 1/c^2 term
          CHECK(p3.c(i, j, k) * 9 == p1.c(i, j, k));
          CHECK(gal.c(i, j, k) == 0);
        }
      }
  // the galilean fields themselves (B_i = t d/dx^i)
  auto ch = spacetime_chart();
  auto f = hand_fields(ch, "0");
  CHECK(derive_structure_constants(spacetime_basis_names(), f) == gal);
}

TEST_CASE("every catalog algebra satisfies Jacobi") {
  for (const auto& g : catalog_algebras()) CHECK(jacobi_check(g).ok);
}

TEST_CASE("property: bracket antisymmetry and bilinearity") {
  gen::Rng r(31);
  for (const auto& g : catalog_algebras()) {
    const std::size_t n = g.dim();
    for (int trial = 0; trial < 10; ++trial) {
      Vec x = random_vec(r, n), y = random_vec(r, n), z = random_vec(r, n);
      Scalar a = r.rational();
      CHECK(bracket(g, x, y) == Scalar(-1) * bracket(g, y, x));
      CHECK(bracket(g, x + a * z, y) == bracket(g, x, y) + a * bracket(g, z, y));
      auto jac = bracket(g, x, bracket(g, y, z)) + bracket(g, y, bracket(g, z, x)) + bracket(g, z, bracket(g, x, y));
      CHECK(is_zero(jac));
    }
  }
}

TEST_CASE("structure constants are stored antisymmetrically") {
  StructureConstants g({"a", "b"});
  g.set(1, 0, 0, 2);
  CHECK(g.c(0, 1, 0) == -2);
  CHECK(g.c(1, 0, 0) == 2);
  CHECK_THROWS_AS(g.set(0, 0, 1, 1), Error);
  CHECK_THROWS_AS(StructureConstants({"a", "a"}), Error);
}

TEST_CASE("derived constants reject fields that do not close") {
  auto ch = make_chart({{"x", CoordKind::Line}});
  std::vector<VectorFieldExpr> f = {{ch, {parse_expr(ch, "1")}}, {ch, {parse_expr(ch, "x^2")}}};
  CHECK_THROWS_AS(derive_structure_constants({"a", "b"}, f), ValidationFailure);
}
