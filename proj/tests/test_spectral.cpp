#include <doctest.h>

#include "complexes.hpp"
#include "lagcoh/problem.hpp"
#include "lagcoh/spectral.hpp"

using namespace lagcoh;

namespace {

std::size_t max_degree(const DoubleComplex& dc) { return dc.P + dc.Q - 1; }

// Cellwise kernel/image dimensions of a family of maps, by the oracle rank.
std::size_t cell_homology(std::size_t dim, const Mat& out, const Mat& in) {
  std::size_t rout = out.rows() ? oracle::rank(out) : 0;
  std::size_t rin = in.cols() ? oracle::rank(in) : 0;
  return dim - rout - rin;
}

DoubleComplex zigzag() {
  return build_double_complex(load_problem(std::string(LAGCOH_FIXTURES) + "/zigzag.toml"), "zigzag");
}

}  // namespace

TEST_CASE("validation examples") {
  auto zero = make_double_complex({{2, 1}, {1, 3}});
  CHECK(validate_double_complex(zero).ok);
  auto single = make_double_complex({{1}});
  CHECK(validate_double_complex(single).ok);

  auto bad = make_double_complex({{1, 1}, {1, 1}});
  bad.d1[0][0](0, 0) = 1;
  bad.d2[0][0](0, 0) = 1;
  bad.d1[1][0](0, 0) = 1;  // d1 d2 = 1 but d2 d1 = 0
  auto rep = validate_double_complex(bad);
  CHECK_FALSE(rep.ok);
  CHECK_FALSE(rep.violations.empty());

  auto nil = make_double_complex({{1, 1, 1}});
  nil.d1[0][0](0, 0) = 1;
  nil.d1[0][1](0, 0) = 1;  // d1 d1 = 1
  CHECK_FALSE(validate_double_complex(nil).ok);
}

TEST_CASE("total cohomology examples") {
  auto single = make_double_complex({{1}});
  CHECK(total_cohomology(single, 0).dim() == 1);
  CHECK(total_cohomology(single, 1).dim() == 0);
  auto arrow = make_double_complex({{1, 1}});
  arrow.d1[0][0](0, 0) = 1;
  REQUIRE(validate_double_complex(arrow).ok);
  for (std::size_t m = 0; m < 3; ++m) CHECK(total_cohomology(arrow, m).dim() == 0);
}

TEST_CASE("pages: first page is cellwise d1 cohomology") {
  gen::Rng r(51);
  for (int trial = 0; trial < 20; ++trial) {
    auto b = gen::double_complex(r, 3, 3, 3);
    auto dims = page(b.dc, 1).dims();
    for (std::size_t p = 0; p < 3; ++p)
      for (std::size_t q = 0; q < 3; ++q) {
        long lp = static_cast<long>(p), lq = static_cast<long>(q);
        CHECK(dims[p][q] == cell_homology(b.dc.dim(lp, lq), b.dc.vertical(lp, lq), b.dc.vertical(lp, lq - 1)));
      }
    // transposed E1 = cellwise d2 cohomology
    auto tdims = page(transpose(b.dc), 1).dims();
    for (std::size_t p = 0; p < 3; ++p)
      for (std::size_t q = 0; q < 3; ++q) {
        long lp = static_cast<long>(p), lq = static_cast<long>(q);
        CHECK(tdims[q][p] ==
              cell_homology(b.dc.dim(lp, lq), b.dc.horizontal(lp, lq), b.dc.horizontal(lp - 1, lq)));
      }
  }
}

TEST_CASE("acyclic columns concentrate E2 in row zero") {
  // columns R -> R exact, horizontal identity maps
  auto dc = make_double_complex({{1, 1}, {1, 1}});
  dc.d1[0][0](0, 0) = 1;
  dc.d1[1][0](0, 0) = 1;
  dc.d2[0][0](0, 0) = 1;
  dc.d2[0][1](0, 0) = 1;
  REQUIRE(validate_double_complex(dc).ok);
  auto e2 = page(dc, 2).dims();
  auto einf = page(dc, stable_page_index(dc)).dims();
  CHECK(e2 == einf);
  for (std::size_t p = 0; p < 2; ++p) CHECK(e2[p][1] == 0);
  CHECK(abutment_check(dc).ok);
}

TEST_CASE("page differentials") {
  gen::Rng r(52);
  auto b = gen::double_complex(r, 3, 3, 3);
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = 0; q < 3; ++q) {
      long lp = static_cast<long>(p), lq = static_cast<long>(q);
      CHECK(page_differential(b.dc, 0, p, q) == b.dc.vertical(lp, lq));
    }

  // with d1 = 0, d_1 is d2 itself on E_1 = E_0
  auto h = make_double_complex({{2}, {1}});
  h.d2[0][0](0, 0) = 3;
  h.d2[0][0](0, 1) = 6;
  REQUIRE(validate_double_complex(h).ok);
  auto d1 = page_differential(h, 1, 0, 0);
  REQUIRE(d1.rows() == 1);
  REQUIRE(d1.cols() == 2);
  CHECK(oracle::rank(d1) == 1);
  CHECK(page(h, 2).dims()[0][0] == 1);
  CHECK(page(h, 2).dims()[1][0] == 0);
}

TEST_CASE("a nonzero second-page differential") {
  // E^{0,1} -> E^{1,1} <- E^{1,0} -> ... : a at (0,1), b at (1,0), c at (1,1), e at (2,0)
  // d2 a = c, d1 b = c, d2 b = e; d_2[a] = [e]
  auto dc = make_double_complex({{0, 1}, {1, 1}, {1, 0}});
  dc.d2[0][1](0, 0) = 1;
  dc.d1[1][0](0, 0) = 1;
  dc.d2[1][0](0, 0) = 1;
  REQUIRE(validate_double_complex(dc).ok);
  CHECK(zigzag() == dc);
  auto e2 = page(dc, 2).dims();
  CHECK(e2[0][1] == 1);
  CHECK(e2[2][0] == 1);
  auto d2 = page_differential(dc, 2, 0, 1);
  REQUIRE(d2.rows() == 1);
  REQUIRE(d2.cols() == 1);
  CHECK(d2(0, 0) != 0);
  auto e3 = page(dc, 3).dims();
  CHECK(e3[0][1] == 0);
  CHECK(e3[2][0] == 0);
  CHECK(page(dc, stable_page_index(dc)).dims() == e3);
  for (std::size_t m = 0; m < 4; ++m) CHECK(total_cohomology(dc, m).dim() == 0);
  CHECK(abutment_check(dc).ok);
}

TEST_CASE("transpose") {
  gen::Rng r(53);
  auto single = make_double_complex({{2}});
  CHECK(transpose(single) == single);
  for (int trial = 0; trial < 10; ++trial) {
    auto b = gen::double_complex(r, 3, 4, 3);
    CHECK(transpose(transpose(b.dc)) == b.dc);
    auto t = transpose(b.dc);
    for (std::size_t m = 0; m < max_degree(b.dc); ++m)
      CHECK(total_cohomology(t, m).dim() == total_cohomology(b.dc, m).dim());
  }
}

TEST_CASE("library generator produces valid complexes") {
  for (std::uint32_t seed = 0; seed < 20; ++seed) {
    auto dc = random_double_complex(seed, 1 + seed % 4, 1 + (seed / 4) % 4, 3);
    CHECK(validate_double_complex(dc).ok);
    CHECK(random_double_complex(seed, 1 + seed % 4, 1 + (seed / 4) % 4, 3) == dc);
    CHECK(abutment_check(dc).ok);
  }
}

TEST_CASE("property: pages and abutment on constructed complexes") {
  gen::Rng r(54);
  int higher = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t P = static_cast<std::size_t>(r.integer(1, 4)), Q = static_cast<std::size_t>(r.integer(1, 4));
    auto b = gen::double_complex(r, P, Q, 4);
    REQUIRE(validate_double_complex(b.dc).ok);
    auto tc = total_complex(b.dc);
    for (std::size_t m = 0; m + 1 < tc.q.size(); ++m) CHECK((tc.q[m + 1] * tc.q[m]).is_zero());
    for (std::size_t m = 0; m < b.h.size(); ++m) CHECK(total_cohomology(b.dc, m).dim() == b.h[m]);
    std::size_t s = stable_page_index(b.dc);
    CHECK(page(b.dc, s).dims() == page(b.dc, s + 1).dims());
    if (page(b.dc, 2).dims() != page(b.dc, s).dims()) ++higher;
    auto ab = abutment_check(b.dc);
    CHECK(ab.ok);
    for (std::size_t m = 0; m < b.h.size() && m < ab.graded_dims.size(); ++m) {
      CHECK(ab.graded_dims[m] == b.h[m]);
      CHECK(ab.transposed_dims[m] == b.h[m]);
    }
  }
  // the staircases must exercise differentials beyond d_1
  CHECK(higher > 3);
}
