#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lagcoh/exact_linalg.hpp"

namespace lagcoh {

// First-quadrant grid E^{p,q}, 0 <= p < P, 0 <= q < Q.  d1 is vertical
// (q -> q+1), d2 horizontal (p -> p+1).  Maps leaving the grid have zero
// target and are stored with zero rows.
struct DoubleComplex {
  std::size_t P = 0, Q = 0;
  std::vector<std::vector<std::size_t>> dims;  // dims[p][q]
  std::vector<std::vector<Mat>> d1;            // d1[p][q]: E^{p,q} -> E^{p,q+1}
  std::vector<std::vector<Mat>> d2;            // d2[p][q]: E^{p,q} -> E^{p+1,q}

  std::size_t dim(long p, long q) const;
  // Shaped maps; zero matrices for cells outside the grid.
  Mat vertical(long p, long q) const;
  Mat horizontal(long p, long q) const;

  friend bool operator==(const DoubleComplex& a, const DoubleComplex& b) {
    return a.P == b.P && a.Q == b.Q && a.dims == b.dims && a.d1 == b.d1 && a.d2 == b.d2;
  }
};

// Zero maps of the right shapes.
DoubleComplex make_double_complex(std::vector<std::vector<std::size_t>> dims);

struct DoubleComplexReport {
  bool ok = true;
  std::vector<std::string> violations;
};

DoubleComplexReport validate_double_complex(const DoubleComplex& dc);

struct TotalComplex {
  std::vector<std::size_t> dims;  // D^m
  std::vector<Mat> q;             // Q_m: D^m -> D^{m+1}
};

// Q = (-1)^q d2 + d1 on the antidiagonals, cells ordered by increasing p.
TotalComplex total_complex(const DoubleComplex& dc);
QuotientSpace total_cohomology(const DoubleComplex& dc, std::size_t m);

struct Page {
  std::size_t r = 0;
  std::vector<std::vector<QuotientSpace>> cells;  // cells[p][q] = Z_r / B_r
  // lifts[p][q][i]: chain c_1 .. c_{r-1} completing representative i,
  // concatenated in order of increasing column.
  std::vector<std::vector<std::vector<Vec>>> lifts;

  std::vector<std::vector<std::size_t>> dims() const;
};

Page page(const DoubleComplex& dc, std::size_t r);
// Matrix of d_r: E_r^{p,q} -> E_r^{p+r, q+1-r} in the page representatives.
// Checks d_r o d_r = 0 and that the page r+1 dimensions equal H(d_r).
Mat page_differential(const DoubleComplex& dc, std::size_t r, std::size_t p, std::size_t q);
Mat page_differential(const DoubleComplex& dc, const Page& pg, std::size_t p, std::size_t q);
// Dimensions of H(d_r) on page r.
std::vector<std::vector<std::size_t>> page_cohomology_dims(const DoubleComplex& dc, const Page& pg);

std::size_t stable_page_index(const DoubleComplex& dc);  // max(P, Q) + 1

DoubleComplex transpose(const DoubleComplex& dc);

struct AbutmentReport {
  bool ok = true;
  std::vector<std::size_t> total_dims;       // dim H^m(Q)
  std::vector<std::size_t> graded_dims;      // sum_p dim E_inf^{p,m-p}
  std::vector<std::size_t> transposed_dims;  // same for the transposed filtration
};

AbutmentReport abutment_check(const DoubleComplex& dc);

// Random valid complex with the given grid, cell dimensions <= max_cell_dim.
// Entries are small integers; the same seed gives the same complex.
DoubleComplex random_double_complex(std::uint32_t seed, std::size_t P, std::size_t Q, std::size_t max_cell_dim);

}  // namespace lagcoh
