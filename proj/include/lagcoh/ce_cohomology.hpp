#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lagcoh/exact_linalg.hpp"
#include "lagcoh/lie_algebra.hpp"

namespace lagcoh {

// Finite-dimensional module: rho[i] is the matrix of e_i acting on R^dim.
struct GModule {
  std::size_t dim = 0;
  std::vector<Mat> rho;
  std::vector<std::string> basis_labels;  // optional
};

GModule trivial_module(const StructureConstants& g, std::size_t dim = 1);

struct ModuleReport {
  bool ok = true;
  std::vector<std::pair<std::size_t, std::size_t>> violations;  // (i, j), i < j
};

// Checks rho_i rho_j - rho_j rho_i = sum_k c^k_ij rho_k.
ModuleReport validate_module(const StructureConstants& g, const GModule& a);

using IndexTuple = std::vector<std::size_t>;

// Strictly increasing q-tuples of {0..n-1} in lexicographic order.
std::vector<IndexTuple> increasing_tuples(std::size_t n, std::size_t q);

struct Cochain {
  std::size_t degree = 0;
  std::size_t module_dim = 0;
  std::map<IndexTuple, Vec> components;  // only nonzero components stored

  const Vec* at(const IndexTuple& t) const;
};

// Coordinates: tuples in lexicographic order, module index fastest.
Vec to_coordinates(const Cochain& c, std::size_t n);
Cochain from_coordinates(const Vec& v, std::size_t n, std::size_t q, std::size_t m);
std::size_t cochain_space_dim(std::size_t n, std::size_t q, std::size_t m);

// Matrix of delta: C^q -> C^{q+1}.  Zero-size outside 0 <= q <= n.
Mat ce_differential(const StructureConstants& g, const GModule& a, std::size_t q);

struct CohomologyResult {
  std::size_t degree = 0;
  QuotientSpace quotient;
  std::vector<Cochain> representatives;
  std::size_t dim() const { return quotient.dim(); }
};

CohomologyResult cohomology(const StructureConstants& g, const GModule& a, std::size_t q);

bool is_cocycle(const StructureConstants& g, const GModule& a, const Cochain& z);
// b with delta b = z, if one exists.  z must be a cocycle of degree >= 1.
std::optional<Cochain> coboundary_witness(const StructureConstants& g, const GModule& a, const Cochain& z);

std::string str(const Cochain& c, const StructureConstants& g);

}  // namespace lagcoh
