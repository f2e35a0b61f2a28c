#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "lagcoh/exact_linalg.hpp"
#include "lagcoh/symbolic.hpp"

namespace lagcoh {

// Lie algebra given by structure constants [e_i, e_j] = sum_k c^k_ij e_k.
// Only i < j is stored; the other orderings follow by antisymmetry.
class StructureConstants {
 public:
  StructureConstants() = default;
  explicit StructureConstants(std::vector<std::string> basis_names);

  std::size_t dim() const { return names_.size(); }
  const std::vector<std::string>& basis_names() const { return names_; }
  std::optional<std::size_t> find(const std::string& name) const;

  Scalar c(std::size_t i, std::size_t j, std::size_t k) const;
  // Sets c^k_ij (and implicitly c^k_ji = -value).
  void set(std::size_t i, std::size_t j, std::size_t k, const Scalar& value);
  // Nonzero entries with i < j, keyed (i, j, k).
  const std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Scalar>& entries() const { return c_; }

  friend bool operator==(const StructureConstants& a, const StructureConstants& b) {
    return a.names_ == b.names_ && a.c_ == b.c_;
  }

 private:
  std::vector<std::string> names_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Scalar> c_;
};

struct JacobiReport {
  bool ok = true;
  std::vector<std::array<std::size_t, 4>> violations;  // (i, j, k, l)
};

JacobiReport jacobi_check(const StructureConstants& g);
Vec bracket(const StructureConstants& g, const Vec& x, const Vec& y);

struct CatalogParams {
  std::optional<std::size_t> n;     // abelian dimension
  std::optional<Scalar> c;          // poincare: speed of light
};

// abelian (n), l3, so3, poincare (c), galilean.  Poincare and Galilean
// constants are obtained by commuting their fundamental fields on R^4.
StructureConstants catalog(const std::string& name, const CatalogParams& params = {});

// Reads the structure constants off a family of vector fields closing into a
// Lie algebra; throws ValidationFailure if some bracket leaves their span.
StructureConstants derive_structure_constants(const std::vector<std::string>& names,
                                              const std::vector<VectorFieldExpr>& fields);

// Space-time chart (t, x1, x2, x3) and the fields of the Poincare family.
// With c absent the Galilean fields are returned.
ChartPtr spacetime_chart();
std::vector<VectorFieldExpr> spacetime_fields(const ChartPtr& chart, const std::optional<Scalar>& c);
std::vector<std::string> spacetime_basis_names();

}  // namespace lagcoh
