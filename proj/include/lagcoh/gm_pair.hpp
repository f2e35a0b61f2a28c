#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "lagcoh/ce_cohomology.hpp"
#include "lagcoh/lie_algebra.hpp"
#include "lagcoh/symbolic.hpp"

namespace lagcoh {

struct GMPair {
  StructureConstants algebra;
  ChartPtr chart;
  std::vector<VectorFieldExpr> fields;  // one per basis element
  bool transitive = false;
  // Optional equivariant choice of stability generator: an algebra-valued
  // function s(x) with sum_i s^i(x) X_i(x) = 0.  Used to normalize
  // restriction values; without it the kernel basis at each point is used.
  std::optional<std::vector<Expr>> stabilizer;
};

struct PairReport {
  bool ok = true;
  std::vector<std::pair<std::size_t, std::size_t>> violations;
};

PairReport validate_pair(const GMPair& p);

// Function-valued cochains, components indexed by algebra basis.
using FunctionCochain1 = std::vector<Expr>;
using FunctionCochain2 = std::map<std::pair<std::size_t, std::size_t>, Expr>;  // i < j

FunctionCochain1 delta0(const GMPair& p, const Expr& f);
// (delta a)_ij = X_i a_j - X_j a_i - sum_k c^k_ij a_k
FunctionCochain2 delta1(const GMPair& p, const FunctionCochain1& a);
bool is_function_cocycle(const GMPair& p, const FunctionCochain1& a);

// (pi w)_i = w contracted with X_i.  For closed w also checks that pi w is
// a cocycle and that L_{X_i} w = d (pi w)_i.
FunctionCochain1 pi_map(const GMPair& p, const OneForm& w);

// A finite-dimensional submodule of the functions on the chart.
struct FunctionModule {
  GModule module;
  std::vector<Expr> basis;
  ChartPtr chart;

  std::optional<Vec> coordinates(const Expr& f) const;
  Cochain cochain(const FunctionCochain1& a) const;  // degree-1 cochain in module coordinates
};

constexpr std::size_t default_closure_cap = 64;

FunctionModule closure_module(const GMPair& p, const std::vector<Expr>& seeds,
                              std::size_t cap = default_closure_cap);

// Functions in the ansatz annihilated by every field.
std::vector<Expr> invariant_functions(const GMPair& p, AnsatzSpec ansatz);

struct InvariantForms {
  std::vector<OneForm> closed_invariant;      // a basis
  QuotientSpace h1_inv;                       // closed invariant / d(invariant functions)
  std::vector<OneForm> h1_inv_representatives;
  // Harmonic parts (coefficients of d(angle)) reached by closed invariant
  // forms, as a subspace of R^{#angles}.
  Subspace harmonic_image;
};

InvariantForms invariant_closed_forms(const GMPair& p, AnsatzSpec ansatz);

Subspace stability_subalgebra(const GMPair& p, const Point& point);

struct Restriction {
  std::vector<Vec> stability_basis;  // at the point
  Vec values;                        // alpha contracted with each basis vector
};

// Requires delta alpha = 0.  If the pair is flagged transitive and carries
// a stabilizer section, constancy over the supplied extra points is checked.
Restriction restrict_cocycle(const GMPair& p, const FunctionCochain1& alpha, const Point& point,
                             const std::vector<Point>& extra_points = {});

// Restriction of constant cochain values t (no cocycle check).
Vec restrict_values(const GMPair& p, const std::vector<Vec>& stability_basis, const FunctionCochain1& alpha,
                    const Point& point);

std::vector<Vec> stability_basis_at(const GMPair& p, const Point& point);

}  // namespace lagcoh
