#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lagcoh/ce_cohomology.hpp"
#include "lagcoh/errors.hpp"
#include "lagcoh/gm_pair.hpp"
#include "lagcoh/spectral.hpp"
#include "lagcoh/symbolic.hpp"

namespace lagcoh {

struct NotWeaklyInvariant : Error {
  std::size_t generator;
  std::string residue;
  NotWeaklyInvariant(std::size_t gen, const std::string& name, const std::string& res)
      : Error("not weakly invariant: delta_" + name + " L = " + res), generator(gen), residue(res) {}
};

struct Undetermined : Error {
  int stage;
  Undetermined(int s, const std::string& msg) : Error(msg), stage(s) {}
};

struct Truncation {
  int degree = 3;
  int fourier = 3;
  std::size_t closure_cap = default_closure_cap;
};

struct WeakInvarianceSplit {
  std::vector<OneForm> w;  // one closed form per generator
  Vec t;
};

// delta_i L = w_i . qdot + t_i, checked exactly.
WeakInvarianceSplit weak_invariance_split(const GMPair& p, const Expr& L);

// Psi(L) = t, an element of Z^1(G) = H^1(G).
Vec psi(const GMPair& p, const WeakInvarianceSplit& s);

enum class ClassState { Zero, NonZero, NotReached };
std::string to_string(ClassState s);

struct Phi1Result {
  ClassState state = ClassState::NotReached;
  Mat harmonic;                 // n x #angles
  FunctionCochain1 potentials;  // alpha_i, valid when every harmonic part is zero
};
Phi1Result phi1(const GMPair& p, const WeakInvarianceSplit& s, AnsatzSpec ansatz = {});

struct Phi2Result {
  ClassState state = ClassState::NotReached;
  Cochain f;                  // constant 2-cochain, trivial coefficients
  std::optional<Vec> t_prime; // delta t' = f when the class vanishes
  FunctionCochain1 alpha_adjusted;  // alpha - t'
};
Phi2Result phi2(const GMPair& p, const FunctionCochain1& alpha);

struct K3Witness {
  Vec c;          // harmonic coefficients of w = sum c_j d(angle_j)
  Vec t2;         // t'' in Z^1(G)
  Expr g;         // alpha' = pi(w) + t'' + delta g
};
struct K3Certificate {
  Point point;
  std::vector<Vec> stability_basis;
  Vec values;
};
struct Phi3Result {
  ClassState state = ClassState::NotReached;
  std::optional<K3Witness> witness;
  std::optional<K3Certificate> certificate;
};
Phi3Result phi3(const GMPair& p, const FunctionCochain1& alpha_adjusted, const std::vector<Point>& points,
                AnsatzSpec ansatz = {});

struct Decomposition {
  Expr l_inv;       // delta_i l_inv = t_i
  OneForm w_inv;    // closed invariant form
  Expr f;           // L = l_inv + w_inv.qdot + D_t f
};
struct Phi4Result {
  ClassState state = ClassState::NotReached;
  Vec class_coords;         // reduced harmonic coefficients
  std::string class_repr;   // e.g. "[dphi]"
  std::optional<Decomposition> decomposition;
};
Phi4Result phi4(const GMPair& p, const Expr& L, const WeakInvarianceSplit& s, const K3Witness& witness,
                AnsatzSpec ansatz = {});

struct FloorReport {
  enum class Status { Classified, Undetermined } status = Status::Classified;
  int undetermined_stage = 0;
  std::string undetermined_reason;
  int floor = -1;
  char sign = '+';
  WeakInvarianceSplit split;
  ClassState psi_state = ClassState::NotReached;
  Phi1Result k1;
  Phi2Result k2;
  Phi3Result k3;
  Phi4Result k4;
};

struct ClassifyOptions {
  AnsatzSpec ansatz;
  std::vector<Point> points;  // for K3 certificates; defaults chosen if empty
};

FloorReport classify(const GMPair& p, const Expr& L, const ClassifyOptions& opt = {});

// N_i = X_i . dL/dqdot - alpha_i - t_i tau, with the conservation identity
// D_t N_i + X_i . EL(L) = 0 checked.
std::vector<Expr> noether_charges(const GMPair& p, const Expr& L, AnsatzSpec ansatz = {});

struct KSpacesReport {
  Truncation truncation;
  std::size_t k0 = 0, k1 = 0, k2 = 0, k3 = 0, k4 = 0;
  std::vector<Cochain> k0_reps, k2_reps;
  std::vector<std::string> k1_reps;
  std::vector<FunctionCochain1> k3_reps;
  std::vector<std::string> k4_reps;
  bool k3_caveat = true;
  // "restriction" for transitive pairs (cocycles of the truncation modulo
  // those whose stabilizer restriction lies in that of Z^1(G)); otherwise
  // "filtered".
  std::string k3_method;
};

KSpacesReport k_spaces(const GMPair& p, const Truncation& t = {});

// Functions of the ansatz forming the largest submodule inside it.
struct CoreForms {
  std::vector<Expr> functions;
  std::vector<OneForm> one_forms;
  std::vector<std::map<std::pair<std::size_t, std::size_t>, Expr>> two_forms;
};
CoreForms core_forms(const GMPair& p, const Truncation& t);

DoubleComplex build_invariance_double_complex(const GMPair& p, const Truncation& t = {});

// Default sample points of the chart, avoiding poles of the given expressions.
std::vector<Point> default_points(const ChartPtr& chart, const std::vector<Expr>& avoid, std::size_t count = 3);

}  // namespace lagcoh
