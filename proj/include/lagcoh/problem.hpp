#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lagcoh/ce_cohomology.hpp"
#include "lagcoh/gm_pair.hpp"
#include "lagcoh/lie_algebra.hpp"
#include "lagcoh/spectral.hpp"

namespace lagcoh {

// A TOML subset: [table] and [table.sub] headers, bare or quoted keys,
// basic strings, integers, booleans and (possibly nested, multi-line,
// heterogeneous) arrays.  Key order is preserved.
namespace toml {

struct Value;
using Array = std::vector<Value>;
using Table = std::vector<std::pair<std::string, Value>>;

struct Value {
  std::variant<std::string, long long, bool, Array, Table> v;

  bool is_string() const { return std::holds_alternative<std::string>(v); }
  bool is_int() const { return std::holds_alternative<long long>(v); }
  bool is_bool() const { return std::holds_alternative<bool>(v); }
  bool is_array() const { return std::holds_alternative<Array>(v); }
  bool is_table() const { return std::holds_alternative<Table>(v); }
  bool operator==(const Value&) const = default;
};

const Value* find(const Table& t, const std::string& key);
Table parse(const std::string& text);
std::string print(const Table& t);

}  // namespace toml

struct AlgebraSpec {
  std::optional<std::string> catalog;
  std::optional<long long> n;
  std::optional<std::string> c;
  std::vector<std::string> basis;
  // 1-based (i, j, k, coefficient): [e_i, e_j] contains coefficient * e_k
  std::vector<std::tuple<long long, long long, long long, std::string>> brackets;
  bool operator==(const AlgebraSpec&) const = default;
};

struct ActionSpec {
  std::vector<std::pair<std::string, std::vector<std::string>>> fields;
  bool transitive = false;
  std::optional<std::vector<std::string>> stabilizer;
  bool operator==(const ActionSpec&) const = default;
};

struct ModuleSpec {
  std::string name;
  std::optional<long long> trivial_dim;
  std::vector<std::string> seeds;
  std::vector<std::vector<std::vector<std::string>>> rho;  // one matrix per generator
  bool operator==(const ModuleSpec&) const = default;
};

struct DoubleComplexSpec {
  std::string name;
  std::vector<std::vector<long long>> dims;
  // (p, q, matrix rows); d1: E^{p,q} -> E^{p,q+1}, d2: E^{p,q} -> E^{p+1,q}
  using Entry = std::tuple<long long, long long, std::vector<std::vector<std::string>>>;
  std::vector<Entry> d1, d2;
  bool operator==(const DoubleComplexSpec&) const = default;
};

struct OptionsSpec {
  std::string set;
  std::vector<std::vector<std::string>> points;  // line "1/2", angle "3/5:4/5"
  bool operator==(const OptionsSpec&) const = default;
};

struct ProblemFile {
  std::optional<AlgebraSpec> algebra;
  std::vector<std::pair<std::string, std::string>> chart;  // (name, "line" | "angle")
  std::optional<ActionSpec> action;
  std::vector<std::pair<std::string, std::string>> lagrangians;
  std::vector<ModuleSpec> modules;
  std::vector<DoubleComplexSpec> double_complexes;
  OptionsSpec options;
  bool operator==(const ProblemFile&) const = default;
};

ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::string& path);
std::string print_problem(const ProblemFile& pf);

// "a=1,b=-1/2" -> {a: 1, b: -1/2}
std::map<std::string, Scalar> parse_set(const std::string& text);
// Replaces whole identifiers by "(value)".
std::string substitute(const std::string& expr, const std::map<std::string, Scalar>& values);

StructureConstants build_algebra(const ProblemFile& pf);
ChartPtr build_chart(const ProblemFile& pf);
GMPair build_pair(const ProblemFile& pf, const std::map<std::string, Scalar>& params = {});
Expr build_lagrangian(const ProblemFile& pf, const ChartPtr& chart, const std::string& name,
                      const std::map<std::string, Scalar>& params = {});
GModule build_module(const ProblemFile& pf, const std::string& name, std::size_t closure_cap = default_closure_cap);
DoubleComplex build_double_complex(const ProblemFile& pf, const std::string& name);
std::vector<Point> build_points(const ProblemFile& pf, const Chart& chart);

}  // namespace lagcoh
