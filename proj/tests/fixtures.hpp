#pragma once

#include <string>

#include "lagcoh/problem.hpp"

namespace fx {

inline lagcoh::ProblemFile load(const std::string& name) {
  return lagcoh::load_problem(std::string(LAGCOH_FIXTURES) + "/" + name);
}

inline lagcoh::GMPair pair(const std::string& name) { return lagcoh::build_pair(load(name)); }

// Point on a chart from plain values; angles given as (sin, cos).
inline lagcoh::Point point(const std::vector<lagcoh::CoordValue>& v) { return v; }
inline lagcoh::CoordValue line(const lagcoh::Scalar& x) { return {x, 0, 0}; }
inline lagcoh::CoordValue angle(const lagcoh::Scalar& s, const lagcoh::Scalar& c) { return {0, s, c}; }

}  // namespace fx
