#pragma once

#include <vector>

#include "fairdiv/rational.hpp"

namespace fairdiv::lp {

enum class Sense { less_equal, greater_equal, equal };
enum class Status { optimal, infeasible, unbounded };

/// maximize (or minimize) objective . x  subject to  rows[i] . x  (sense)  rhs[i],  x >= 0.
struct LinearProgram {
  std::vector<std::vector<Rational>> rows;
  std::vector<Sense> senses;
  std::vector<Rational> rhs;
  std::vector<Rational> objective;
  bool maximize = true;
};

struct Solution {
  Status status = Status::infeasible;
  Rational value;
  std::vector<Rational> x;
};

/// Exact two-phase tableau simplex with Bland's rule. Intended for the tiny
/// instances that arise from a single triangulation cell.
Solution solve(const LinearProgram& program);

}  // namespace fairdiv::lp
