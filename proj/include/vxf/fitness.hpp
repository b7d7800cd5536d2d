#pragma once

#include <functional>
#include <vector>

#include "vxf/types.hpp"

namespace vxf {

struct FitnessOptions {
  double tol = 1e-9;      // max-norm on the change of both score vectors
  int max_iter = 1000;
  // Fitness values below underflow_floor (scores have mean 1) are floored and
  // the country flagged: the harmonic-mean step divides by fitness, and on
  // real data some countries drive it to zero.
  double underflow_floor = 1e-13;
};

struct FitnessResult {
  Vector fitness;              // per country, mean 1
  Vector industry_complexity;  // per activity, mean 1
  int iterations = 0;
  bool converged = false;
  double final_delta = 0;
  std::vector<Index> floored_countries;  // reported as "fitness ~ 0"
};

// Called after each completed iteration with the normalized score vectors.
using FitnessObserver =
    std::function<void(int iteration, const Vector& fitness, const Vector& complexity)>;

// Fitness-complexity fixed point on a non-negative country x activity matrix.
// One iteration, starting from all-ones scores:
//   ftil_c = sum_s adj_cs * q_{s,prev}
//   qtil_s = 1 / sum_c adj_cs * (1 / f_{c,prev})
// then both vectors are normalized to mean 1. On the binary RCA matrix this
// yields Economic Fitness; on the value-added share matrix it yields VXF.
FitnessResult fitness(const Eigen::Ref<const Matrix>& adj, const FitnessOptions& options = {},
                      const FitnessObserver& observer = {});

}  // namespace vxf
