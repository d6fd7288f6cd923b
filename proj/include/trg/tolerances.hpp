#pragma once

#include "trg/errors.hpp"

namespace trg {

// Numerical thresholds shared across the library. There is no global
// registry; callers pass a value explicitly (defaults are fine nearly
// everywhere).
struct Tolerances {
  double rank_tol = 1e-9;      // singular-value ratio for rank / transversality
  double scalar_tol = 1e-9;    // scalar-multiple-of-identity test
  double grid_tol = 1e-6;      // eigenvalue bucketing against finite-order grids
  double relation_tol = 1e-12; // target for the relation-variety projection
  double conj_tol = 1e-8;      // intertwining residual for conjugacy witnesses
  double cond_max = 1e8;       // condition-number bound for invertibility

  void validate() const {
    if (rank_tol <= 0 || scalar_tol <= 0 || grid_tol <= 0 ||
        relation_tol <= 0 || conj_tol <= 0 || cond_max <= 0)
      throw error(errc::construction_failed, "tolerances must be strictly positive");
  }
};

}  // namespace trg
