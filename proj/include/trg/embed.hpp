#pragma once

#include <optional>
#include <utility>

#include "trg/triangle.hpp"

namespace trg {

// Points of RP^1 are one-dimensional subspaces of R^2.
using Line = Subspace;

Line make_line(double x0, double x1);

// Row index of component `comp` of the j-th R^2 factor in R^{2n}. Fixes the
// factor ordering shared by diagonal_embed and xi (consecutive pairs).
inline Eigen::Index pair_index(Eigen::Index j, Eigen::Index comp) {
  return 2 * j + comp;
}

// Block-diagonal action of a 2x2 matrix on n copies of R^2.
Mat diagonal_embed(const Mat& a, int n, const Tolerances& tol = {});

// Equivariant boundary map: the span of the n factor copies of a line.
Subspace xi(const Line& l, int n);

// Action on homogeneous polynomials of degree 2n-1 in two variables, in the
// monomial basis. Negative control only: the lifted cross-ratios are not
// scalar, unlike the diagonal embedding.
Mat symmetric_power_embed(const Mat& a, int n, const Tolerances& tol = {});

// Compose the geometric representation with the requested embedding into
// dimension 2n. Signature is required (p+q = n) for the symplectic kind and
// must be absent otherwise.
Rep build_rep(RepKind kind, const TriangleParams& k, int n,
              std::optional<std::pair<int, int>> signature = std::nullopt,
              const Tolerances& tol = {});

// Expected dimension of the character-variety component containing the
// diagonal representations: -n^2 + 1.
long long expected_dimension_diagonal(int n);

}  // namespace trg
