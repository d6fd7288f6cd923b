#pragma once

#include <array>
#include <optional>
#include <utility>

#include "trg/linalg.hpp"

namespace trg {

// Hyperbolic triangle-group parameters (k1,k2,k3), all >= 2 with
// 1/k1 + 1/k2 + 1/k3 < 1.
struct TriangleParams {
  int k1, k2, k3;

  TriangleParams(int a, int b, int c);

  int operator[](int i) const { return i == 0 ? k1 : (i == 1 ? k2 : k3); }
  int max_k() const;
  std::array<double, 3> lambdas() const;  // sin^2(pi / (2 k_i))
};

enum class RepKind { diagonal, symplectic, sympower };

const char* rep_kind_name(RepKind k);

// A triple of reflections in pairs of half-dimensional subspaces together
// with the data needed to check the triangle relations. U_plus[i] is the
// +1 eigenspace of R[i], U_minus[i] the -1 eigenspace. The product R_i R_j
// has projective order k_l for {i,j,l} = {1,2,3}.
struct Rep {
  Eigen::Index ambient_dim;
  RepKind kind;
  std::optional<std::pair<int, int>> signature;  // symplectic kind only
  TriangleParams params;
  std::array<Mat, 3> r;
  std::array<Subspace, 3> u_plus;
  std::array<Subspace, 3> u_minus;

  Eigen::Index half_dim() const { return ambient_dim / 2; }
};

// Order of the pairwise product R_i R_j: the opposite index l = 3-i-j.
inline int product_order(const TriangleParams& k, int i, int j) {
  return k[3 - i - j];
}

// Checks involutivity, eigenspace consistency and the pairwise product
// orders; throws ConstructionFailed on violation.
void validate_rep(const Rep& rep, double scalar_tol = 1e-9,
                  const Tolerances& tol = {});

// The three eigenspace cross-ratios (C1, C2, C3) of a representation:
// C1 = [U2+,U2-;U3+,U3-], C2 = [U1+,U1-;U3+,U3-], C3 = [U1+,U1-;U2+,U2-].
std::array<CrossRatioClass, 3> rep_cross_ratios(const Rep& rep,
                                                const Tolerances& tol = {});

// Gram matrix of the bilinear form fixed by the reflection group, with
// x = cos(pi/k1), y = cos(pi/k2), z = cos(pi/k3) off the diagonal.
Mat gram_matrix(const TriangleParams& k);

// Discriminant of the quadratic lambda3(1-lambda2) x^2
// + (lambda1+lambda2-lambda3-1) x + (1-lambda1).
double phi(double lambda1, double lambda2, double lambda3);

// The geometric representation in dimension 2, normalized so that
// U1+ = <e1>, U2+ = <e2>, U3+ = Graph(1) and U_i- = Graph(m_i) with m1 the
// +sqrt(phi) root of the quadratic above.
Rep geometric_representation(const TriangleParams& k, const Tolerances& tol = {});

// The graph scalars (m1, m2, m3) of the normalized geometric representation.
std::array<double, 3> geometric_graph_scalars(const TriangleParams& k);

}  // namespace trg
