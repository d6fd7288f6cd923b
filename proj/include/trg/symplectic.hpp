#pragma once

#include <optional>
#include <utility>

#include "trg/linalg.hpp"

namespace trg {

// A real symplectic vector space (R^{2n}, omega) with omega antisymmetric
// and invertible.
struct SymplecticSpace {
  Mat omega;

  explicit SymplecticSpace(Mat form, const Tolerances& tol = {});

  Eigen::Index dim() const { return omega.rows(); }
  Eigen::Index half_dim() const { return omega.rows() / 2; }

  // omega = [[0, I], [-I, 0]] in the L1 (+) L1* block convention.
  static SymplecticSpace standard(int n);
  // omega = omega_2 (x) I_{p,q} in the tensor basis ordering.
  static SymplecticSpace from_signature(int p, int q);
};

// diag(+1 x p, -1 x q).
Mat signature_matrix(int p, int q);

// Signature (positive count, negative count) of a symmetric matrix; throws
// Singular if any eigenvalue sits inside the rank tolerance around zero.
std::pair<int, int> symmetric_signature(const Mat& form, const Tolerances& tol = {});

bool is_lagrangian(const Subspace& l, const SymplecticSpace& v,
                   const Tolerances& tol = {});

// Maslov form of an ordered transverse Lagrangian triple, expressed in the
// stored basis of L1, together with its signature.
struct MaslovData {
  Mat form;
  std::pair<int, int> signature;
};

MaslovData maslov(const Subspace& l1, const Subspace& l2, const Subspace& l3,
                  const SymplecticSpace& v, const Tolerances& tol = {});

// The one-parameter family { Graph(lambda B) } U { L2 } of Lagrangians
// determined by a transverse pair (L1, L2) and an invertible symmetric form
// B on L1.
struct PQCircle {
  Subspace l1;
  Subspace l2;
  Mat form;                       // B, in the stored basis of L1
  std::pair<int, int> signature;  // of B; the circle's label up to swap
};

PQCircle pq_circle(const Subspace& l1, const Subspace& l2, const Subspace& l3,
                   const SymplecticSpace& v, const Tolerances& tol = {});

bool circle_contains(const PQCircle& c, const Subspace& l,
                     const SymplecticSpace& v, const Tolerances& tol = {});

// Lagrangian through lambda * B on the circle's base pair.
Subspace circle_point(const PQCircle& c, double lambda,
                      const SymplecticSpace& v, const Tolerances& tol = {});

// A (x) I_n on U (x) W after normalizing |det A| = 1. Symplectic for
// det A = 1 and anti-symplectic for det A = -1 with respect to
// omega (x) I_{p,q}.
Mat tensor_embed(const Mat& a, std::pair<int, int> signature,
                 const Tolerances& tol = {});

// The Lagrangian l (x) W spanned by kron(dir, e_j).
Subspace line_tensor(const Subspace& l, int n);

// Wonenburger criterion: a congruence P with P^T Q1 P and P^T Q2 P both
// diagonal exists iff Q1^{-1} Q2 is diagonalizable over R.
std::optional<Mat> simultaneously_diagonalizable(const Mat& q1, const Mat& q2,
                                                 const Tolerances& tol = {});

}  // namespace trg
