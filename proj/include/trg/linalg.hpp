#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "trg/errors.hpp"
#include "trg/tolerances.hpp"

namespace trg {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

void require_finite(const Mat& m, const char* what);

// Ratio sigma_min/sigma_max of a matrix (0 for an empty or zero matrix).
double inverse_condition(const Mat& m);

// Alias-safe (m + m^T) / 2.
inline Mat symmetrized(const Mat& m) { return 0.5 * (m + Mat(m.transpose())); }

// An n-dimensional subspace of R^{2n}, stored as a spanning basis matrix
// (2n rows, n columns). The basis is kept exactly as given; equality and
// transversality are decided by singular values, not by basis comparison.
class Subspace {
 public:
  Subspace(Mat basis, const Tolerances& tol = {});

  Eigen::Index ambient_dim() const { return basis_.rows(); }
  Eigen::Index dim() const { return basis_.cols(); }
  const Mat& basis() const { return basis_; }

  // Orthonormal basis for the same span (cached at construction).
  const Mat& onb() const { return onb_; }

  bool same_span(const Subspace& other, const Tolerances& tol = {}) const;

  static Subspace coordinate_block(Eigen::Index ambient, Eigen::Index start,
                                   Eigen::Index count);

 private:
  Mat basis_;
  Mat onb_;
};

bool transverse(const Subspace& u, const Subspace& w, const Tolerances& tol = {});

void require_transverse(const Subspace& u, const Subspace& w, const char* what,
                        const Tolerances& tol = {});

// Projection onto U along W for a transverse pair U, W.
Mat projection(const Subspace& u, const Subspace& w, const Tolerances& tol = {});

// Involution acting as +1 on U and -1 on W.
Mat reflection(const Subspace& u, const Subspace& w, const Tolerances& tol = {});

// The unique f with X = { u + f(u) : u in U } over the splitting U (+) W,
// expressed in the stored bases of U and W (an n x n matrix).
Mat as_graph(const Subspace& x, const Subspace& u, const Subspace& w,
             const Tolerances& tol = {});

// Coefficients of det(M - lambda I) in ascending degree (size n+1).
// Note the non-monic convention: the leading coefficient is (-1)^n.
std::vector<double> charpoly(const Mat& m);

double charpoly_distance(const std::vector<double>& a, const std::vector<double>& b);

// Conjugacy-class data of the cross-ratio endomorphism. The endo matrix is
// expressed in the stored basis of U1 (basis-dependent); the charpoly is the
// canonical invariant and is what class comparisons use.
struct CrossRatioClass {
  Mat endo;
  std::vector<double> coeffs;

  explicit CrossRatioClass(Mat e);

  bool same_class(const CrossRatioClass& other, double tol = 1e-8) const;
};

// Generalized cross-ratio [U1,U2;U3,U4]: the endomorphism of U1 given by
// projecting along U2 after projecting along U4 onto U3. Only the two
// definitional transversalities (U1,U2) and (U3,U4) are required.
CrossRatioClass cross_ratio(const Subspace& u1, const Subspace& u2,
                            const Subspace& u3, const Subspace& u4,
                            const Tolerances& tol = {});

// Same class computed through graph coordinates over U1 (+) U3; needs all
// pairwise transversalities. Used to cross-check the projection route.
CrossRatioClass cross_ratio_via_graphs(const Subspace& u1, const Subspace& u2,
                                       const Subspace& u3, const Subspace& u4,
                                       const Tolerances& tol = {});

// || W - (tr W / d) I ||_F / ||W||_F. Zero exactly for nonzero scalar
// multiples of the identity.
double scalar_deviation(const Mat& w, Eigen::Index d);
inline double scalar_deviation(const Mat& w) { return scalar_deviation(w, w.rows()); }

// Smallest k in 1..max_k with W^k a scalar multiple of the identity, if any.
std::optional<int> projective_order(const Mat& w, int max_k, double tol,
                                    const Tolerances& reg = {});

// { sin^2(k pi / (2N)) : k = 0..N }, ascending, deduplicated.
std::vector<double> finite_order_grid(int n);

}  // namespace trg
