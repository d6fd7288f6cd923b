#include "trg/symplectic.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

namespace trg {

SymplecticSpace::SymplecticSpace(Mat form, const Tolerances& tol)
    : omega(std::move(form)) {
  require_finite(omega, "symplectic form");
  if (omega.rows() != omega.cols() || omega.rows() % 2 != 0)
    throw error(errc::dimension_mismatch, "symplectic form must be 2n x 2n");
  if ((omega + omega.transpose()).norm() > 1e-10 * std::max(1.0, omega.norm()))
    throw error(errc::construction_failed, "symplectic form must be antisymmetric");
  if (inverse_condition(omega) < 1.0 / tol.cond_max)
    throw error(errc::not_invertible, "symplectic form is numerically singular");
}

SymplecticSpace SymplecticSpace::standard(int n) {
  Mat w = Mat::Zero(2 * n, 2 * n);
  w.topRightCorner(n, n) = Mat::Identity(n, n);
  w.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return SymplecticSpace(std::move(w));
}

SymplecticSpace SymplecticSpace::from_signature(int p, int q) {
  const int n = p + q;
  Mat w = Mat::Zero(2 * n, 2 * n);
  w.topRightCorner(n, n) = signature_matrix(p, q);
  w.bottomLeftCorner(n, n) = -signature_matrix(p, q);
  return SymplecticSpace(std::move(w));
}

Mat signature_matrix(int p, int q) {
  if (p < 0 || q < 0 || p + q == 0)
    throw error(errc::signature_mismatch, "invalid signature");
  Vec d(p + q);
  for (int i = 0; i < p + q; ++i) d(i) = i < p ? 1.0 : -1.0;
  return d.asDiagonal();
}

std::pair<int, int> symmetric_signature(const Mat& form, const Tolerances& tol) {
  if (form.rows() != form.cols())
    throw error(errc::dimension_mismatch, "signature of a non-square matrix");
  if ((form - form.transpose()).norm() > 1e-10 * std::max(1.0, form.norm()))
    throw error(errc::not_symmetric, "signature of a non-symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(form));
  const Vec ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  int pos = 0, neg = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= tol.rank_tol * std::max(1.0, scale))
      throw error(errc::singular, "form is numerically degenerate");
    (ev(i) > 0 ? pos : neg)++;
  }
  return {pos, neg};
}

bool is_lagrangian(const Subspace& l, const SymplecticSpace& v, const Tolerances&) {
  if (l.ambient_dim() != v.dim())
    throw error(errc::dimension_mismatch, "subspace does not live in the symplectic space");
  if (2 * l.dim() != v.dim()) return false;
  const Mat q = l.onb();
  return (q.transpose() * v.omega * q).norm() <= 1e-10 * std::max(1.0, v.omega.norm());
}

namespace {

void require_lagrangian(const Subspace& l, const SymplecticSpace& v, const char* what,
                        const Tolerances& tol) {
  if (!is_lagrangian(l, v, tol))
    throw error(errc::not_lagrangian, what);
}

// Bilinear form on L1 obtained from a graph map f : L1 -> Lref through the
// pairing v -> omega(., v). In matrix terms B = B1^T omega Bref f.
Mat graph_to_form(const Subspace& l1, const Subspace& lref, const Mat& f,
                  const SymplecticSpace& v) {
  return l1.basis().transpose() * v.omega * lref.basis() * f;
}

Mat form_to_graph(const Subspace& l1, const Subspace& lref, const Mat& b,
                  const SymplecticSpace& v) {
  const Mat pairing = l1.basis().transpose() * v.omega * lref.basis();
  return pairing.partialPivLu().solve(b);
}

}  // namespace

MaslovData maslov(const Subspace& l1, const Subspace& l2, const Subspace& l3,
                  const SymplecticSpace& v, const Tolerances& tol) {
  require_lagrangian(l1, v, "L1 is not Lagrangian", tol);
  require_lagrangian(l2, v, "L2 is not Lagrangian", tol);
  require_lagrangian(l3, v, "L3 is not Lagrangian", tol);
  require_transverse(l1, l2, "Maslov pair (L1,L2)", tol);
  require_transverse(l1, l3, "Maslov pair (L1,L3)", tol);
  require_transverse(l2, l3, "Maslov pair (L2,L3)", tol);

  const Mat f = as_graph(l2, l1, l3, tol);
  Mat b = graph_to_form(l1, l3, f, v);
  if ((b - b.transpose()).norm() > 1e-10 * std::max(1.0, b.norm()))
    throw error(errc::not_symmetric, "Maslov form failed the symmetry check");
  b = symmetrized(b);
  return MaslovData{b, symmetric_signature(b, tol)};
}

PQCircle pq_circle(const Subspace& l1, const Subspace& l2, const Subspace& l3,
                   const SymplecticSpace& v, const Tolerances& tol) {
  require_lagrangian(l1, v, "L1 is not Lagrangian", tol);
  require_lagrangian(l2, v, "L2 is not Lagrangian", tol);
  require_lagrangian(l3, v, "L3 is not Lagrangian", tol);
  require_transverse(l1, l2, "circle pair (L1,L2)", tol);
  require_transverse(l1, l3, "circle point (L1,L3)", tol);
  require_transverse(l2, l3, "circle point (L2,L3)", tol);

  const Mat f = as_graph(l3, l1, l2, tol);
  Mat b = graph_to_form(l1, l2, f, v);
  b = symmetrized(b);
  return PQCircle{l1, l2, b, symmetric_signature(b, tol)};
}

Subspace circle_point(const PQCircle& c, double lambda, const SymplecticSpace& v,
                      const Tolerances& tol) {
  const Mat f = form_to_graph(c.l1, c.l2, lambda * c.form, v);
  (void)tol;
  return Subspace(c.l1.basis() + c.l2.basis() * f);
}

bool circle_contains(const PQCircle& c, const Subspace& l, const SymplecticSpace& v,
                     const Tolerances& tol) {
  if (l.ambient_dim() != v.dim())
    throw error(errc::dimension_mismatch, "query does not live in the symplectic space");
  if (l.same_span(c.l2, tol)) return true;
  if (!transverse(l, c.l2, tol)) return false;
  const Mat f = as_graph(l, c.l1, c.l2, tol);
  const Mat b = graph_to_form(c.l1, c.l2, f, v);
  // Least-squares multiple of the circle's form.
  const double denom = c.form.squaredNorm();
  const double lambda = (c.form.array() * b.array()).sum() / denom;
  const double residual = (b - lambda * c.form).norm();
  return residual <= 1e-9 * std::max(1.0, b.norm());
}

Mat tensor_embed(const Mat& a, std::pair<int, int> signature, const Tolerances& tol) {
  if (a.rows() != 2 || a.cols() != 2)
    throw error(errc::dimension_mismatch, "tensor_embed expects a 2x2 matrix");
  require_finite(a, "tensor_embed input");
  const auto [p, q] = signature;
  if (p < 0 || q < 0 || p + q < 1)
    throw error(errc::signature_mismatch, "invalid signature");
  const int n = p + q;
  const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  if (std::abs(det) < 1.0 / tol.cond_max)
    throw error(errc::not_invertible, "tensor_embed input is numerically singular");
  const Mat unit = a / std::sqrt(std::abs(det));

  Mat out = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block(i * n, j * n, n, n) = unit(i, j) * Mat::Identity(n, n);
  return out;
}

Subspace line_tensor(const Subspace& l, int n) {
  if (l.ambient_dim() != 2 || l.dim() != 1)
    throw error(errc::dimension_mismatch, "line_tensor expects a line in R^2");
  Mat b = Mat::Zero(2 * n, n);
  for (int j = 0; j < n; ++j) {
    b(j, j) = l.basis()(0, 0);
    b(n + j, j) = l.basis()(1, 0);
  }
  return Subspace(std::move(b));
}

std::optional<Mat> simultaneously_diagonalizable(const Mat& q1, const Mat& q2,
                                                 const Tolerances& tol) {
  const Eigen::Index n = q1.rows();
  if (q1.cols() != n || q2.rows() != n || q2.cols() != n)
    throw error(errc::dimension_mismatch, "forms must be square of equal size");
  auto check = [&](const Mat& q, const char* what) {
    if ((q - q.transpose()).norm() > 1e-10 * std::max(1.0, q.norm()))
      throw error(errc::not_symmetric, what);
    if (inverse_condition(q) < 1.0 / tol.cond_max)
      throw error(errc::not_invertible, what);
  };
  check(q1, "Q1 must be symmetric and invertible");
  check(q2, "Q2 must be symmetric and invertible");

  const Mat m = q1.partialPivLu().solve(q2);
  Eigen::EigenSolver<Mat> es(m);
  const auto ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(ev(i).imag()) > tol.grid_tol * scale) return std::nullopt;

  // Cluster the (real) eigenvalues, then diagonalize Q1 restricted to each
  // eigenspace of Q1^{-1} Q2; distinct clusters are automatically
  // Q1-orthogonal.
  std::vector<double> lambdas(n);
  for (Eigen::Index i = 0; i < n; ++i) lambdas[i] = ev(i).real();
  std::sort(lambdas.begin(), lambdas.end());

  Mat basis(n, n);
  Eigen::Index filled = 0;
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i;
    while (j + 1 < n && lambdas[j + 1] - lambdas[j] <= tol.grid_tol * scale) ++j;
    const Eigen::Index mult = j - i + 1;
    double center = 0.0;
    for (Eigen::Index t = i; t <= j; ++t) center += lambdas[t];
    center /= static_cast<double>(mult);

    Eigen::JacobiSVD<Mat> svd(m - center * Mat::Identity(n, n), Eigen::ComputeFullV);
    // Defective eigenvalue: geometric multiplicity below the cluster size.
    const double smax = svd.singularValues()(0);
    if (svd.singularValues()(n - mult) > tol.grid_tol * std::max(1.0, smax))
      return std::nullopt;
    Mat u = svd.matrixV().rightCols(mult);

    // Q1 restricted to the eigenspace is symmetric and nondegenerate;
    // orthogonal diagonalization finishes the block.
    Mat g = u.transpose() * q1 * u;
    g = symmetrized(g);
    Eigen::SelfAdjointEigenSolver<Mat> ges(g);
    basis.middleCols(filled, mult) = u * ges.eigenvectors();
    filled += mult;
    i = j + 1;
  }

  Mat d1 = basis.transpose() * q1 * basis;
  Mat d2 = basis.transpose() * q2 * basis;
  auto off_diag = [](const Mat& d) {
    Mat o = d;
    o.diagonal().setZero();
    return o.norm() / std::max(1.0, d.norm());
  };
  if (off_diag(d1) > 1e-7 || off_diag(d2) > 1e-7) return std::nullopt;
  return basis;
}

}  // namespace trg
