#include "trg/configurations.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>

namespace trg {

namespace {

void require_invertible(const Mat& m, const char* what, double rank_tol) {
  if (inverse_condition(m) <= rank_tol)
    throw error(errc::not_transverse, what);
}

Mat graph_basis(const Mat& f) {
  const Eigen::Index n = f.rows();
  Mat b(2 * n, n);
  b.topRows(n) = Mat::Identity(n, n);
  b.bottomRows(n) = f;
  return b;
}

std::vector<std::complex<double>> sorted_eigenvalues(const Mat& m) {
  Eigen::EigenSolver<Mat> es(m);
  std::vector<std::complex<double>> ev(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) ev[i] = es.eigenvalues()(i);
  std::sort(ev.begin(), ev.end(), [](auto a, auto b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return ev;
}

}  // namespace

Config6Normal::Config6Normal(Mat n_mat, Mat m1, Mat m2, Mat m3, bool symmetric,
                             const Tolerances& tol)
    : n_(std::move(n_mat)), m1_(std::move(m1)), m2_(std::move(m2)),
      m3_(std::move(m3)), symmetric_(symmetric) {
  const Eigen::Index n = n_.rows();
  for (const Mat* m : {&n_, &m1_, &m2_, &m3_}) {
    require_finite(*m, "configuration matrix");
    if (m->rows() != n || m->cols() != n)
      throw error(errc::dimension_mismatch, "configuration matrices must be n x n");
  }
  if (symmetric_) {
    for (const Mat* m : {&n_, &m1_, &m2_, &m3_})
      if ((*m - m->transpose()).norm() > 1e-10 * std::max(1.0, m->norm()))
        throw error(errc::not_symmetric, "Lagrangian configuration matrices must be symmetric");
  }
  // Pairwise transversality of the six reconstructed subspaces reduces to
  // invertibility of the graph matrices and their differences.
  require_invertible(n_, "U3+ meets U1+", tol.rank_tol);
  require_invertible(m1_, "U1- meets U1+", tol.rank_tol);
  require_invertible(m2_, "U2- meets U1+", tol.rank_tol);
  require_invertible(m3_, "U3- meets U1+", tol.rank_tol);
  require_invertible(Mat(n_ - m1_), "U3+ meets U1-", tol.rank_tol);
  require_invertible(Mat(n_ - m2_), "U3+ meets U2-", tol.rank_tol);
  require_invertible(Mat(n_ - m3_), "U3+ meets U3-", tol.rank_tol);
  require_invertible(Mat(m1_ - m2_), "U1- meets U2-", tol.rank_tol);
  require_invertible(Mat(m1_ - m3_), "U1- meets U3-", tol.rank_tol);
  require_invertible(Mat(m2_ - m3_), "U2- meets U3-", tol.rank_tol);
}

std::array<Subspace, 6> Config6Normal::reconstruct() const {
  const Eigen::Index n = n_.rows();
  return {Subspace::coordinate_block(2 * n, 0, n),
          Subspace(graph_basis(m1_)),
          Subspace::coordinate_block(2 * n, n, n),
          Subspace(graph_basis(m2_)),
          Subspace(graph_basis(n_)),
          Subspace(graph_basis(m3_))};
}

Config6Normal normalize_six(const std::array<Subspace, 6>& tuple,
                            const std::optional<SymplecticSpace>& sympl,
                            const Tolerances& tol) {
  const Subspace& u1p = tuple[0];
  const Subspace& u2p = tuple[2];
  const Eigen::Index n = u1p.dim();
  require_transverse(u1p, u2p, "normalization pair (U1+,U2+)", tol);

  Mat b1 = u1p.basis();
  Mat b2 = u2p.basis();
  if (sympl) {
    // Choose the U2+ basis omega-dual to the U1+ basis; the new coordinates
    // are then symplectic-standard and Lagrangian graphs are symmetric.
    Mat pairing = b1.transpose() * sympl->omega * b2;
    require_invertible(pairing, "U1+,U2+ are not omega-dual", tol.rank_tol);
    b2 = b2 * pairing.inverse();
  }
  Mat frame(2 * n, 2 * n);
  frame << b1, b2;
  Mat to_std = frame.partialPivLu().solve(Mat::Identity(2 * n, 2 * n));

  auto graph_of = [&](const Subspace& s, const char* what) {
    Mat coords = to_std * s.basis();
    Mat top = coords.topRows(n);
    if (inverse_condition(top) <= tol.rank_tol)
      throw error(errc::not_transverse, what);
    return Mat(coords.bottomRows(n) * top.inverse());
  };

  Mat m1 = graph_of(tuple[1], "U1- meets U2+");
  Mat m2 = graph_of(tuple[3], "U2- meets U2+");
  Mat n_mat = graph_of(tuple[4], "U3+ meets U2+");
  Mat m3 = graph_of(tuple[5], "U3- meets U2+");

  if (sympl) {
    // Symmetrize away roundoff; the symmetry itself is checked by the
    // constructor at 1e-10.
    auto sym_guard = [](Mat& m) {
      if ((m - m.transpose()).norm() <= 1e-10 * std::max(1.0, m.norm()))
        m = symmetrized(m);
    };
    sym_guard(m1);
    sym_guard(m2);
    sym_guard(n_mat);
    sym_guard(m3);
  }
  return Config6Normal(std::move(n_mat), std::move(m1), std::move(m2),
                       std::move(m3), sympl.has_value(), tol);
}

Config6Normal extract_and_normalize(const Rep& rep, const Tolerances& tol) {
  std::optional<SymplecticSpace> sympl;
  if (rep.kind == RepKind::symplectic)
    sympl = SymplecticSpace::from_signature(rep.signature->first, rep.signature->second);
  return normalize_six({rep.u_plus[0], rep.u_minus[0], rep.u_plus[1],
                        rep.u_minus[1], rep.u_plus[2], rep.u_minus[2]},
                       sympl, tol);
}

std::array<CrossRatioClass, 3> config_cross_ratios(const Config6Normal& c) {
  auto left_divide = [](const Mat& a, const Mat& rhs, const char* what) {
    if (inverse_condition(a) < 1e-13)
      throw error(errc::singular, what);
    return Mat(a.partialPivLu().solve(rhs));  // a^{-1} rhs
  };
  auto right_divide = [&](const Mat& lhs, const Mat& a, const char* what) {
    return Mat(left_divide(a.transpose(), lhs.transpose(), what).transpose());
  };
  const Mat nm3 = c.N() - c.M3();
  Mat c1 = right_divide(Mat(c.N() - c.M2()), nm3, "N - M3 is singular");
  Mat c2 = left_divide(c.M1(),
                       Mat((c.N() - c.M1()) *
                           left_divide(nm3, c.M3(), "N - M3 is singular")),
                       "M1 is singular");
  Mat c3 = left_divide(c.M1(), c.M2(), "M1 is singular");
  return {CrossRatioClass(std::move(c1)), CrossRatioClass(std::move(c2)),
          CrossRatioClass(std::move(c3))};
}

ScalarConfigSolution solve_scalar_config(double l1, double l2, double l3, int n,
                                         bool symmetric, const Tolerances& tol) {
  if (n < 1) throw error(errc::dimension_mismatch, "n must be >= 1");
  const double a = l3 * (1.0 - l2);
  const double b = l1 + l2 - l3 - 1.0;
  const double c = 1.0 - l1;
  if (a == 0.0)
    throw error(errc::degenerate_coefficients, "lambda3 (1 - lambda2) vanishes");
  if (l1 == 0.0)
    throw error(errc::degenerate_coefficients, "lambda1 vanishes");
  const double disc = phi(l1, l2, l3);
  if (disc <= 0.0)
    throw error(errc::non_real_roots, "discriminant phi is not positive");

  const double r_plus = (-b + std::sqrt(disc)) / (2.0 * a);
  // The product of the roots is c/a; this form avoids cancellation.
  const double r_minus =
      std::abs(r_plus) > 1e-300 ? c / (a * r_plus) : (-b - std::sqrt(disc)) / (2.0 * a);

  ScalarConfigSolution out{{}, n + 1};
  for (int m = 0; m <= n; ++m) {
    Vec diag(n);
    for (int i = 0; i < n; ++i) diag(i) = i < m ? r_plus : r_minus;
    Mat m1 = diag.asDiagonal();
    Mat m2 = l3 * m1;
    Mat m3 = ((l1 - 1.0) * Mat::Identity(n, n) + l3 * m1) / l1;
    try {
      out.configs.emplace_back(Mat::Identity(n, n), std::move(m1), std::move(m2),
                               std::move(m3), symmetric, tol);
    } catch (const error&) {
      // Representative violates pairwise transversality; dropped.
    }
  }
  return out;
}

bool config_equivalent(const Config6Normal& a, const Config6Normal& b,
                       const Tolerances& tol) {
  if (a.n() != b.n() || a.symmetric() != b.symmetric())
    throw error(errc::dimension_mismatch, "configurations are not comparable");

  auto ratio_eigs = [](const Config6Normal& c, const Mat& m) {
    return sorted_eigenvalues(c.N().partialPivLu().solve(m));
  };
  for (const auto& [ma, mb] :
       {std::pair{&a.M1(), &b.M1()}, {&a.M2(), &b.M2()}, {&a.M3(), &b.M3()}}) {
    auto ea = ratio_eigs(a, *ma);
    auto eb = ratio_eigs(b, *mb);
    for (std::size_t i = 0; i < ea.size(); ++i)
      if (std::abs(ea[i] - eb[i]) > tol.grid_tol) return false;
  }
  const auto ca = config_cross_ratios(a);
  const auto cb = config_cross_ratios(b);
  for (int i = 0; i < 3; ++i)
    if (!ca[i].same_class(cb[i], tol.grid_tol)) return false;
  return true;
}

}  // namespace trg
