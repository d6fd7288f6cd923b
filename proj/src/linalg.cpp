#include "trg/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace trg {

void require_finite(const Mat& m, const char* what) {
  if (!m.allFinite())
    throw error(errc::construction_failed,
                std::string(what) + " has non-finite entries");
}

double inverse_condition(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  const double smax = svd.singularValues()(0);
  if (smax == 0.0) return 0.0;
  return svd.singularValues()(svd.singularValues().size() - 1) / smax;
}

namespace {

Mat orthonormalized(const Mat& basis) {
  Eigen::HouseholderQR<Mat> qr(basis);
  Mat q = qr.householderQ() * Mat::Identity(basis.rows(), basis.cols());
  return q;
}

}  // namespace

Subspace::Subspace(Mat basis, const Tolerances& tol) : basis_(std::move(basis)) {
  require_finite(basis_, "subspace basis");
  if (basis_.cols() == 0 || basis_.rows() < 2 * basis_.cols())
    throw error(errc::dimension_mismatch,
                "basis must have 2n rows and n columns");
  if (basis_.rows() != 2 * basis_.cols())
    throw error(errc::dimension_mismatch,
                "basis must span a half-dimensional subspace");
  if (inverse_condition(basis_) <= tol.rank_tol)
    throw error(errc::construction_failed, "basis is rank deficient");
  onb_ = orthonormalized(basis_);
}

bool Subspace::same_span(const Subspace& other, const Tolerances& tol) const {
  if (ambient_dim() != other.ambient_dim() || dim() != other.dim()) return false;
  Mat joint(ambient_dim(), dim() + other.dim());
  joint << onb_, other.onb_;
  Eigen::JacobiSVD<Mat> svd(joint);
  // Same span iff the concatenation has rank n, i.e. sigma_{n+1} ~ 0.
  return svd.singularValues()(dim()) <= tol.rank_tol * svd.singularValues()(0);
}

Subspace Subspace::coordinate_block(Eigen::Index ambient, Eigen::Index start,
                                    Eigen::Index count) {
  Mat b = Mat::Zero(ambient, count);
  for (Eigen::Index j = 0; j < count; ++j) b(start + j, j) = 1.0;
  return Subspace(std::move(b));
}

bool transverse(const Subspace& u, const Subspace& w, const Tolerances& tol) {
  if (u.ambient_dim() != w.ambient_dim()) return false;
  Mat joint(u.ambient_dim(), u.dim() + w.dim());
  joint << u.onb(), w.onb();
  return inverse_condition(joint) > tol.rank_tol;
}

void require_transverse(const Subspace& u, const Subspace& w, const char* what,
                        const Tolerances& tol) {
  if (u.ambient_dim() != w.ambient_dim())
    throw error(errc::dimension_mismatch, std::string(what) + ": ambient dimensions differ");
  if (!transverse(u, w, tol))
    throw error(errc::not_transverse, what);
}

Mat projection(const Subspace& u, const Subspace& w, const Tolerances& tol) {
  require_transverse(u, w, "projection splitting", tol);
  const Eigen::Index n = u.dim();
  // The operator only depends on the spans, so use the orthonormal bases.
  Mat s(u.ambient_dim(), 2 * n);
  s << u.onb(), w.onb();
  Mat sinv = s.partialPivLu().solve(Mat::Identity(2 * n, 2 * n));
  return u.onb() * sinv.topRows(n);
}

Mat reflection(const Subspace& u, const Subspace& w, const Tolerances& tol) {
  Mat p = projection(u, w, tol);
  return 2.0 * p - Mat::Identity(p.rows(), p.cols());
}

Mat as_graph(const Subspace& x, const Subspace& u, const Subspace& w,
             const Tolerances& tol) {
  require_transverse(u, w, "graph splitting", tol);
  if (x.ambient_dim() != u.ambient_dim())
    throw error(errc::dimension_mismatch, "graph subject: ambient dimensions differ");
  const Eigen::Index n = u.dim();
  Mat s(u.ambient_dim(), 2 * n);
  s << u.basis(), w.basis();
  Mat coords = s.partialPivLu().solve(x.basis());
  Mat top = coords.topRows(n);
  if (inverse_condition(top) <= tol.rank_tol)
    throw error(errc::not_transverse, "subspace is not transverse to the graph direction");
  return coords.bottomRows(n) * top.inverse();
}

std::vector<double> charpoly(const Mat& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw error(errc::dimension_mismatch, "charpoly needs a square matrix");
  // Faddeev-LeVerrier for det(lambda I - M), then flip to det(M - lambda I).
  std::vector<double> monic(n + 1, 0.0);
  monic[n] = 1.0;
  Mat aux = Mat::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    aux = m * aux;
    const double ck = -aux.trace() / static_cast<double>(k);
    monic[n - k] = ck;
    aux += ck * Mat::Identity(n, n);
  }
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  std::vector<double> coeffs(n + 1);
  for (Eigen::Index k = 0; k <= n; ++k) coeffs[k] = sign * monic[k];
  return coeffs;
}

double charpoly_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw error(errc::dimension_mismatch, "charpoly degree mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

CrossRatioClass::CrossRatioClass(Mat e) : endo(std::move(e)) {
  require_finite(endo, "cross-ratio endomorphism");
  coeffs = charpoly(endo);
}

bool CrossRatioClass::same_class(const CrossRatioClass& other, double tol) const {
  if (coeffs.size() != other.coeffs.size()) return false;
  double scale = 1.0;
  for (double c : coeffs) scale = std::max(scale, std::abs(c));
  return charpoly_distance(coeffs, other.coeffs) <= tol * scale;
}

CrossRatioClass cross_ratio(const Subspace& u1, const Subspace& u2,
                            const Subspace& u3, const Subspace& u4,
                            const Tolerances& tol) {
  require_transverse(u1, u2, "cross-ratio pair (U1,U2)", tol);
  require_transverse(u3, u4, "cross-ratio pair (U3,U4)", tol);
  Mat p12 = projection(u1, u2, tol);
  Mat p34 = projection(u3, u4, tol);
  const Eigen::Index n = u1.dim();
  // Restrict to U1 and re-express in the stored basis of U1.
  Mat image = p12 * (p34 * u1.basis());
  Mat endo = u1.basis().colPivHouseholderQr().solve(image);
  return CrossRatioClass(endo.topRows(n));
}

CrossRatioClass cross_ratio_via_graphs(const Subspace& u1, const Subspace& u2,
                                       const Subspace& u3, const Subspace& u4,
                                       const Tolerances& tol) {
  Mat f = as_graph(u2, u1, u3, tol);
  Mat g = as_graph(u4, u1, u3, tol);
  if (inverse_condition(f) <= tol.rank_tol)
    throw error(errc::not_transverse, "U2 is not transverse to U1");
  return CrossRatioClass(f.partialPivLu().solve(g));
}

double scalar_deviation(const Mat& w, Eigen::Index d) {
  if (w.rows() != d || w.cols() != d)
    throw error(errc::dimension_mismatch, "scalar_deviation dimension mismatch");
  const double norm = w.norm();
  if (norm == 0.0) throw error(errc::zero_matrix, "scalar_deviation of the zero matrix");
  const double mean = w.trace() / static_cast<double>(d);
  return (w - mean * Mat::Identity(d, d)).norm() / norm;
}

std::optional<int> projective_order(const Mat& w, int max_k, double tol,
                                    const Tolerances& reg) {
  if (w.rows() != w.cols())
    throw error(errc::dimension_mismatch, "projective_order needs a square matrix");
  require_finite(w, "projective_order input");
  if (inverse_condition(w) < 1.0 / reg.cond_max)
    throw error(errc::not_invertible, "matrix is numerically singular");
  Mat power = Mat::Identity(w.rows(), w.cols());
  for (int k = 1; k <= max_k; ++k) {
    power = power * w;
    power /= power.norm();  // scalar deviation is scale-free
    if (scalar_deviation(power, w.rows()) < tol) return k;
  }
  return std::nullopt;
}

std::vector<double> finite_order_grid(int n) {
  if (n < 2) throw error(errc::construction_failed, "grid order must be >= 2");
  std::vector<double> grid;
  grid.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double s = std::sin(k * M_PI / (2.0 * n));
    grid.push_back(s * s);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-15; }),
             grid.end());
  return grid;
}

}  // namespace trg
