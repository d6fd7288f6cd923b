#include "trg/embed.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <vector>

#include "trg/symplectic.hpp"

namespace trg {

Line make_line(double x0, double x1) {
  Mat b(2, 1);
  b << x0, x1;
  return Line(std::move(b));
}

namespace {

void require_2x2_invertible(const Mat& a, const Tolerances& tol) {
  if (a.rows() != 2 || a.cols() != 2)
    throw error(errc::dimension_mismatch, "expected a 2x2 matrix");
  require_finite(a, "embedding input");
  if (inverse_condition(a) < 1.0 / tol.cond_max)
    throw error(errc::not_invertible, "2x2 input is numerically singular");
}

// Kernel of (m - mu I) as an orthonormal basis, taken from the smallest
// singular directions.
Mat eigenspace_basis(const Mat& m, double mu, Eigen::Index expected_dim) {
  Eigen::JacobiSVD<Mat> svd(m - mu * Mat::Identity(m.rows(), m.cols()),
                            Eigen::ComputeFullV);
  return svd.matrixV().rightCols(expected_dim);
}

}  // namespace

Mat diagonal_embed(const Mat& a, int n, const Tolerances& tol) {
  require_2x2_invertible(a, tol);
  Mat out = Mat::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j)
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        out(pair_index(j, r), pair_index(j, c)) = a(r, c);
  return out;
}

Subspace xi(const Line& l, int n) {
  if (l.ambient_dim() != 2)
    throw error(errc::dimension_mismatch, "xi expects a line in R^2");
  Mat b = Mat::Zero(2 * n, n);
  for (int j = 0; j < n; ++j) {
    b(pair_index(j, 0), j) = l.basis()(0, 0);
    b(pair_index(j, 1), j) = l.basis()(1, 0);
  }
  return Subspace(std::move(b));
}

Mat symmetric_power_embed(const Mat& a, int n, const Tolerances& tol) {
  require_2x2_invertible(a, tol);
  const int d = 2 * n - 1;  // polynomial degree, dimension d+1 = 2n

  // Binomial expansion of (p e1 + q e2)^k as coefficients on e1^{k-i} e2^i.
  auto power_coeffs = [](double p, double q, int k) {
    std::vector<double> c{1.0};
    for (int step = 0; step < k; ++step) {
      std::vector<double> next(c.size() + 1, 0.0);
      for (std::size_t i = 0; i < c.size(); ++i) {
        next[i] += p * c[i];
        next[i + 1] += q * c[i];
      }
      c = std::move(next);
    }
    return c;
  };

  Mat out = Mat::Zero(d + 1, d + 1);
  for (int j = 0; j <= d; ++j) {
    // Image of the basis monomial e1^{d-j} e2^j under e1 -> A e1, e2 -> A e2.
    auto left = power_coeffs(a(0, 0), a(1, 0), d - j);
    auto right = power_coeffs(a(0, 1), a(1, 1), j);
    for (std::size_t s = 0; s < left.size(); ++s)
      for (std::size_t t = 0; t < right.size(); ++t)
        out(s + t, j) += left[s] * right[t];
  }
  return out;
}

Rep build_rep(RepKind kind, const TriangleParams& k, int n,
              std::optional<std::pair<int, int>> signature,
              const Tolerances& tol) {
  if (n < 1) throw error(errc::dimension_mismatch, "n must be >= 1");
  if (kind == RepKind::symplectic) {
    if (!signature)
      throw error(errc::signature_mismatch, "symplectic kind needs a signature");
    if (signature->first < 0 || signature->second < 0 ||
        signature->first + signature->second != n)
      throw error(errc::signature_mismatch, "signature must satisfy p+q = n");
  } else if (signature) {
    throw error(errc::signature_mismatch,
                "signature is only meaningful for the symplectic kind");
  }

  const Rep base = geometric_representation(k, tol);
  std::array<Mat, 3> r;
  std::array<std::optional<Subspace>, 3> plus, minus;

  switch (kind) {
    case RepKind::diagonal:
      for (int i = 0; i < 3; ++i) {
        r[i] = diagonal_embed(base.r[i], n, tol);
        plus[i] = xi(base.u_plus[i], n);
        minus[i] = xi(base.u_minus[i], n);
      }
      break;
    case RepKind::symplectic:
      for (int i = 0; i < 3; ++i) {
        r[i] = tensor_embed(base.r[i], *signature, tol);
        plus[i] = line_tensor(base.u_plus[i], n);
        minus[i] = line_tensor(base.u_minus[i], n);
      }
      break;
    case RepKind::sympower:
      for (int i = 0; i < 3; ++i) {
        r[i] = symmetric_power_embed(base.r[i], n, tol);
        plus[i] = Subspace(eigenspace_basis(r[i], 1.0, n));
        minus[i] = Subspace(eigenspace_basis(r[i], -1.0, n));
        // Rebuild the generator from its eigenspaces so the involution and
        // the eigenspace pairing are exact.
        r[i] = reflection(*plus[i], *minus[i], tol);
      }
      break;
  }

  Rep rep{2 * n,
          kind,
          signature,
          k,
          std::move(r),
          {std::move(*plus[0]), std::move(*plus[1]), std::move(*plus[2])},
          {std::move(*minus[0]), std::move(*minus[1]), std::move(*minus[2])}};
  validate_rep(rep, tol.scalar_tol, tol);
  return rep;
}

long long expected_dimension_diagonal(int n) {
  if (n < 1) throw error(errc::dimension_mismatch, "n must be >= 1");
  const long long nn = n;
  const long long dim_pgl = 4 * nn * nn - 1;
  const long long dim_centralizer = 2 * nn * nn - 1;
  const long long dim_class = dim_pgl - dim_centralizer;
  return (3 * dim_class - 2 * dim_pgl) / 2;
}

}  // namespace trg
