#include "trg/triangle.hpp"

#include <cmath>

namespace trg {

TriangleParams::TriangleParams(int a, int b, int c) : k1(a), k2(b), k3(c) {
  if (k1 < 2 || k2 < 2 || k3 < 2)
    throw error(errc::not_hyperbolic, "triangle parameters must be >= 2");
  if (1.0 / k1 + 1.0 / k2 + 1.0 / k3 >= 1.0)
    throw error(errc::not_hyperbolic,
                "1/k1 + 1/k2 + 1/k3 must be < 1");
}

int TriangleParams::max_k() const { return std::max(k1, std::max(k2, k3)); }

std::array<double, 3> TriangleParams::lambdas() const {
  auto lam = [](int k) {
    const double s = std::sin(M_PI / (2.0 * k));
    return s * s;
  };
  return {lam(k1), lam(k2), lam(k3)};
}

const char* rep_kind_name(RepKind k) {
  switch (k) {
    case RepKind::diagonal: return "diagonal";
    case RepKind::symplectic: return "symplectic";
    case RepKind::sympower: return "sympower";
  }
  return "unknown";
}

void validate_rep(const Rep& rep, double scalar_tol, const Tolerances& tol) {
  const Eigen::Index d = rep.ambient_dim;
  for (int i = 0; i < 3; ++i) {
    if ((rep.r[i] * rep.r[i] - Mat::Identity(d, d)).norm() > 1e-10)
      throw error(errc::construction_failed, "generator is not an involution");
    if ((rep.r[i] - reflection(rep.u_plus[i], rep.u_minus[i], tol)).norm() > 1e-10)
      throw error(errc::construction_failed,
                  "generator does not match its eigenspace pair");
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const int expected = product_order(rep.params, i, j);
      auto got = projective_order(rep.r[i] * rep.r[j], 2 * rep.params.max_k(),
                                  scalar_tol, tol);
      if (!got || *got != expected)
        throw error(errc::construction_failed,
                    "pairwise product has wrong projective order");
    }
}

std::array<CrossRatioClass, 3> rep_cross_ratios(const Rep& rep, const Tolerances& tol) {
  return {cross_ratio(rep.u_plus[1], rep.u_minus[1], rep.u_plus[2], rep.u_minus[2], tol),
          cross_ratio(rep.u_plus[0], rep.u_minus[0], rep.u_plus[2], rep.u_minus[2], tol),
          cross_ratio(rep.u_plus[0], rep.u_minus[0], rep.u_plus[1], rep.u_minus[1], tol)};
}

Mat gram_matrix(const TriangleParams& k) {
  const double x = std::cos(M_PI / k.k1);
  const double y = std::cos(M_PI / k.k2);
  const double z = std::cos(M_PI / k.k3);
  Mat m(3, 3);
  m << 1, -x, -y,
      -x, 1, -z,
      -y, -z, 1;
  return m;
}

double phi(double l1, double l2, double l3) {
  return 1.0 - 2.0 * (l1 + l2 + l3) + 2.0 * (l1 * l2 + l2 * l3 + l1 * l3) +
         l1 * l1 + l2 * l2 + l3 * l3 - 4.0 * l1 * l2 * l3;
}

std::array<double, 3> geometric_graph_scalars(const TriangleParams& k) {
  const auto [l1, l2, l3] = k.lambdas();
  // l1 > 0 always holds for k1 >= 2; it divides the m3 formula.
  if (l1 <= 0.0)
    throw error(errc::degenerate_coefficients, "lambda1 must be positive");
  const double a = l3 * (1.0 - l2);
  const double b = l1 + l2 - l3 - 1.0;
  const double disc = phi(l1, l2, l3);
  if (disc <= 0.0)
    throw error(errc::non_real_roots, "discriminant is not positive");
  // Gauge fix: m1 is the +sqrt branch.
  const double m1 = (-b + std::sqrt(disc)) / (2.0 * a);
  const double m2 = l3 * m1;
  const double m3 = ((l1 - 1.0) + l3 * m1) / l1;
  return {m1, m2, m3};
}

Rep geometric_representation(const TriangleParams& k, const Tolerances& tol) {
  const auto m = geometric_graph_scalars(k);

  auto line = [](double x0, double x1) {
    Mat b(2, 1);
    b << x0, x1;
    return Subspace(std::move(b));
  };

  std::array<Subspace, 3> u_plus = {line(1, 0), line(0, 1), line(1, 1)};
  std::array<Subspace, 3> u_minus = {line(1, m[0]), line(1, m[1]), line(1, m[2])};
  std::array<Mat, 3> r;
  for (int i = 0; i < 3; ++i) r[i] = reflection(u_plus[i], u_minus[i], tol);

  Rep rep{2, RepKind::diagonal, std::nullopt, k, std::move(r),
          std::move(u_plus), std::move(u_minus)};
  validate_rep(rep, tol.scalar_tol, tol);
  return rep;
}

}  // namespace trg
