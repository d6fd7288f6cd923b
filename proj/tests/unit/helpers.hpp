#pragma once

#include <array>
#include <cstdint>

#include "trg/probe.hpp"

namespace trg::test {

inline Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Subspace span2(double x0, double x1) {
  Mat b(2, 1);
  b << x0, x1;
  return Subspace(std::move(b));
}

inline Subspace random_subspace(Eigen::Index n, std::uint64_t seed) {
  return Subspace(gaussian_matrix(2 * n, n, seed));
}

// Pairwise transverse quadruple with a conditioning margin, by rejection.
inline std::array<Subspace, 4> random_transverse_quadruple(Eigen::Index n,
                                                           std::uint64_t seed,
                                                           double margin = 0.05) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t s = seed * 1000003ULL + attempt * 7919ULL;
    std::array<Subspace, 4> q = {random_subspace(n, s), random_subspace(n, s + 1),
                                 random_subspace(n, s + 2), random_subspace(n, s + 3)};
    bool ok = true;
    for (int i = 0; i < 4 && ok; ++i)
      for (int j = i + 1; j < 4 && ok; ++j) {
        Mat joint(2 * n, 2 * n);
        joint << q[i].onb(), q[j].onb();
        ok = inverse_condition(joint) > margin;
      }
    if (ok) return q;
  }
}

inline Mat random_invertible(Eigen::Index d, std::uint64_t seed, double margin = 0.02) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    Mat g = gaussian_matrix(d, d, seed * 477463ULL + attempt);
    if (inverse_condition(g) > margin) return g;
  }
}

}  // namespace trg::test
