#pragma once

#include <array>
#include <optional>
#include <vector>

#include "trg/symplectic.hpp"
#include "trg/triangle.hpp"

namespace trg {

// Normalized 6-tuple data: U1+ and U2+ are the coordinate blocks, the other
// four subspaces are graphs U3+ = Graph(N), Ui- = Graph(Mi) of maps
// U1+ -> U2+. In the Lagrangian variant the coordinates are symplectic and
// all four matrices are symmetric.
class Config6Normal {
 public:
  Config6Normal(Mat n_mat, Mat m1, Mat m2, Mat m3, bool symmetric,
                const Tolerances& tol = {});

  int n() const { return static_cast<int>(n_.rows()); }
  bool symmetric() const { return symmetric_; }
  const Mat& N() const { return n_; }
  const Mat& M1() const { return m1_; }
  const Mat& M2() const { return m2_; }
  const Mat& M3() const { return m3_; }

  // (U1+, U1-, U2+, U2-, U3+, U3-) as concrete subspaces of R^{2n}.
  std::array<Subspace, 6> reconstruct() const;

 private:
  Mat n_, m1_, m2_, m3_;
  bool symmetric_;
};

// Normalizes a pairwise transverse 6-tuple (U1+, U1-, U2+, U2-, U3+, U3-) by
// a global change of coordinates sending U1+ and U2+ to the coordinate
// blocks. With a symplectic space given, the second block basis is chosen
// omega-dual to the first so that graph matrices of Lagrangians come out
// symmetric.
Config6Normal normalize_six(const std::array<Subspace, 6>& tuple,
                            const std::optional<SymplecticSpace>& sympl = std::nullopt,
                            const Tolerances& tol = {});

Config6Normal extract_and_normalize(const Rep& rep, const Tolerances& tol = {});

// (C1, C2, C3) from the graph matrices:
// C1 = (N-M2)(N-M3)^{-1}, C2 = M1^{-1}(N-M1)(N-M3)^{-1}M3, C3 = M1^{-1}M2.
std::array<CrossRatioClass, 3> config_cross_ratios(const Config6Normal& c);

struct ScalarConfigSolution {
  std::vector<Config6Normal> configs;
  int enumerated;  // orbit classes before the transversality filter (n+1)
};

// Enumerates the configurations with scalar cross-ratio targets
// (lambda1 I, lambda2 I, lambda3 I): N = I and M1 diagonal with entries
// from the two roots of the quadratic condition, one class per root
// multiplicity.
ScalarConfigSolution solve_scalar_config(double lambda1, double lambda2,
                                         double lambda3, int n, bool symmetric,
                                         const Tolerances& tol = {});

// Equality of configurations up to the diagonal PGL action, decided on the
// canonical data: sorted eigenvalues of N^{-1}Mi and the three cross-ratio
// charpolys. Complete for the scalar-target families enumerated above.
bool config_equivalent(const Config6Normal& a, const Config6Normal& b,
                       const Tolerances& tol = {});

}  // namespace trg
