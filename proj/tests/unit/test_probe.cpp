#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "trg/probe.hpp"
#include "trg/symplectic.hpp"

using namespace trg;

TEST_CASE("relation residual vanishes only on genuine representations") {
  const Rep rep = build_rep(RepKind::diagonal, TriangleParams(2, 3, 7), 2);
  CHECK(relation_residual(rep) < 1e-20);

  const Rep moved = perturb(rep, 1e-3, 17);
  const double r = relation_residual(moved);
  CHECK(r > 1e-12);
  CHECK(r < 1e-2);

  Rep broken = rep;
  broken.r[0] = Mat::Identity(4, 4);
  CHECK(relation_residual(broken) > 0.1);
}

TEST_CASE("relation residual includes the symplectic penalty") {
  const Rep rep = build_rep(RepKind::symplectic, TriangleParams(3, 4, 5), 2,
                            std::pair{1, 1});
  CHECK(relation_residual(rep) < 1e-20);
  const Rep moved = perturb(rep, 1e-3, 23);
  CHECK(relation_residual(moved) > 1e-12);
}

TEST_CASE("perturb with zero magnitude is the identity") {
  const Rep rep = build_rep(RepKind::diagonal, TriangleParams(2, 3, 7), 2);
  const Rep same = perturb(rep, 0.0, 99);
  for (int i = 0; i < 3; ++i) {
    CHECK((same.u_plus[i].basis() - rep.u_plus[i].basis()).norm() == 0.0);
    CHECK((same.u_minus[i].basis() - rep.u_minus[i].basis()).norm() == 0.0);
    CHECK((same.r[i] - rep.r[i]).norm() < 1e-12);
  }
}

TEST_CASE("perturb is deterministic in the seed") {
  const Rep rep = build_rep(RepKind::diagonal, TriangleParams(3, 4, 5), 2);
  const Rep a = perturb(rep, 1e-3, 4242);
  const Rep b = perturb(rep, 1e-3, 4242);
  const Rep c = perturb(rep, 1e-3, 4243);
  for (int i = 0; i < 3; ++i) {
    CHECK((a.u_plus[i].basis() - b.u_plus[i].basis()).norm() == 0.0);
    CHECK((a.r[i] - b.r[i]).norm() == 0.0);
  }
  bool differs = false;
  for (int i = 0; i < 3; ++i)
    differs = differs || (a.u_plus[i].basis() - c.u_plus[i].basis()).norm() > 0;
  CHECK(differs);
}

TEST_CASE("perturb moves each subspace by exactly the requested graph norm") {
  const Rep rep = build_rep(RepKind::diagonal, TriangleParams(2, 3, 7), 2);
  const double magnitude = 1e-3;
  const Rep moved = perturb(rep, magnitude, 7);
  for (int i = 0; i < 3; ++i) {
    const Mat z = as_graph(moved.u_plus[i], rep.u_plus[i], rep.u_minus[i]);
    CHECK(std::abs(z.norm() - magnitude) < 1e-12);
  }
}

TEST_CASE("graph perturbation equals tangent of principal angles on orthogonal splittings") {
  // Hand-built involution pair with orthonormal, mutually orthogonal
  // eigenspaces: principal angles then satisfy tan(theta_i) = sigma_i(Z).
  const int n = 2;
  Rep rep = build_rep(RepKind::diagonal, TriangleParams(2, 3, 7), n);
  rep.u_plus[0] = Subspace::coordinate_block(2 * n, 0, n);
  rep.u_minus[0] = Subspace::coordinate_block(2 * n, n, n);
  rep.r[0] = reflection(rep.u_plus[0], rep.u_minus[0]);

  const double magnitude = 1e-3;
  const Rep moved = perturb(rep, magnitude, 11);
  Eigen::JacobiSVD<Mat> svd(rep.u_plus[0].onb().transpose() * moved.u_plus[0].onb());
  double tan_norm_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double c = std::min(svd.singularValues()(i), 1.0);
    const double t = std::tan(std::acos(c));
    tan_norm_sq += t * t;
  }
  CHECK(std::abs(std::sqrt(tan_norm_sq) - magnitude) < 1e-9);
}

TEST_CASE("projection returns immediately on the relation variety") {
  const Rep rep = build_rep(RepKind::diagonal, TriangleParams(2, 3, 7), 2);
  ProbeParams params;
  const auto result = project_to_relation_variety(rep, params);
  CHECK(result.converged);
  CHECK(result.iterations == 0);
  CHECK(result.residual < 1e-20);
}

TEST_CASE("projection pulls a small perturbation back onto the variety") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const Rep rep = build_rep(RepKind::diagonal, TriangleParams(2, 3, 7), 2);
    const Rep moved = perturb(rep, 1e-3, seed);
    ProbeParams params;
    const auto result = project_to_relation_variety(moved, params);
    CHECK(result.converged);
    CHECK(result.residual < 1e-12);
    CHECK_NOTHROW(validate_rep(result.rep, 1e-6));
  }
}

TEST_CASE("projection of a wild perturbation may fail but must not crash") {
  const Rep rep = build_rep(RepKind::diagonal, TriangleParams(2, 3, 7), 2);
  ProbeParams params;
  params.max_iter = 40;
  try {
    const Rep wild = perturb(rep, 10.0, 5);
    const auto result = project_to_relation_variety(wild, params);
    CHECK(result.residual >= 0.0);
  } catch (const error&) {
    // acceptable: the perturbation can leave the transversality chart
  }
}

TEST_CASE("conjugacy witness recovers the conjugator for irreducible kinds") {
  const Rep a = build_rep(RepKind::sympower, TriangleParams(3, 4, 5), 2);
  Mat g = test::random_invertible(4, 314, 0.05);
  Rep b = a;
  for (int i = 0; i < 3; ++i) b.r[i] = g * a.r[i] * g.inverse();
  for (int i = 0; i < 3; ++i) {
    b.u_plus[i] = Subspace(g * a.u_plus[i].basis());
    b.u_minus[i] = Subspace(g * a.u_minus[i].basis());
  }
  const auto w = conjugacy_witness(a, b);
  REQUIRE(w.has_value());
  CHECK(w->intertwine_residual < 1e-8);
  // The commutant is scalar, so the witness is proportional to g.
  const double c = (w->x.array() * g.array()).sum() / g.squaredNorm();
  CHECK((w->x - c * g).norm() < 1e-6 * g.norm());
}

TEST_CASE("conjugacy witness on a rep against itself") {
  const Rep a = build_rep(RepKind::diagonal, TriangleParams(2, 3, 7), 2);
  const auto w = conjugacy_witness(a, a);
  REQUIRE(w.has_value());
  CHECK(w->intertwine_residual < 1e-10);
  CHECK(w->cond < 1e8);
  CHECK(scalar_deviation(w->x) < 1e-8);  // the identity up to scale

  // The reported residual is the stated bound, recomputed from the witness.
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    worst = std::max(worst, (w->x * a.r[i] - a.r[i] * w->x).norm() / w->x.norm());
  CHECK(worst < 1e-8);
  CHECK(std::abs(worst - w->intertwine_residual) < 1e-12);
}

TEST_CASE("conjugacy witness finds conjugated diagonal reps") {
  const Rep a = build_rep(RepKind::diagonal, TriangleParams(3, 4, 5), 3);
  Mat g = test::random_invertible(6, 2718, 0.05);
  Rep b = a;
  for (int i = 0; i < 3; ++i) {
    b.r[i] = g * a.r[i] * g.inverse();
    b.u_plus[i] = Subspace(g * a.u_plus[i].basis());
    b.u_minus[i] = Subspace(g * a.u_minus[i].basis());
  }
  const auto w = conjugacy_witness(a, b);
  REQUIRE(w.has_value());
  CHECK(w->intertwine_residual < 1e-8);
}

TEST_CASE("no witness between the diagonal and negative-control reps") {
  const Rep a = build_rep(RepKind::diagonal, TriangleParams(2, 3, 7), 2);
  const Rep b = build_rep(RepKind::sympower, TriangleParams(2, 3, 7), 2);
  CHECK(!conjugacy_witness(a, b).has_value());
}

TEST_CASE("symplectic witnesses require matching form transport") {
  // Same triangle, same matrices, different preserved forms: the signatures
  // (2,0) and (1,1) must not be identified.
  const Rep pos = build_rep(RepKind::symplectic, TriangleParams(3, 4, 5), 2,
                            std::pair{2, 0});
  const Rep split = build_rep(RepKind::symplectic, TriangleParams(3, 4, 5), 2,
                              std::pair{1, 1});
  CHECK(!conjugacy_witness(pos, split).has_value());
  CHECK(conjugacy_witness(pos, pos).has_value());
  CHECK(conjugacy_witness(split, split).has_value());

  // Mixed symplectic/projective comparisons are rejected outright.
  const Rep lin = build_rep(RepKind::diagonal, TriangleParams(3, 4, 5), 2);
  CHECK_THROWS_AS(conjugacy_witness(pos, lin), error);
}

TEST_CASE("symplectic witness found for a symplectically conjugated rep") {
  const int n = 2;
  const Rep a = build_rep(RepKind::symplectic, TriangleParams(3, 4, 5), n,
                          std::pair{1, 1});
  const Mat omega = SymplecticSpace::from_signature(1, 1).omega;
  // Build a symplectic conjugator from shears in graph coordinates.
  Mat s1 = 0.5 * symmetrized(gaussian_matrix(n, n, 808));
  Mat sym1 = signature_matrix(1, 1) * s1;  // omega-compatible shear block
  Mat g = Mat::Identity(2 * n, 2 * n);
  g.topRightCorner(n, n) = sym1;
  REQUIRE((g.transpose() * omega * g - omega).norm() < 1e-12);

  Rep b = a;
  for (int i = 0; i < 3; ++i) {
    b.r[i] = g * a.r[i] * g.inverse();
    b.u_plus[i] = Subspace(g * a.u_plus[i].basis());
    b.u_minus[i] = Subspace(g * a.u_minus[i].basis());
  }
  const auto w = conjugacy_witness(a, b);
  REQUIRE(w.has_value());
  CHECK(w->intertwine_residual < 1e-8);
  const Mat pulled = w->x.transpose() * omega * w->x;
  const double c = (pulled.array() * omega.array()).sum() / omega.squaredNorm();
  CHECK((pulled - c * omega).norm() < 1e-7 * pulled.norm());
}

TEST_CASE("rigidity probe on a small diagonal case") {
  const Rep rep = build_rep(RepKind::diagonal, TriangleParams(2, 3, 7), 2);
  ProbeParams params;
  params.trials = 10;
  params.magnitude = 1e-3;
  params.seed = 7;
  const ProbeReport report = rigidity_probe(rep, params);
  CHECK(report.trials_run == 10);
  CHECK(report.converged == 10);
  CHECK(report.conjugate_to_base == 10);
  CHECK(report.max_invariant_drift < 1e-6);
  for (const auto& t : report.trials) {
    CHECK(t.converged);
    CHECK(t.conjugate);
    CHECK(t.conj_residual < params.conj_tol);
  }
}

TEST_CASE("rigidity probe reports are reproducible") {
  const Rep rep = build_rep(RepKind::diagonal, TriangleParams(3, 4, 5), 2);
  ProbeParams params;
  params.trials = 6;
  params.magnitude = 1e-3;
  params.seed = 99;
  const ProbeReport r1 = rigidity_probe(rep, params);
  const ProbeReport r2 = rigidity_probe(rep, params);
  CHECK(r1.converged == r2.converged);
  CHECK(r1.conjugate_to_base == r2.conjugate_to_base);
  CHECK(r1.max_invariant_drift == r2.max_invariant_drift);
  for (int t = 0; t < params.trials; ++t) {
    CHECK(r1.trials[t].residual == r2.trials[t].residual);
    CHECK(r1.trials[t].conjugate == r2.trials[t].conjugate);
  }
}

TEST_CASE("derived seeds separate trials") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(5, 3) == derive_seed(5, 3));
}
