#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "trg/configurations.hpp"
#include "trg/json_io.hpp"

using namespace trg;

TEST_CASE("normalized geometric configuration reproduces the graph scalars") {
  const Rep rep = geometric_representation(TriangleParams(2, 3, 7));
  const Config6Normal c = extract_and_normalize(rep);
  CHECK(c.n() == 1);
  // C3 = M1^{-1} M2 must be sin^2(pi/14) whatever the normalization scale.
  CHECK(std::abs(c.M2()(0, 0) / c.M1()(0, 0) - 0.049515566048790434) < 1e-10);
}

TEST_CASE("diagonal representations normalize to scalar matrices") {
  const Rep rep = build_rep(RepKind::diagonal, TriangleParams(2, 3, 7), 2);
  const Config6Normal c = extract_and_normalize(rep);
  for (const Mat* m : {&c.N(), &c.M1(), &c.M2(), &c.M3()})
    CHECK(scalar_deviation(*m) < 1e-9);
}

TEST_CASE("normalization is idempotent up to the stabilizer") {
  const Rep rep = build_rep(RepKind::diagonal, TriangleParams(3, 4, 5), 2);
  const Config6Normal once = extract_and_normalize(rep);
  const Config6Normal twice = normalize_six(once.reconstruct());
  CHECK(config_equivalent(once, twice));
}

TEST_CASE("configuration cross-ratio formulas match the projection definition") {
  const auto sol = solve_scalar_config(0.5, 0.25, 0.049515566048790434, 2, false);
  REQUIRE(!sol.configs.empty());
  for (const auto& c : sol.configs) {
    const auto formulas = config_cross_ratios(c);
    const auto sub = c.reconstruct();
    const CrossRatioClass direct[3] = {
        cross_ratio(sub[2], sub[3], sub[4], sub[5]),
        cross_ratio(sub[0], sub[1], sub[4], sub[5]),
        cross_ratio(sub[0], sub[1], sub[2], sub[3])};
    for (int i = 0; i < 3; ++i) {
      CHECK(formulas[i].same_class(direct[i], 1e-9));
      CHECK((formulas[i].endo - direct[i].endo).norm() <
            1e-9 * std::max(1.0, direct[i].endo.norm()));
    }
  }
}

TEST_CASE("triangle lambda targets solve to the expected class counts") {
  const auto lam = TriangleParams(2, 3, 7).lambdas();
  const auto one = solve_scalar_config(lam[0], lam[1], lam[2], 1, false);
  CHECK(one.enumerated == 2);
  CHECK(one.configs.size() == 2);

  const auto two = solve_scalar_config(lam[0], lam[1], lam[2], 2, false);
  CHECK(two.enumerated == 3);
  CHECK(two.configs.size() == 3);

  for (const auto& c : two.configs) {
    const auto classes = config_cross_ratios(c);
    for (int i = 0; i < 3; ++i)
      CHECK((classes[i].endo - lam[i] * Mat::Identity(2, 2)).norm() < 1e-9);
  }
}

TEST_CASE("M2 = M1 forces C3 = I") {
  Mat m1(2, 2);
  m1 << 2, 0.3, 0.3, 1.5;
  Mat n = Mat::Identity(2, 2);
  Mat m3(2, 2);
  m3 << -1, 0.1, 0.1, -2;
  const Config6Normal c(n, m1, m1 + 1e-13 * Mat::Identity(2, 2), m3, false);
  // M2 ~ M1 within roundoff: C3 must be the identity class.
  const auto classes = config_cross_ratios(c);
  CHECK((classes[2].endo - Mat::Identity(2, 2)).norm() < 1e-10);
}

TEST_CASE("solver error paths") {
  CHECK_THROWS_AS(solve_scalar_config(0.9, 0.9, 0.9, 1, false), error);    // phi <= 0
  CHECK_THROWS_AS(solve_scalar_config(0.5, 0.25, 0.0, 1, false), error);   // a = 0
  CHECK_THROWS_AS(solve_scalar_config(0.5, 1.0, 0.25, 1, false), error);   // a = 0
  CHECK_THROWS_AS(solve_scalar_config(0.0, 0.25, 0.05, 1, false), error);  // lambda1 = 0
}

TEST_CASE("quadratic condition residual vanishes on enumerated configs") {
  const auto lam = TriangleParams(3, 4, 5).lambdas();
  for (int n = 1; n <= 3; ++n) {
    const auto sol = solve_scalar_config(lam[0], lam[1], lam[2], n, false);
    CHECK(sol.enumerated == n + 1);
    for (const auto& c : sol.configs) {
      const Mat a1 = c.N().partialPivLu().solve(c.M1());
      const Mat residual = lam[2] * (1 - lam[1]) * a1 * a1 +
                           (lam[0] + lam[1] - lam[2] - 1) * a1 +
                           (1 - lam[0]) * Mat::Identity(n, n);
      CHECK(residual.norm() < 1e-10);
    }
  }
}

TEST_CASE("config equivalence is invariant under the diagonal action") {
  const auto lam = TriangleParams(2, 3, 7).lambdas();
  const auto sol = solve_scalar_config(lam[0], lam[1], lam[2], 2, false);
  REQUIRE(sol.configs.size() == 3);

  for (std::size_t i = 0; i < sol.configs.size(); ++i) {
    const auto sub = sol.configs[i].reconstruct();
    Mat g = test::random_invertible(4, 777 + i, 0.05);
    std::array<Subspace, 6> moved = {
        Subspace(g * sub[0].basis()), Subspace(g * sub[1].basis()),
        Subspace(g * sub[2].basis()), Subspace(g * sub[3].basis()),
        Subspace(g * sub[4].basis()), Subspace(g * sub[5].basis())};
    const Config6Normal back = normalize_six(moved);
    CHECK(config_equivalent(back, sol.configs[i]));
    // ... and distinguishes the other classes.
    for (std::size_t j = 0; j < sol.configs.size(); ++j)
      if (j != i) CHECK(!config_equivalent(back, sol.configs[j]));
  }
}

TEST_CASE("diagonal rep configuration matches an extreme enumerated class") {
  const auto lam = TriangleParams(2, 3, 7).lambdas();
  const Rep rep = build_rep(RepKind::diagonal, TriangleParams(2, 3, 7), 2);
  Config6Normal from_rep = extract_and_normalize(rep);
  const auto sol = solve_scalar_config(lam[0], lam[1], lam[2], 2, false);
  REQUIRE(sol.configs.size() == 3);
  const bool matches_first = config_equivalent(from_rep, sol.configs.front());
  const bool matches_last = config_equivalent(from_rep, sol.configs.back());
  CHECK((matches_first || matches_last));
}

TEST_CASE("symmetric variant produces symmetric matrices and symplectic normalization") {
  const auto lam = TriangleParams(3, 4, 5).lambdas();
  const auto sol = solve_scalar_config(lam[0], lam[1], lam[2], 2, true);
  CHECK(sol.enumerated == 3);
  for (const auto& c : sol.configs) {
    CHECK(c.symmetric());
    CHECK((c.M1() - c.M1().transpose()).norm() < 1e-12);
  }

  const Rep rep = build_rep(RepKind::symplectic, TriangleParams(3, 4, 5), 2,
                            std::pair{1, 1});
  const Config6Normal c = extract_and_normalize(rep);
  CHECK(c.symmetric());
  for (const Mat* m : {&c.N(), &c.M1(), &c.M2(), &c.M3()})
    CHECK((*m - m->transpose()).norm() < 1e-9 * std::max(1.0, m->norm()));
}

TEST_CASE("config equivalence rejects mismatched shapes") {
  const auto lam = TriangleParams(2, 3, 7).lambdas();
  const auto a = solve_scalar_config(lam[0], lam[1], lam[2], 1, false);
  const auto b = solve_scalar_config(lam[0], lam[1], lam[2], 2, false);
  CHECK_THROWS_AS(config_equivalent(a.configs[0], b.configs[0]), error);
}

TEST_CASE("configuration JSON round trip") {
  const auto lam = TriangleParams(2, 4, 6).lambdas();
  const auto sol = solve_scalar_config(lam[0], lam[1], lam[2], 2, true);
  REQUIRE(!sol.configs.empty());
  const json j = config_to_json(sol.configs[0], std::array{lam[0], lam[1], lam[2]});
  const Config6Normal back = config_from_json(j);
  CHECK(config_equivalent(back, sol.configs[0]));
  CHECK((back.N() - sol.configs[0].N()).norm() == 0.0);  // bit-faithful matrices
  CHECK(j.contains("lambda"));
}

TEST_CASE("transversality violations are filtered, not fatal") {
  const auto sol = solve_scalar_config(0.1, 0.1, 0.5, 2, false);
  CHECK(sol.enumerated == 3);
  CHECK(sol.configs.size() <= 3);
}
