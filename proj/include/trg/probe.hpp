#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "trg/embed.hpp"

namespace trg {

struct ProbeParams {
  int trials = 100;
  double magnitude = 1e-3;
  std::uint64_t seed = 0;
  int max_iter = 200;
  double relation_tol = 1e-12;
  double conj_tol = 1e-8;

  void validate() const {
    if (trials < 1 || magnitude <= 0 || max_iter < 1 || relation_tol <= 0 ||
        conj_tol <= 0)
      throw error(errc::construction_failed, "invalid probe parameters");
  }
};

struct TrialRecord {
  int seed_offset = 0;
  bool converged = false;
  double residual = 0.0;       // relation residual after projection
  bool conjugate = false;
  double conj_residual = 0.0;  // intertwining residual of the witness
  double witness_cond = 0.0;
  double drift = 0.0;          // cross-ratio charpoly drift from the base
};

struct ProbeReport {
  int trials_run = 0;
  int converged = 0;
  int conjugate_to_base = 0;
  double max_invariant_drift = 0.0;
  std::vector<TrialRecord> trials;
};

// Deterministic per-trial seed derivation.
std::uint64_t derive_seed(std::uint64_t base, int trial);

// Seeded standard-normal matrix (Box-Muller over mt19937_64, so output is
// independent of the standard library's distribution internals).
Mat gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

// Sum over pairwise products W = (Ri Rj)^{k_l} of scalar_deviation(W)^2;
// symplectic kinds add ||Ri^T O Ri + O||_F^2 / ||O||_F^2 per generator.
double relation_residual(const Rep& rep, const Tolerances& tol = {});

// Moves every eigenspace to the graph of a random matrix of exact Frobenius
// norm `magnitude` over its opposite-eigenspace splitting and rebuilds the
// reflections from the perturbed pairs.
Rep perturb(const Rep& rep, double magnitude, std::uint64_t seed,
            const Tolerances& tol = {});

struct ProjectionResult {
  Rep rep;
  bool converged = false;
  double residual = 0.0;
  int iterations = 0;
};

// Levenberg-Marquardt over the 6 n^2 graph coordinates of the six
// eigenspaces; reflections are rebuilt exactly from subspace pairs at every
// evaluation. The global conjugation gauge is left free; damping handles
// the rank-deficient Jacobian.
ProjectionResult project_to_relation_variety(const Rep& rep, const ProbeParams& params,
                                             const Tolerances& tol = {});

struct Witness {
  Mat x;
  double cond = 0.0;
  double intertwine_residual = 0.0;
};

// Invertible X with X a.Ri = b.Ri X for all generators, harvested from the
// null space of the stacked intertwining system. For symplectic reps the
// witness must additionally transport the forms, X^T O_b X ~ c O_a, which is
// what separates different signatures.
std::optional<Witness> conjugacy_witness(const Rep& a, const Rep& b,
                                         const Tolerances& tol = {});

// perturb -> project -> compare invariants and search a conjugacy witness,
// once per trial. Trials run concurrently; the report is deterministic in
// (rep, params).
ProbeReport rigidity_probe(const Rep& rep, const ProbeParams& params,
                           const Tolerances& tol = {});

}  // namespace trg
