#pragma once

#include <string>
#include <vector>

#include "rescomp/free_sets/family.hpp"
#include "rescomp/solvers/config.hpp"

namespace rescomp {

struct HypothesisTestResult {
  double beta = 0.0;      // max_{ω∈F_n} tr(ωA) for the returned test
  double lower_bound = 0.0;
  TestOperator test;      // A_n
  double type1 = 0.0;     // tr[ρ^{⊗n}(I - A_n)]
  DensityMatrix worst_free;
  int iterations = 0;
  bool converged = true;
  /// The inner maximum ran over sampled extreme points only (PPT), so beta
  /// estimates the true value from below.
  bool sampled_extreme_points = false;
  std::string method;
};

/// Exact Neyman–Pearson test: min tr(ωA) over 0 ⪯ A ⪯ I with tr(ρA) ≥ 1 - eps.
/// eps ∈ [0, 1).
HypothesisTestResult beta_singleton(const DensityMatrix& rho_n, const DensityMatrix& omega_n, double eps);

/// β_n(ρ, eps) against the n-copy free set. eps ∈ (0, 1).
HypothesisTestResult beta_n(const DensityMatrix& rho, const FreeSetFamily& fam, int n, double eps,
                            const SolverConfig& cfg = {});

struct ExponentEntry {
  int n = 0;
  double beta = 0.0;
  double exponent = 0.0;            // -log₂(β_n)/n
  double e_infinity_estimate = 0.0; // E(ρ^{⊗n})/n where computed, else the final estimate
};

struct ExponentSequence {
  double eps = 0.0;
  std::vector<ExponentEntry> entries;
  double e_infinity_estimate = 0.0;
  int e_infinity_n = 0;
  bool lower_bound_estimate = false;
  bool converged = true;

  std::string to_csv() const;
};

/// -log₂(β_n)/n for n = 1..n_max, alongside E(ρ^{⊗k})/k for k up to
/// regularization_n_max (0 picks n_max for closed-form families and the
/// largest k with dimension ≤ 64 otherwise).
ExponentSequence stein_exponent_sequence(const DensityMatrix& rho, const FreeSetFamily& fam, int n_max, double eps,
                                         const SolverConfig& cfg = {}, int regularization_n_max = 0);

}  // namespace rescomp
