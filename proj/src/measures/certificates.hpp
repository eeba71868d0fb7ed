#pragma once

// Certificate helpers shared by the measure solvers.

#include <limits>

#include "rescomp/free_sets/family.hpp"
#include "rescomp/solvers/config.hpp"

namespace rescomp::detail {

/// (1-μ)σ + μτ with τ the family's reference state.
Matrix floored(const Matrix& sigma, const FreeSetFamily& fam, double mu);

/// Witness W = σ^{-1/2} P σ^{-1/2}, P the projector onto the top eigenspace
/// of σ^{-1/2} ρ σ^{-1/2}.
Matrix top_eigen_witness(const Matrix& rho, const Matrix& sigma);

/// Lower bound on min over states ρ′ within trace distance eps of ρ of
/// 1 + R(ρ′), from a PSD witness: (tr(Wρ) - eps·spread(W)) / h_F(W), at least 1.
double robustness_witness_bound(const Matrix& w, const Matrix& rho, const FreeSetFamily& fam,
                                const SolverConfig& cfg, double eps = 0.0);

/// Best certificate found so far for 1 + R.
struct RobustnessCertificate {
  double upper = std::numeric_limits<double>::infinity();  // 1 + R ≤ upper
  double lower = 1.0;                                       // 1 + R ≥ lower
  Matrix sigma;                                             // free state attaining upper
  Matrix witness;

  /// Evaluates a candidate free state (already in F) and its top-eigen witness.
  void offer_state(const Matrix& rho, const Matrix& sigma_free, const FreeSetFamily& fam, const SolverConfig& cfg);
  void offer_witness(const Matrix& w, const Matrix& rho, const FreeSetFamily& fam, const SolverConfig& cfg);
  double gap() const { return upper - lower; }
};

}  // namespace rescomp::detail
