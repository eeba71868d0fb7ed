#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rescomp/free_sets/family.hpp"
#include "rescomp/solvers/config.hpp"

namespace rescomp {

/// A measure value with its certificate. `value` is attained by the
/// certificate (an upper bound for the minimizations here); `lower_bound`
/// is certified by a dual witness, and gap_bound = value - lower_bound.
struct MeasureResult {
  std::string measure;
  std::string family;
  std::string method;
  double value = 0.0;
  double lower_bound = 0.0;
  double gap_bound = 0.0;
  int iterations = 0;
  bool converged = true;

  std::optional<DensityMatrix> closest_free;    // σ*
  std::optional<DensityMatrix> noise_state;     // π* (robustness)
  std::optional<DensityMatrix> smoothed_state;  // ρ′* (smoothed log-robustness)
  std::optional<HermitianOperator> witness;

  /// For E: log₂(1-μ), the amount by which the mixing floor can overstate
  /// the value (already folded into lower_bound).
  double floor_correction = 0.0;

  nlohmann::json to_json(bool include_matrices = true) const;
};

/// E(ρ) = min_{σ∈F} S(ρ‖σ) in bits.
MeasureResult relative_entropy_of_resource(const DensityMatrix& rho, const FreeSetFamily& fam,
                                           const SolverConfig& cfg = {});

/// R(ρ) = min{s ≥ 0 : (ρ + sπ)/(1+s) ∈ F for some state π}.
MeasureResult global_robustness(const DensityMatrix& rho, const FreeSetFamily& fam, const SolverConfig& cfg = {});

/// log₂(1 + R(ρ)).
double log_robustness(const DensityMatrix& rho, const FreeSetFamily& fam, const SolverConfig& cfg = {});
MeasureResult log_robustness_result(const DensityMatrix& rho, const FreeSetFamily& fam, const SolverConfig& cfg = {});

/// min over states ρ′ with ½‖ρ′ - ρ‖₁ ≤ eps of log₂(1 + R(ρ′)); eps ∈ [0, 1).
MeasureResult smoothed_log_robustness(const DensityMatrix& rho, const FreeSetFamily& fam, double eps,
                                      const SolverConfig& cfg = {});

/// min_{σ∈F} ½‖ρ - σ‖₁.
MeasureResult trace_distance_of_resource(const DensityMatrix& rho, const FreeSetFamily& fam,
                                         const SolverConfig& cfg = {});

struct RegularizedEstimate {
  std::vector<int> n;
  std::vector<double> per_copy;  // E(ρ^{⊗n})/n
  std::vector<MeasureResult> results;
  double estimate = 0.0;         // last entry
  double gap_bound = 0.0;        // gap of the last entry, per copy
  bool converged = true;
};

/// E(ρ^{⊗n})/n for n = 1..n_max. Throws DimensionCap past total dimension 1024.
RegularizedEstimate regularized_estimate(const DensityMatrix& rho, const FreeSetFamily& fam, int n_max,
                                         const SolverConfig& cfg = {});

/// Throws NonConvergence if the result did not reach its target gap.
const MeasureResult& require_converged(const MeasureResult& r);

/// Throws DimensionCap when shape^{⊗n} exceeds the supported dimension.
void check_copy_dimension(const SubsystemShape& shape, int n);

}  // namespace rescomp
