#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rescomp/core/channel.hpp"
#include "rescomp/free_sets/family.hpp"
#include "rescomp/hypothesis/hypothesis.hpp"
#include "rescomp/solvers/config.hpp"

namespace rescomp {

struct ProtocolOptions {
  /// ε_n = eps_prefactor · n^{-1/2}.
  double eps_prefactor = 0.15;
  /// Copies used for the regularized estimates Ê^∞ (clamped by the
  /// dimension limits of the families involved).
  int estimate_copies = 3;
  double target_free_threshold = 1e-3;
  /// δ in the check max_ω tr(A_n ω) ≤ 2^{-n(E(ρ) - δ)}.
  double proof_delta = 0.2;
  int proof_min_n = 3;
};

double eps_schedule(int n, const ProtocolOptions& opts = {});

struct RateEstimates {
  double source = 0.0;  // Ê^∞(ρ)
  double target = 0.0;  // Ê^∞(σ)
  int source_copies = 0;
  int target_copies = 0;
  double source_single = 0.0;  // E(ρ)
  bool converged = true;

  double predicted_rate() const { return source / target; }
};

/// Throws TargetIsFree when Ê^∞(σ) ≤ opts.target_free_threshold.
RateEstimates estimate_rates(const DensityMatrix& rho, const DensityMatrix& sigma, const FreeSetFamily& fam_source,
                             const FreeSetFamily& fam_target, const SolverConfig& cfg = {},
                             const ProtocolOptions& opts = {});

/// Output copies for n inputs: n·rate rounded to nearest, ties toward floor.
int output_copies(int n, double rate);

/// Λ_n(X) = tr(A_n X) σ_n + tr((I - A_n) X) π_n.
struct ProtocolSpec {
  DensityMatrix source;
  DensityMatrix target;
  FreeSetFamily fam_source;
  FreeSetFamily fam_target;
  int n = 0;
  int m = 0;
  double eps_n = 0.0;
  HypothesisTestResult hypothesis;  // holds A_n
  DensityMatrix sigma_n;
  DensityMatrix pi_n;
  double robustness_sigma_n = 0.0;
  QuantumChannel channel;
  bool converged = true;

  const TestOperator& test() const noexcept { return hypothesis.test; }
};

ProtocolSpec build_protocol(const DensityMatrix& rho, const DensityMatrix& sigma, const FreeSetFamily& fam_source,
                            const FreeSetFamily& fam_target, int n, const RateEstimates& estimates,
                            const SolverConfig& cfg = {}, const ProtocolOptions& opts = {});

/// Same family kind on both sides (the family is re-shaped for σ).
ProtocolSpec build_protocol(const DensityMatrix& rho, const DensityMatrix& sigma, const FreeSetFamily& fam, int n,
                            const SolverConfig& cfg = {}, const ProtocolOptions& opts = {});

struct RngLevel {
  double level = 0.0;
  int evaluations = 0;
  bool sampled = false;  // inner maximum over sampled extreme points only
  bool converged = true;
};

/// max over free inputs ω of R(Λ(ω)) with respect to fam_out.
RngLevel eps_rng_level_detail(const QuantumChannel& ch, const FreeSetFamily& fam_in, const FreeSetFamily& fam_out,
                              const SolverConfig& cfg = {});
double eps_rng_level(const QuantumChannel& ch, const FreeSetFamily& fam_in, const FreeSetFamily& fam_out,
                     const SolverConfig& cfg = {});

struct RateEntry {
  int n = 0;
  int m = 0;
  double eps_n = 0.0;
  double beta_n = 0.0;
  double out_trace_distance = 0.0;
  double eps_rng = 0.0;
  double predicted_rate = 0.0;
  double achieved_rate = 0.0;

  double robustness_sigma_n = 0.0;
  double robustness_pi_n = 0.0;
  bool pi_bound_holds = true;  // R(π_n) ≤ 1/R(σ_n) + tol
  double max_free_acceptance = 0.0;
  double proof_bound = 0.0;    // 2^{-n(E(ρ) - δ)}
  bool proof_bound_checked = false;
  bool proof_bound_holds = true;
  bool converged = true;
};

struct RateExperimentReport {
  std::string fam_source;
  std::string fam_target;
  RateEstimates estimates;
  ProtocolOptions options;
  bool eps_rng_sampled = false;
  std::vector<RateEntry> entries;

  bool converged() const;
  /// n,m,eps_n,beta_n,out_trace_dist,eps_rng,predicted_rate,achieved_rate
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

RateExperimentReport rate_experiment(const DensityMatrix& rho, const DensityMatrix& sigma,
                                     const FreeSetFamily& fam_source, const FreeSetFamily& fam_target, int n_max,
                                     const SolverConfig& cfg = {}, const ProtocolOptions& opts = {});
RateExperimentReport rate_experiment(const DensityMatrix& rho, const DensityMatrix& sigma, const FreeSetFamily& fam,
                                     int n_max, const SolverConfig& cfg = {}, const ProtocolOptions& opts = {});

}  // namespace rescomp
