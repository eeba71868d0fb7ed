#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rescomp/core/state.hpp"
#include "rescomp/solvers/config.hpp"

namespace rescomp {

inline constexpr double kMembershipTol = 1e-7;

enum class FamilyKind { Incoherent, Ppt, GibbsSingleton, MaxMixedSingleton, Polytope };

/// How a polytope family extends to n copies.
enum class PolytopeCopyRule {
  TensorHull,  // hull of all n-fold tensor products of generators
  Naive,       // hull of g^{⊗n} only; breaks closure under tensor products
};

std::string to_string(FamilyKind kind);

struct MembershipCertificate {
  bool is_member = false;
  /// Lower bound on the trace distance to the set (0 for members).
  double distance_bound = 0.0;
  /// Separating operator: tr(Wρ) exceeds max_{σ∈F} tr(Wσ) for non-members.
  std::optional<HermitianOperator> witness;
};

/// argmin_{σ∈F} tr(Gσ), with a certified lower bound on the minimum.
struct LinearMinimization {
  DensityMatrix point;
  double value = 0.0;
  double lower_bound = 0.0;
};

/// In-place projection onto a convex set of matrices.
using MatrixProjection = std::function<void(Matrix&)>;

/// The free states F_m of one resource theory on one subsystem shape,
/// together with the rules that produce the family on related shapes
/// (n copies, reduced factors, permuted factors).
class FreeSetFamily {
 public:
  static FreeSetFamily incoherent(const SubsystemShape& shape);
  /// PPT with respect to the bipartition (party_a : rest).
  static FreeSetFamily ppt(const SubsystemShape& shape, std::vector<int> party_a = {0});
  /// {e^{-βH}/Z}.
  static FreeSetFamily gibbs(const HermitianOperator& hamiltonian, double inverse_temperature);
  static FreeSetFamily max_mixed(const SubsystemShape& shape);
  static FreeSetFamily singleton(const DensityMatrix& state);
  static FreeSetFamily polytope(std::vector<DensityMatrix> generators,
                                PolytopeCopyRule rule = PolytopeCopyRule::TensorHull);
  /// Polytope {|0⟩⟨0|, |+⟩⟨+|} on a qubit with the naive n-copy rule.
  static FreeSetFamily adversarial_polytope();

  FamilyKind kind() const noexcept { return kind_; }
  const SubsystemShape& shape() const noexcept { return shape_; }
  bool is_singleton() const noexcept {
    return kind_ == FamilyKind::GibbsSingleton || kind_ == FamilyKind::MaxMixedSingleton;
  }
  const std::vector<int>& party_a() const noexcept { return party_a_; }
  const std::vector<DensityMatrix>& generators() const noexcept { return generators_; }
  std::string name() const;

  MembershipCertificate contains(const DensityMatrix& rho, double tol = kMembershipTol) const;
  bool is_member(const Matrix& rho, double tol = kMembershipTol) const;

  LinearMinimization linear_minimization(const HermitianOperator& g, const SolverConfig& cfg = {}) const;
  LinearMinimization linear_minimization(const Matrix& g, const SolverConfig& cfg = {}) const;
  /// Certified upper bound on max_{σ∈F} tr(Wσ).
  double support_function(const Matrix& w, const SolverConfig& cfg = {}) const;

  /// Exact extreme points where known (all of them, max_count ignored);
  /// otherwise max_count sampled boundary candidates.
  std::vector<DensityMatrix> extreme_points(int max_count = 64, std::uint64_t seed = 1) const;
  bool extreme_points_exact() const noexcept { return kind_ != FamilyKind::Ppt; }

  /// A full-rank member where one exists (I/d, the singleton state, the
  /// generator barycenter).
  const DensityMatrix& reference_state() const noexcept { return reference_; }

  FreeSetFamily n_copy(int n) const;
  /// Family on the kept factors (original order).
  FreeSetFamily reduced(std::span<const int> keep) const;
  /// Family on the permuted shape: factor k is old factor perm[k].
  FreeSetFamily permuted(std::span<const int> perm) const;
  /// Same theory on another shape (Incoherent, PPT, maximally mixed only).
  FreeSetFamily with_shape(const SubsystemShape& shape) const;

  /// Exact projectors whose intersection is F (unit trace included) or the
  /// cone it generates.
  std::vector<MatrixProjection> set_projections() const;
  std::vector<MatrixProjection> cone_projections() const;
  /// Projection onto F (Dykstra's alternating projections, at most
  /// max_iterations rounds, when F is an intersection).
  Matrix project(const Matrix& x, int max_iterations = 20000) const;
  /// Moves a near-member into F exactly (mixing with the reference state
  /// where needed). The result is what certificates are evaluated on.
  DensityMatrix repair(const Matrix& x) const;

  nlohmann::json to_json() const;
  static FreeSetFamily from_json(const nlohmann::json& j);

 private:
  FreeSetFamily(FamilyKind kind, SubsystemShape shape);
  void finish();

  FamilyKind kind_;
  SubsystemShape shape_;
  DensityMatrix reference_;
  std::vector<int> party_a_;
  std::vector<DensityMatrix> generators_;
  std::vector<DensityMatrix> base_generators_;
  PolytopeCopyRule rule_ = PolytopeCopyRule::TensorHull;
  int copies_ = 1;
  std::optional<HermitianOperator> hamiltonian_;
  double beta_ = 0.0;
};

/// Generic witness bound: (tr(Wρ) - h_F(W)) / (λ_max(W) - λ_min(W)) lower-bounds
/// the trace distance from ρ to F whenever h_F(W) ≥ max_F tr(Wσ).
double witness_distance_bound(const Matrix& w, const Matrix& rho, double support_value);

}  // namespace rescomp
