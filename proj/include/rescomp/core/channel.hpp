#pragma once

#include <vector>

#include "rescomp/core/state.hpp"

namespace rescomp {

inline constexpr double kTracePreservingTol = 1e-10;

/// Completely positive trace-preserving map.
///
/// Two representations are kept: a Kraus list, and a measure-and-prepare form
/// Λ(X) = Σ_k tr(E_k X) τ_k with a POVM {E_k} and output states τ_k. The
/// latter is what the conversion protocol builds; its Kraus operators are
/// materialized on request (their count grows with the product of ranks).
class QuantumChannel {
 public:
  static QuantumChannel from_kraus(SubsystemShape input, SubsystemShape output, std::vector<Matrix> kraus);
  static QuantumChannel measure_prepare(SubsystemShape input, SubsystemShape output,
                                        std::vector<Matrix> povm, std::vector<DensityMatrix> outputs);
  static QuantumChannel identity(const SubsystemShape& shape);
  /// X ↦ tr(X) τ.
  static QuantumChannel replacer(const SubsystemShape& input, const DensityMatrix& state);
  static QuantumChannel completely_depolarizing(const SubsystemShape& shape);

  const SubsystemShape& input_shape() const noexcept { return input_; }
  const SubsystemShape& output_shape() const noexcept { return output_; }
  bool is_measure_prepare() const noexcept { return !povm_.empty(); }
  const std::vector<Matrix>& povm() const noexcept { return povm_; }
  const std::vector<DensityMatrix>& prepared_states() const noexcept { return prepared_; }

  DensityMatrix apply(const DensityMatrix& rho) const;
  /// Linear action on an arbitrary operator of input dimension.
  Matrix apply(const Matrix& x) const;

  /// Kraus operators (output-dim × input-dim). Throws DimensionCap when a
  /// measure-prepare channel would need more than max_entries matrix entries.
  std::vector<Matrix> kraus_ops(Index max_entries = Index{1} << 26) const;
  std::size_t kraus_count() const;

  /// ‖Σ K†K - I‖ in operator norm (or ‖Σ E_k - I‖ for measure-prepare).
  double trace_preservation_error() const;

  /// Λ₂ ∘ Λ₁ for Kraus channels.
  static QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first);
  /// Λ₁ ⊗ Λ₂ for Kraus channels.
  static QuantumChannel tensor(const QuantumChannel& a, const QuantumChannel& b);

 private:
  QuantumChannel(SubsystemShape in, SubsystemShape out) : input_(std::move(in)), output_(std::move(out)) {}

  SubsystemShape input_;
  SubsystemShape output_;
  std::vector<Matrix> kraus_;
  std::vector<Matrix> povm_;
  std::vector<DensityMatrix> prepared_;
};

}  // namespace rescomp
