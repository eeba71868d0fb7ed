#pragma once

#include <optional>
#include <string>

#include "rescomp/core/shape.hpp"
#include "rescomp/core/types.hpp"

namespace rescomp {

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

/// Hermitian matrix over a subsystem shape: gradients, witnesses, observables.
class HermitianOperator {
 public:
  HermitianOperator(SubsystemShape shape, Matrix matrix);

  const SubsystemShape& shape() const noexcept { return shape_; }
  const Matrix& matrix() const noexcept { return matrix_; }
  Index dim() const noexcept { return matrix_.rows(); }

 private:
  SubsystemShape shape_;
  Matrix matrix_;
};

/// Positive semidefinite, unit-trace Hermitian matrix on a subsystem shape.
///
/// The checked constructor validates all three invariants (an eigensolve).
/// Routines whose output is a density matrix by construction use
/// `DensityMatrix::trusted`, which only symmetrizes.
class DensityMatrix {
 public:
  DensityMatrix(SubsystemShape shape, Matrix matrix);

  static DensityMatrix trusted(SubsystemShape shape, Matrix matrix);
  static DensityMatrix maximally_mixed(const SubsystemShape& shape);
  static DensityMatrix pure(const SubsystemShape& shape, const Vector& psi);
  static DensityMatrix basis(const SubsystemShape& shape, Index i);
  /// (1/√d) Σ|i⟩ projector on a single d-level system.
  static DensityMatrix maximally_coherent(int d);
  /// |Φ⁺⟩ = (|00⟩ + |11⟩)/√2 on shape (2, 2).
  static DensityMatrix bell_phi_plus();
  static DensityMatrix diagonal(const SubsystemShape& shape, const RealVector& probabilities);

  const SubsystemShape& shape() const noexcept { return shape_; }
  const Matrix& matrix() const noexcept { return matrix_; }
  Index dim() const noexcept { return matrix_.rows(); }

  RealVector spectrum() const;
  double purity() const;

  /// Convex combination t·a + (1-t)·b.
  static DensityMatrix mix(double t, const DensityMatrix& a, const DensityMatrix& b);

 private:
  struct TrustedTag {};
  DensityMatrix(SubsystemShape shape, Matrix matrix, TrustedTag);

  SubsystemShape shape_;
  Matrix matrix_;
};

/// Hermitian A with 0 ⪯ A ⪯ I (eigenvalues within [-1e-10, 1+1e-10]).
class TestOperator {
 public:
  TestOperator(SubsystemShape shape, Matrix matrix);

  const SubsystemShape& shape() const noexcept { return shape_; }
  const Matrix& matrix() const noexcept { return matrix_; }

 private:
  SubsystemShape shape_;
  Matrix matrix_;
};

/// Describes the first violated density-matrix invariant, if any.
std::optional<std::string> density_matrix_violation(const Matrix& m);

void require_same_shape(const SubsystemShape& a, const SubsystemShape& b, const char* where);

}  // namespace rescomp
