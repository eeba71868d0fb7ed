#pragma once

#include "rescomp/core/state.hpp"

namespace rescomp {

/// Eigenvalues of σ below this are treated as outside its support.
inline constexpr double kSupportTol = 1e-12;

/// S(ρ) = -Σ λ log₂ λ, in bits.
double von_neumann_entropy(const DensityMatrix& rho);
/// Σ λ log₂ λ of a PSD spectrum with negative drift clamped to zero.
double neg_entropy_of_spectrum(const RealVector& eigenvalues);

/// S(ρ‖σ) = tr ρ(log₂ρ - log₂σ) in bits; +inf when supp ρ ⊄ supp σ.
double quantum_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                                double support_tol = kSupportTol);
/// Same, on raw matrices of equal dimension.
double relative_entropy(const Matrix& rho, const Matrix& sigma, double support_tol = kSupportTol);

/// ½‖a - b‖₁.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace rescomp
