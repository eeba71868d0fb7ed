#pragma once

#include <span>

#include "rescomp/core/state.hpp"

namespace rescomp {

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);
/// ρ^{⊗n}; n ≥ 1.
DensityMatrix tensor_power(const DensityMatrix& rho, int n);

/// Partial trace keeping the listed factors (result keeps original order).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);
Matrix partial_trace(const Matrix& m, const SubsystemShape& shape, std::span<const int> keep);

/// Factor k of the result is factor perm[k] of the input.
DensityMatrix permute_subsystems(const DensityMatrix& rho, std::span<const int> perm);
Matrix permute_subsystems(const Matrix& m, const SubsystemShape& shape, std::span<const int> perm);

/// Transpose on the listed factors.
Matrix partial_transpose(const Matrix& m, const SubsystemShape& shape, std::span<const int> factors);

/// Δ(ρ): drop off-diagonal entries in the computational basis.
DensityMatrix dephase(const DensityMatrix& rho);

}  // namespace rescomp
