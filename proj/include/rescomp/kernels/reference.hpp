#pragma once

#include <span>
#include <vector>

#include "rescomp/core/types.hpp"

// Serial, loop-per-definition implementations of the index kernels. Kept as
// the test oracle and benchmark baseline for rescomp::kernels.
namespace rescomp::reference {

Matrix kron(const Matrix& a, const Matrix& b);
Matrix partial_trace(const Matrix& m, std::span<const int> dims, std::span<const int> keep);
Matrix partial_transpose(const Matrix& m, std::span<const int> dims, std::span<const int> factors);
Matrix permute(const Matrix& m, std::span<const int> dims, std::span<const int> perm);
Matrix apply_kraus(const std::vector<Matrix>& kraus, const Matrix& x);

}  // namespace rescomp::reference
