#pragma once

#include <span>
#include <vector>

#include "rescomp/core/types.hpp"

// OpenMP-parallel versions of the multipartite index kernels. Each has a
// serial counterpart in rescomp::reference with identical semantics; the
// parallel loops only split independent output rows, so results are
// bit-identical to the serial versions for any thread count.
namespace rescomp::kernels {

Matrix kron(const Matrix& a, const Matrix& b);
Matrix partial_trace(const Matrix& m, std::span<const int> dims, std::span<const int> keep);
Matrix partial_transpose(const Matrix& m, std::span<const int> dims, std::span<const int> factors);
Matrix permute(const Matrix& m, std::span<const int> dims, std::span<const int> perm);
/// Σ_k K_k X K_k†, summed in Kraus order.
Matrix apply_kraus(const std::vector<Matrix>& kraus, const Matrix& x);

}  // namespace rescomp::kernels
