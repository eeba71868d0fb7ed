#include "rescomp/core/ops.hpp"

#include <algorithm>
#include <vector>

#include "rescomp/core/error.hpp"
#include "rescomp/kernels/kernels.hpp"

namespace rescomp {

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  SubsystemShape shape = a.shape().concat(b.shape());
  return DensityMatrix::trusted(std::move(shape), kernels::kron(a.matrix(), b.matrix()));
}

DensityMatrix tensor_power(const DensityMatrix& rho, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "tensor power needs n >= 1");
  // Validate the final shape before allocating anything.
  (void)rho.shape().n_copy(n);
  DensityMatrix out = rho;
  for (int k = 1; k < n; ++k) out = tensor_product(out, rho);
  return out;
}

Matrix partial_trace(const Matrix& m, const SubsystemShape& shape, std::span<const int> keep) {
  check_keep_set(keep, shape.factors());
  if (m.rows() != shape.total()) throw Error(ErrorCode::ShapeMismatch, "partial_trace: matrix does not match shape");
  return kernels::partial_trace(m, shape.dims(), keep);
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  check_keep_set(keep, rho.shape().factors());
  std::vector<int> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  return DensityMatrix::trusted(rho.shape().select(sorted), kernels::partial_trace(rho.matrix(), rho.shape().dims(), sorted));
}

Matrix permute_subsystems(const Matrix& m, const SubsystemShape& shape, std::span<const int> perm) {
  check_permutation(perm, shape.factors());
  return kernels::permute(m, shape.dims(), perm);
}

DensityMatrix permute_subsystems(const DensityMatrix& rho, std::span<const int> perm) {
  check_permutation(perm, rho.shape().factors());
  return DensityMatrix::trusted(rho.shape().select(perm), kernels::permute(rho.matrix(), rho.shape().dims(), perm));
}

Matrix partial_transpose(const Matrix& m, const SubsystemShape& shape, std::span<const int> factors) {
  for (int f : factors)
    if (f < 0 || f >= shape.factors()) throw Error(ErrorCode::InvalidArgument, "transposed factor out of range");
  return kernels::partial_transpose(m, shape.dims(), factors);
}

DensityMatrix dephase(const DensityMatrix& rho) {
  Matrix d = rho.matrix().diagonal().real().cast<Complex>().asDiagonal();
  return DensityMatrix::trusted(rho.shape(), std::move(d));
}

}  // namespace rescomp
