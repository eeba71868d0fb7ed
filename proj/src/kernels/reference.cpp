#include "rescomp/kernels/reference.hpp"

#include <vector>

#include "rescomp/kernels/layout.hpp"

namespace rescomp::reference {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      for (Index k = 0; k < b.rows(); ++k)
        for (Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

Matrix partial_trace(const Matrix& m, std::span<const int> dims, std::span<const int> keep) {
  std::vector<bool> kept(dims.size(), false);
  for (int k : keep) kept[static_cast<std::size_t>(k)] = true;
  std::vector<int> kept_dims;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (kept[k]) kept_dims.push_back(dims[k]);
  Index kd = 1;
  for (int d : kept_dims) kd *= d;
  Matrix out = Matrix::Zero(kd, kd);
  const Index n = m.rows();
  for (Index i = 0; i < n; ++i) {
    const std::vector<int> di = kernels::digits_of(i, dims);
    for (Index j = 0; j < n; ++j) {
      const std::vector<int> dj = kernels::digits_of(j, dims);
      bool same_traced = true;
      std::vector<int> ki, kj;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        if (kept[k]) {
          ki.push_back(di[k]);
          kj.push_back(dj[k]);
        } else if (di[k] != dj[k]) {
          same_traced = false;
          break;
        }
      }
      if (same_traced) out(kernels::flat_of(ki, kept_dims), kernels::flat_of(kj, kept_dims)) += m(i, j);
    }
  }
  return out;
}

Matrix partial_transpose(const Matrix& m, std::span<const int> dims, std::span<const int> factors) {
  std::vector<bool> sel(dims.size(), false);
  for (int f : factors) sel[static_cast<std::size_t>(f)] = true;
  const Index n = m.rows();
  Matrix out(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      std::vector<int> di = kernels::digits_of(i, dims);
      std::vector<int> dj = kernels::digits_of(j, dims);
      for (std::size_t k = 0; k < dims.size(); ++k)
        if (sel[k]) std::swap(di[k], dj[k]);
      out(i, j) = m(kernels::flat_of(di, dims), kernels::flat_of(dj, dims));
    }
  }
  return out;
}

Matrix permute(const Matrix& m, std::span<const int> dims, std::span<const int> perm) {
  std::vector<int> new_dims(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) new_dims[k] = dims[static_cast<std::size_t>(perm[k])];
  const Index n = m.rows();
  Matrix out(n, n);
  for (Index i = 0; i < n; ++i) {
    const std::vector<int> di = kernels::digits_of(i, dims);
    std::vector<int> ni(perm.size());
    for (std::size_t k = 0; k < perm.size(); ++k) ni[k] = di[static_cast<std::size_t>(perm[k])];
    const Index a = kernels::flat_of(ni, new_dims);
    for (Index j = 0; j < n; ++j) {
      const std::vector<int> dj = kernels::digits_of(j, dims);
      std::vector<int> nj(perm.size());
      for (std::size_t k = 0; k < perm.size(); ++k) nj[k] = dj[static_cast<std::size_t>(perm[k])];
      out(a, kernels::flat_of(nj, new_dims)) = m(i, j);
    }
  }
  return out;
}

Matrix apply_kraus(const std::vector<Matrix>& kraus, const Matrix& x) {
  if (kraus.empty()) return Matrix::Zero(0, 0);
  Matrix out = Matrix::Zero(kraus.front().rows(), kraus.front().rows());
  for (const Matrix& k : kraus) out += k * x * k.adjoint();
  return out;
}

}  // namespace rescomp::reference
