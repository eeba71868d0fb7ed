#include "rescomp/kernels/kernels.hpp"

#include <algorithm>

#include "rescomp/kernels/layout.hpp"

namespace rescomp::kernels {

namespace {

// Σ_{k ∈ factors} digit_k · stride_k for every flat index.
std::vector<Index> factor_offsets(std::span<const int> dims, std::span<const int> factors) {
  Index total = 1;
  for (int d : dims) total *= d;
  std::vector<Index> stride(dims.size());
  Index s = 1;
  for (std::size_t k = dims.size(); k-- > 0;) {
    stride[k] = s;
    s *= dims[k];
  }
  std::vector<bool> sel(dims.size(), false);
  for (int f : factors) sel[static_cast<std::size_t>(f)] = true;
  std::vector<Index> off(static_cast<std::size_t>(total), 0);
  for (Index flat = 0; flat < total; ++flat) {
    Index rem = flat, acc = 0;
    for (std::size_t k = dims.size(); k-- > 0;) {
      Index digit = rem % dims[k];
      rem /= dims[k];
      if (sel[k]) acc += digit * stride[k];
    }
    off[static_cast<std::size_t>(flat)] = acc;
  }
  return off;
}

}  // namespace

Matrix kron(const Matrix& a, const Matrix& b) {
  const Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  Matrix out(ar * br, ac * bc);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < ac; ++j) {
    for (Index i = 0; i < ar; ++i) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

Matrix partial_trace(const Matrix& m, std::span<const int> dims, std::span<const int> keep) {
  const SplitTable t = split_table(dims, keep);
  const Index kd = t.kept_dim, td = t.traced_dim;
  Matrix out = Matrix::Zero(kd, kd);
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < kd; ++b) {
    for (Index a = 0; a < kd; ++a) {
      Complex acc = 0.0;
      for (Index s = 0; s < td; ++s) {
        acc += m(t.compose[static_cast<std::size_t>(a * td + s)], t.compose[static_cast<std::size_t>(b * td + s)]);
      }
      out(a, b) = acc;
    }
  }
  return out;
}

Matrix partial_transpose(const Matrix& m, std::span<const int> dims, std::span<const int> factors) {
  const std::vector<Index> toff = factor_offsets(dims, factors);
  const Index n = m.rows();
  Matrix out(n, n);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < n; ++j) {
    const Index tj = toff[static_cast<std::size_t>(j)];
    const Index rj = j - tj;
    for (Index i = 0; i < n; ++i) {
      const Index ti = toff[static_cast<std::size_t>(i)];
      out(i, j) = m(i - ti + tj, rj + ti);
    }
  }
  return out;
}

Matrix permute(const Matrix& m, std::span<const int> dims, std::span<const int> perm) {
  const std::vector<Index> table = permutation_table(dims, perm);
  const Index n = m.rows();
  Matrix out(n, n);
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < n; ++b) {
    for (Index a = 0; a < n; ++a) {
      out(a, b) = m(table[static_cast<std::size_t>(a)], table[static_cast<std::size_t>(b)]);
    }
  }
  return out;
}

Matrix apply_kraus(const std::vector<Matrix>& kraus, const Matrix& x) {
  if (kraus.empty()) return Matrix::Zero(0, 0);
  const Index out_dim = kraus.front().rows();
  Matrix out = Matrix::Zero(out_dim, out_dim);
  constexpr std::size_t kChunk = 64;
  std::vector<Matrix> terms(std::min(kChunk, kraus.size()));
  for (std::size_t start = 0; start < kraus.size(); start += kChunk) {
    const std::size_t count = std::min(kChunk, kraus.size() - start);
#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < count; ++k) {
      const Matrix& K = kraus[start + k];
      terms[k].noalias() = K * x * K.adjoint();
    }
    for (std::size_t k = 0; k < count; ++k) out += terms[k];
  }
  return out;
}

}  // namespace rescomp::kernels
