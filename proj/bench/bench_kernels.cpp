// Parallel kernels against the serial reference on n-qubit operators.
// Run with OMP_NUM_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include <vector>

#include "rescomp/core/random.hpp"
#include "rescomp/kernels/kernels.hpp"
#include "rescomp/kernels/reference.hpp"

using namespace rescomp;

namespace {

Matrix random_matrix(Index d, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> g;
  Matrix m(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

std::vector<int> qubits(int n) { return std::vector<int>(static_cast<std::size_t>(n), 2); }

template <auto Fn>
void bm_partial_trace(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const std::vector<int> dims = qubits(n);
  const Matrix m = random_matrix(Index{1} << n, 1);
  std::vector<int> keep;
  for (int i = 0; i < n; i += 2) keep.push_back(i);
  for (auto _ : st) benchmark::DoNotOptimize(Fn(m, dims, keep));
}

template <auto Fn>
void bm_partial_transpose(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const std::vector<int> dims = qubits(n);
  const Matrix m = random_matrix(Index{1} << n, 2);
  std::vector<int> factors;
  for (int i = n / 2; i < n; ++i) factors.push_back(i);
  for (auto _ : st) benchmark::DoNotOptimize(Fn(m, dims, factors));
}

template <auto Fn>
void bm_permute(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const std::vector<int> dims = qubits(n);
  const Matrix m = random_matrix(Index{1} << n, 3);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = (i + 1) % n;
  for (auto _ : st) benchmark::DoNotOptimize(Fn(m, dims, perm));
}

template <auto Fn>
void bm_kron(benchmark::State& st) {
  const Index d = st.range(0);
  const Matrix a = random_matrix(d, 4);
  const Matrix b = random_matrix(d, 5);
  for (auto _ : st) benchmark::DoNotOptimize(Fn(a, b));
}

template <auto Fn>
void bm_apply_kraus(benchmark::State& st) {
  const Index d = st.range(0);
  std::vector<Matrix> kraus;
  for (int k = 0; k < 4; ++k) kraus.push_back(random_matrix(d, 10 + static_cast<std::uint64_t>(k)));
  const Matrix x = random_matrix(d, 6);
  for (auto _ : st) benchmark::DoNotOptimize(Fn(kraus, x));
}

Matrix pt_k(const Matrix& m, const std::vector<int>& d, const std::vector<int>& k) { return kernels::partial_trace(m, d, k); }
Matrix pt_r(const Matrix& m, const std::vector<int>& d, const std::vector<int>& k) { return reference::partial_trace(m, d, k); }
Matrix tp_k(const Matrix& m, const std::vector<int>& d, const std::vector<int>& f) { return kernels::partial_transpose(m, d, f); }
Matrix tp_r(const Matrix& m, const std::vector<int>& d, const std::vector<int>& f) { return reference::partial_transpose(m, d, f); }
Matrix pm_k(const Matrix& m, const std::vector<int>& d, const std::vector<int>& p) { return kernels::permute(m, d, p); }
Matrix pm_r(const Matrix& m, const std::vector<int>& d, const std::vector<int>& p) { return reference::permute(m, d, p); }
Matrix kr_k(const Matrix& a, const Matrix& b) { return kernels::kron(a, b); }
Matrix kr_r(const Matrix& a, const Matrix& b) { return reference::kron(a, b); }
Matrix ak_k(const std::vector<Matrix>& k, const Matrix& x) { return kernels::apply_kraus(k, x); }
Matrix ak_r(const std::vector<Matrix>& k, const Matrix& x) { return reference::apply_kraus(k, x); }

}  // namespace

BENCHMARK(bm_partial_trace<pt_k>)->Name("partial_trace/omp")->DenseRange(6, 10, 2);
BENCHMARK(bm_partial_trace<pt_r>)->Name("partial_trace/serial")->DenseRange(6, 10, 2);
BENCHMARK(bm_partial_transpose<tp_k>)->Name("partial_transpose/omp")->DenseRange(6, 10, 2);
BENCHMARK(bm_partial_transpose<tp_r>)->Name("partial_transpose/serial")->DenseRange(6, 10, 2);
BENCHMARK(bm_permute<pm_k>)->Name("permute/omp")->DenseRange(6, 10, 2);
BENCHMARK(bm_permute<pm_r>)->Name("permute/serial")->DenseRange(6, 10, 2);
BENCHMARK(bm_kron<kr_k>)->Name("kron/omp")->RangeMultiplier(2)->Range(8, 32);
BENCHMARK(bm_kron<kr_r>)->Name("kron/serial")->RangeMultiplier(2)->Range(8, 32);
BENCHMARK(bm_apply_kraus<ak_k>)->Name("apply_kraus/omp")->RangeMultiplier(2)->Range(16, 128);
BENCHMARK(bm_apply_kraus<ak_r>)->Name("apply_kraus/serial")->RangeMultiplier(2)->Range(16, 128);

BENCHMARK_MAIN();
