#include <doctest.h>

#include "rescomp/core/random.hpp"
#include "rescomp/kernels/kernels.hpp"
#include "rescomp/kernels/layout.hpp"
#include "rescomp/kernels/reference.hpp"

using namespace rescomp;

namespace {

Matrix random_matrix(Index d, Rng& rng) {
  std::normal_distribution<double> g;
  Matrix m(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

}  // namespace

TEST_CASE("mixed-radix layout") {
  const std::vector<int> dims{2, 3, 2};
  for (Index f = 0; f < 12; ++f) {
    const std::vector<int> dig = kernels::digits_of(f, dims);
    CHECK(kernels::flat_of(dig, dims) == f);
  }
  CHECK(kernels::digits_of(7, dims) == std::vector<int>{1, 0, 1});
}

TEST_CASE("parallel kernels agree with the serial reference bit for bit") {
  Rng rng(17);
  const std::vector<std::vector<int>> shapes{{2, 2}, {2, 3}, {3, 2, 2}, {2, 2, 2, 2}};
  for (const auto& dims : shapes) {
    Index d = 1;
    for (int x : dims) d *= x;
    const Matrix m = random_matrix(d, rng);
    const std::vector<int> keep{0, static_cast<int>(dims.size()) - 1};
    CHECK(kernels::partial_trace(m, dims, keep) == reference::partial_trace(m, dims, keep));
    const std::vector<int> factors{1};
    CHECK(kernels::partial_transpose(m, dims, factors) == reference::partial_transpose(m, dims, factors));
    std::vector<int> perm(dims.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(perm.size() - 1 - i);
    CHECK(kernels::permute(m, dims, perm) == reference::permute(m, dims, perm));
    const Matrix b = random_matrix(3, rng);
    CHECK(kernels::kron(m, b) == reference::kron(m, b));
    const std::vector<Matrix> kraus{random_matrix(d, rng), random_matrix(d, rng), random_matrix(d, rng)};
    CHECK(kernels::apply_kraus(kraus, m) == reference::apply_kraus(kraus, m));
  }
}

TEST_CASE("reference kernels against Eigen primitives") {
  Rng rng(23);
  const Matrix a = random_matrix(2, rng);
  const Matrix b = random_matrix(3, rng);
  const Matrix k = reference::kron(a, b);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) CHECK((k.block(i * 3, j * 3, 3, 3) - a(i, j) * b).norm() < 1e-14);
  // tr_B(A⊗B) = tr(B)·A
  const std::vector<int> dims{2, 3};
  const std::vector<int> keep{0};
  CHECK((reference::partial_trace(k, dims, keep) - b.trace() * a).norm() < 1e-12);
  // Full transpose on every factor equals the ordinary transpose.
  const std::vector<int> all{0, 1};
  CHECK((reference::partial_transpose(k, dims, all) - k.transpose()).norm() < 1e-14);
  const std::vector<Matrix> kraus{a};
  CHECK((reference::apply_kraus(kraus, b.block(0, 0, 2, 2)) - a * b.block(0, 0, 2, 2) * a.adjoint()).norm() < 1e-13);
}
