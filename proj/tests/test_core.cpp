#include <doctest.h>

#include <cmath>

#include "rescomp/core/channel.hpp"
#include "rescomp/core/entropy.hpp"
#include "rescomp/core/error.hpp"
#include "rescomp/core/linalg.hpp"
#include "rescomp/core/ops.hpp"
#include "rescomp/core/random.hpp"
#include "rescomp/core/serialize.hpp"

using namespace rescomp;

namespace {

// Partial trace by explicit summation over every index tuple: ρ_A(i,j) =
// Σ_k ρ(i⊗k, j⊗k) for a bipartite (dA, dB) matrix.
Matrix trace_out_second(const Matrix& m, int da, int db) {
  Matrix out = Matrix::Zero(da, da);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
  return out;
}

Matrix trace_out_first(const Matrix& m, int da, int db) {
  Matrix out = Matrix::Zero(db, db);
  for (int i = 0; i < db; ++i)
    for (int j = 0; j < db; ++j)
      for (int k = 0; k < da; ++k) out(i, j) += m(k * db + i, k * db + j);
  return out;
}

double entropy_from_eigs(const RealVector& l) {
  double s = 0.0;
  for (Index i = 0; i < l.size(); ++i)
    if (l(i) > 1e-300) s -= l(i) * std::log2(l(i));
  return s;
}

}  // namespace

TEST_CASE("subsystem shape arithmetic") {
  const SubsystemShape s{2, 3};
  CHECK(s.total() == 6);
  CHECK(s.n_copy(2) == SubsystemShape{2, 3, 2, 3});
  CHECK(s.concat(SubsystemShape{4}) == SubsystemShape{2, 3, 4});
  const std::vector<int> pick{1};
  CHECK(s.select(pick) == SubsystemShape{3});
  CHECK_THROWS_AS(SubsystemShape(std::vector<int>{0}), Error);
}

TEST_CASE("density matrix invariants are checked") {
  Matrix bad = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix(SubsystemShape{2}, bad), Error);
  Matrix neg(2, 2);
  neg << 1.2, 0.0, 0.0, -0.2;
  CHECK_THROWS_AS(DensityMatrix(SubsystemShape{2}, neg), Error);
  Matrix notherm(2, 2);
  notherm << 0.5, 0.3, 0.1, 0.5;
  CHECK_THROWS_AS(DensityMatrix(SubsystemShape{2}, notherm), Error);
  CHECK_THROWS_AS(DensityMatrix(SubsystemShape{3}, Matrix::Identity(2, 2) / 2.0), Error);
  CHECK(DensityMatrix::maximally_mixed({4}).purity() == doctest::Approx(0.25));
}

TEST_CASE("named states") {
  const DensityMatrix plus = DensityMatrix::maximally_coherent(3);
  CHECK(plus.purity() == doctest::Approx(1.0));
  CHECK(std::abs(plus.matrix()(0, 2) - Complex(1.0 / 3.0)) < 1e-14);
  const DensityMatrix bell = DensityMatrix::bell_phi_plus();
  CHECK(bell.shape() == SubsystemShape{2, 2});
  CHECK(std::abs(bell.matrix()(0, 3) - Complex(0.5)) < 1e-14);
  CHECK(std::abs(bell.matrix()(1, 1)) < 1e-14);
}

TEST_CASE("partial trace matches explicit index sums") {
  Rng rng(11);
  for (auto [da, db] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
    const DensityMatrix rho = random_density_matrix(SubsystemShape{da, db}, 3, rng);
    const std::vector<int> keep_a{0};
    const std::vector<int> keep_b{1};
    CHECK((partial_trace(rho, keep_a).matrix() - trace_out_second(rho.matrix(), da, db)).norm() < 1e-13);
    CHECK((partial_trace(rho, keep_b).matrix() - trace_out_first(rho.matrix(), da, db)).norm() < 1e-13);
  }
  const DensityMatrix rho = random_density_matrix(SubsystemShape{2, 2}, 2, 3);
  CHECK_THROWS_AS(partial_trace(rho, std::vector<int>{}), Error);
  CHECK_THROWS_AS(partial_trace(rho, std::vector<int>{0, 0}), Error);
}

TEST_CASE("tensor products and permutations") {
  Rng rng(5);
  const DensityMatrix a = random_density_matrix(SubsystemShape{2}, 2, rng);
  const DensityMatrix b = random_density_matrix(SubsystemShape{3}, 2, rng);
  const DensityMatrix ab = tensor_product(a, b);
  // (A⊗B)(i*3+k, j*3+l) = A(i,j) B(k,l)
  CHECK(std::abs(ab.matrix()(1 * 3 + 2, 0 * 3 + 1) - a.matrix()(1, 0) * b.matrix()(2, 1)) < 1e-15);
  const std::vector<int> swap{1, 0};
  const DensityMatrix ba = permute_subsystems(ab, swap);
  CHECK((ba.matrix() - tensor_product(b, a).matrix()).norm() < 1e-14);
  CHECK(tensor_power(a, 3).shape() == SubsystemShape{2, 2, 2});
  CHECK(tensor_power(a, 3).matrix().trace().real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(permute_subsystems(ab, std::vector<int>{0, 0}), Error);
}

TEST_CASE("partial transpose of the Bell state") {
  const DensityMatrix bell = DensityMatrix::bell_phi_plus();
  const std::vector<int> second{1};
  const Matrix pt = partial_transpose(bell.matrix(), bell.shape(), second);
  // Φ⁺^Γ = SWAP/2 with eigenvalues {1/2, 1/2, 1/2, -1/2}.
  const RealVector ev = linalg::eigenvalues(pt);
  CHECK(ev(0) == doctest::Approx(-0.5));
  CHECK(ev(3) == doctest::Approx(0.5));
  CHECK(std::abs(pt(1, 2) - Complex(0.5)) < 1e-14);
}

TEST_CASE("entropies against eigenvalue formulas") {
  Rng rng(7);
  for (int t = 0; t < 5; ++t) {
    const DensityMatrix rho = random_density_matrix(SubsystemShape{3}, 3, rng);
    const DensityMatrix sigma = random_density_matrix(SubsystemShape{3}, 3, rng);
    CHECK(von_neumann_entropy(rho) == doctest::Approx(entropy_from_eigs(linalg::eigenvalues(rho.matrix()))));
    // S(ρ‖σ) = -S(ρ) - tr ρ log σ, with log σ built from the eigendecomposition.
    const linalg::Eigh es = linalg::eigh(sigma.matrix());
    RealVector logs = es.values.array().log() / std::log(2.0);
    const Matrix log_sigma = es.vectors * logs.cast<Complex>().asDiagonal() * es.vectors.adjoint();
    const double expected = -von_neumann_entropy(rho) - (rho.matrix() * log_sigma).trace().real();
    CHECK(quantum_relative_entropy(rho, sigma) == doctest::Approx(expected).epsilon(1e-10));
  }
  CHECK(std::isinf(quantum_relative_entropy(DensityMatrix::maximally_coherent(2), DensityMatrix::basis({2}, 0))));
  CHECK(trace_distance(DensityMatrix::basis({2}, 0), DensityMatrix::basis({2}, 1)) == doctest::Approx(1.0));
  CHECK(trace_distance(DensityMatrix::maximally_coherent(2), DensityMatrix::maximally_mixed({2})) ==
        doctest::Approx(0.5));
}

TEST_CASE("channels") {
  Rng rng(9);
  const QuantumChannel ch = random_channel(SubsystemShape{3}, SubsystemShape{2}, 3, rng);
  CHECK(ch.trace_preservation_error() < 1e-12);
  const DensityMatrix rho = random_density_matrix(SubsystemShape{3}, 2, rng);
  const DensityMatrix out = ch.apply(rho);
  CHECK(out.matrix().trace().real() == doctest::Approx(1.0));
  CHECK(linalg::min_eigenvalue(out.matrix()) > -1e-12);

  const DensityMatrix plus = DensityMatrix::maximally_coherent(2);
  const QuantumChannel rep = QuantumChannel::replacer(SubsystemShape{3}, plus);
  CHECK((rep.apply(rho).matrix() - plus.matrix()).norm() < 1e-13);
  const QuantumChannel dep = QuantumChannel::completely_depolarizing(SubsystemShape{3});
  CHECK((dep.apply(rho).matrix() - Matrix::Identity(3, 3) / 3.0).norm() < 1e-13);

  // Measure-prepare channels: apply agrees with the Kraus form.
  const Matrix a = 0.3 * Matrix::Identity(3, 3) + 0.4 * rho.matrix();
  const QuantumChannel mp = QuantumChannel::measure_prepare(SubsystemShape{3}, SubsystemShape{2},
                                                            {a, Matrix::Identity(3, 3) - a},
                                                            {plus, DensityMatrix::basis({2}, 1)});
  CHECK(mp.trace_preservation_error() < 1e-12);
  const QuantumChannel mk = QuantumChannel::from_kraus(SubsystemShape{3}, SubsystemShape{2}, mp.kraus_ops());
  CHECK(mk.trace_preservation_error() < 1e-10);
  const DensityMatrix x = random_density_matrix(SubsystemShape{3}, 3, rng);
  CHECK((mp.apply(x).matrix() - mk.apply(x).matrix()).norm() < 1e-12);

  const QuantumChannel both = QuantumChannel::tensor(ch, QuantumChannel::identity(SubsystemShape{2}));
  const DensityMatrix y = random_density_matrix(SubsystemShape{2}, 2, rng);
  CHECK((both.apply(tensor_product(rho, y)).matrix() - tensor_product(out, y).matrix()).norm() < 1e-12);

  CHECK_THROWS_AS(QuantumChannel::from_kraus(SubsystemShape{2}, SubsystemShape{2}, {0.5 * Matrix::Identity(2, 2)}),
                  Error);
}

TEST_CASE("linear algebra helpers") {
  Rng rng(3);
  const Matrix h = linalg::hermitize(Matrix::Random(4, 4));
  const Matrix p = linalg::psd_part(h);
  CHECK(linalg::min_eigenvalue(p) > -1e-12);
  const Matrix box = linalg::project_unit_box(h * 3.0);
  CHECK(linalg::min_eigenvalue(box) > -1e-12);
  CHECK(linalg::max_eigenvalue(box) < 1.0 + 1e-12);
  const Matrix sp = linalg::project_spectraplex(h, 1.0);
  CHECK(sp.trace().real() == doctest::Approx(1.0));
  CHECK(linalg::min_eigenvalue(sp) > -1e-12);
  // Projection onto the spectraplex is closer than any other sample point.
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix r = random_density_matrix(SubsystemShape{4}, 2, rng);
    CHECK((h - sp).norm() <= (h - r.matrix()).norm() + 1e-12);
  }
  CHECK(linalg::trace_norm(h) == doctest::Approx(linalg::eigenvalues(h).cwiseAbs().sum()));
}

TEST_CASE("json round trip and number formatting") {
  const DensityMatrix rho = random_density_matrix(SubsystemShape{2, 2}, 3, 21);
  const DensityMatrix back = io::density_from_json(io::to_json(rho));
  CHECK(back.shape() == rho.shape());
  CHECK((back.matrix() - rho.matrix()).norm() < 1e-15);
  CHECK(io::format_number(1.0) == "1");
  CHECK(io::format_number(0.1 + 0.2) == "0.3");
  CHECK(io::format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(io::format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("small exact values") {
  const DensityMatrix zero = DensityMatrix::basis({2}, 0);
  const DensityMatrix one = DensityMatrix::basis({2}, 1);
  const DensityMatrix half = DensityMatrix::maximally_mixed({2});
  CHECK((tensor_product(half, half).matrix() - Matrix::Identity(4, 4) / 4.0).norm() < 1e-15);
  CHECK((tensor_product(zero, one).matrix() - DensityMatrix::basis({2, 2}, 1).matrix()).norm() < 1e-15);
  CHECK(von_neumann_entropy(zero) == doctest::Approx(0.0));
  CHECK(von_neumann_entropy(half) == doctest::Approx(1.0));
  const double h = -(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25));
  CHECK(std::abs(von_neumann_entropy(DensityMatrix::diagonal({2}, RealVector{{0.75, 0.25}})) - h) < 1e-12);
  CHECK(std::abs(von_neumann_entropy(DensityMatrix::diagonal({2}, RealVector{{0.75, 0.25}})) - 0.811278) < 1e-6);
  CHECK(std::abs(quantum_relative_entropy(zero, half) - 1.0) < 1e-9);
  CHECK(std::isinf(quantum_relative_entropy(zero, one)));
  CHECK(std::abs(trace_distance(zero, half) - 0.5) < 1e-10);
  const DensityMatrix bell = DensityMatrix::bell_phi_plus();
  CHECK((partial_trace(bell, std::vector<int>{0}).matrix() - half.matrix()).norm() < 1e-14);
  CHECK((partial_trace(bell, std::vector<int>{0, 1}).matrix() - bell.matrix()).norm() < 1e-15);
}

TEST_CASE("random generators") {
  Rng rng(13);
  for (int t = 0; t < 10; ++t) {
    const DensityMatrix a = random_density_matrix({2}, 2, rng);
    const DensityMatrix b = random_density_matrix({2}, 2, rng);
    CHECK(std::abs(tensor_product(a, b).purity() - a.purity() * b.purity()) < 1e-10);
    const DensityMatrix ab = tensor_product(a, b);
    CHECK((partial_trace(ab, std::vector<int>{0}).matrix() - a.matrix()).norm() < 1e-12);
  }
  const DensityMatrix x = random_density_matrix({2, 2}, 3, 99);
  const DensityMatrix y = random_density_matrix({2, 2}, 3, 99);
  CHECK(x.matrix() == y.matrix());
  CHECK(std::abs(random_density_matrix({3}, 1, 4).purity() - 1.0) < 1e-10);
  for (int t = 0; t < 20; ++t) {
    const QuantumChannel ch = random_channel({2}, {3}, 1 + t % 4, rng);
    CHECK(ch.trace_preservation_error() < 1e-10);
    CHECK(std::abs(ch.apply(random_density_matrix({2}, 2, rng)).matrix().trace().real() - 1.0) < 1e-10);
  }
  const DensityMatrix three = random_density_matrix({2, 2, 2}, 4, rng);
  const std::vector<int> perm{2, 0, 1};
  CHECK((permute_subsystems(three, perm).spectrum() - three.spectrum()).norm() < 1e-10);
  const std::vector<int> ident{0, 1, 2};
  CHECK((permute_subsystems(three, ident).matrix() - three.matrix()).norm() < 1e-15);
  CHECK((QuantumChannel::identity({2, 2, 2}).apply(three).matrix() - three.matrix()).norm() < 1e-12);
}
