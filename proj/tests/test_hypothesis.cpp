#include <doctest.h>

#include <cmath>

#include "rescomp/core/entropy.hpp"
#include "rescomp/core/error.hpp"
#include "rescomp/core/linalg.hpp"
#include "rescomp/core/ops.hpp"
#include "rescomp/core/random.hpp"
#include "rescomp/hypothesis/hypothesis.hpp"
#include "support.hpp"

using namespace rescomp;

namespace {

// Grid search over real 2×2 tests A = [[a, c], [c, b]] with 0 ⪯ A ⪯ I and
// ⟨+|A|+⟩ ≥ 1 - eps, minimizing max(a, b).
double qubit_grid_beta(double eps) {
  const int steps = 200;
  double best = 1.0;
  for (int i = 0; i <= steps; ++i) {
    const double a = static_cast<double>(i) / steps;
    for (int j = 0; j <= steps; ++j) {
      const double b = static_cast<double>(j) / steps;
      for (int k = -steps; k <= steps; ++k) {
        const double c = 0.5 * k / steps;
        const double mid = 0.5 * (a + b);
        const double rad = std::hypot(0.5 * (a - b), c);
        if (mid - rad < 0.0 || mid + rad > 1.0) continue;
        if (0.5 * (a + b) + c < 1.0 - eps) continue;
        best = std::min(best, std::max(a, b));
      }
    }
  }
  return best;
}

void check_feasible(const HypothesisTestResult& r, const DensityMatrix& rho_n, double eps) {
  const RealVector ev = linalg::eigenvalues(r.test.matrix());
  CHECK(ev.minCoeff() >= -1e-9);
  CHECK(ev.maxCoeff() <= 1.0 + 1e-9);
  CHECK(linalg::real_trace(rho_n.matrix() * r.test.matrix()) >= 1.0 - eps - 1e-9);
}

}  // namespace

TEST_CASE("neyman pearson closed cases") {
  Rng rng(5);
  const DensityMatrix rho = random_density_matrix({3}, 3, rng);
  const HypothesisTestResult same = beta_singleton(rho, rho, 0.2);
  CHECK(std::abs(same.beta - 0.8) < 1e-9);

  const DensityMatrix zero = DensityMatrix::basis({2}, 0);
  const DensityMatrix half = DensityMatrix::maximally_mixed({2});
  const HypothesisTestResult z = beta_singleton(zero, half, 0.0);
  CHECK(std::abs(z.beta - 0.5) < 1e-9);
  check_feasible(z, zero, 0.0);
  CHECK(beta_singleton(zero, half, 0.999999).beta < 1e-5);

  // Pure-state closed form: with x = ω⁻¹ψ the optimum ignoring A ⪯ I is
  // (1-ε)/⟨ψ|x⟩ at a multiple of xx†, which respects A ⪯ I once
  // (1-ε)‖x‖²/⟨ψ|x⟩² ≤ 1. Pick ε on that side.
  const DensityMatrix omega = random_density_matrix({3}, 3, rng);
  const DensityMatrix psi = random_density_matrix({3}, 1, rng);
  const Vector v = linalg::eigh(psi.matrix()).vectors.col(2);
  const Vector x = omega.matrix().inverse() * v;
  const double q = v.dot(x).real();
  const double eps = 1.0 - 0.5 * q * q / x.squaredNorm();
  const HypothesisTestResult p = beta_singleton(psi, omega, eps);
  CHECK(std::abs(p.beta - (1.0 - eps) / q) < 1e-9);
  check_feasible(p, psi, eps);
  // At small ε the same quantity is only a lower bound.
  CHECK(beta_singleton(psi, omega, 0.01).beta >= 0.99 / q - 1e-9);

  // Mixed general case: β is the success of the returned test, and it is
  // optimal against the weak duality bound max_μ μ(1-ε) - tr(μρ-ω)₊.
  const DensityMatrix sigma = random_density_matrix({3}, 2, rng);
  const HypothesisTestResult g = beta_singleton(sigma, omega, 0.05);
  check_feasible(g, sigma, 0.05);
  CHECK(std::abs(linalg::real_trace(omega.matrix() * g.test.matrix()) - g.beta) < 1e-12);
  double dual = 0.0;
  for (int k = 0; k <= 4000; ++k) {
    const double mu = 20.0 * k / 4000.0;
    const Matrix x = mu * sigma.matrix() - omega.matrix();
    dual = std::max(dual, mu * 0.95 - linalg::real_trace(linalg::psd_part(x)));
  }
  CHECK(g.beta >= dual - 1e-9);
  CHECK(g.beta <= dual + 1e-4);
}

TEST_CASE("beta_n on the incoherent qubit") {
  const FreeSetFamily inc = FreeSetFamily::incoherent({2});
  const DensityMatrix plus = DensityMatrix::maximally_coherent(2);
  const HypothesisTestResult r = beta_n(plus, inc, 1, 0.01);
  CHECK(r.beta >= 0.49 * 0.95);
  CHECK(r.beta <= 0.51 * 1.05);
  CHECK(std::abs(r.beta - qubit_grid_beta(0.01)) < 5e-3);
  check_feasible(r, plus, 0.01);
  CHECK(r.lower_bound <= r.beta + 1e-12);
  CHECK(r.converged);
  CHECK_FALSE(r.sampled_extreme_points);

  double prev = 1.0;
  for (int n = 1; n <= 4; ++n) {
    const HypothesisTestResult b = beta_n(plus, inc, n, 0.05);
    check_feasible(b, tensor_power(plus, n), 0.05);
    CHECK(b.beta <= prev * (1.0 + 1e-6));
    prev = b.beta;
  }
  double last = 0.0;
  for (double eps : {0.1, 0.05, 0.01}) {
    const double b = beta_n(plus, inc, 2, eps).beta;
    CHECK(b >= last - 1e-9);
    last = b;
  }
  CHECK_THROWS_AS(beta_n(plus, inc, 1, 0.0), Error);
  CHECK_THROWS_AS(beta_n(plus, inc, 11, 0.1), Error);
}

TEST_CASE("beta_n on other families") {
  Rng rng(19);
  const FreeSetFamily gibbs = testing::gibbs_qubit();
  const DensityMatrix rho = random_density_matrix({2}, 2, rng);
  for (int n = 1; n <= 3; ++n) {
    const HypothesisTestResult b = beta_n(rho, gibbs, n, 0.05);
    const HypothesisTestResult s = beta_singleton(tensor_power(rho, n), tensor_power(gibbs.reference_state(), n), 0.05);
    CHECK(std::abs(b.beta - s.beta) < 1e-7);
  }
  // A free ρ is its own worst case: β = 1 - ε.
  const DensityMatrix free = DensityMatrix::diagonal({2}, RealVector{{0.3, 0.7}});
  CHECK(std::abs(beta_n(free, FreeSetFamily::incoherent({2}), 2, 0.1).beta - 0.9) < 1e-7);

  const HypothesisTestResult ppt = beta_n(DensityMatrix::bell_phi_plus(), FreeSetFamily::ppt({2, 2}), 1, 0.05);
  CHECK(ppt.sampled_extreme_points);
  check_feasible(ppt, DensityMatrix::bell_phi_plus(), 0.05);
}

TEST_CASE("stein exponent sequences") {
  const DensityMatrix zero = DensityMatrix::basis({2}, 0);
  const FreeSetFamily gibbs = testing::gibbs_qubit();
  const ExponentSequence g = stein_exponent_sequence(zero, gibbs, 8, 0.05);
  REQUIRE(g.entries.size() == 8);
  const double target = std::log2(1.0 / 0.7);
  CHECK(std::abs(g.entries.back().exponent - target) < 0.1);
  CHECK(std::abs(g.e_infinity_estimate - target) < 1e-6);

  const ExponentSequence m = stein_exponent_sequence(zero, FreeSetFamily::max_mixed({2}), 8, 0.05);
  CHECK(std::abs(m.entries.back().exponent - 1.0) < 0.1);
  for (std::size_t i = 3; i < m.entries.size(); ++i)
    CHECK(std::abs(m.entries[i].exponent - 1.0) <= std::abs(m.entries[i - 1].exponent - 1.0) + 1e-3);

  const DensityMatrix free = DensityMatrix::diagonal({2}, RealVector{{0.5, 0.5}});
  const ExponentSequence f = stein_exponent_sequence(free, FreeSetFamily::max_mixed({2}), 4, 0.05);
  for (const ExponentEntry& e : f.entries) CHECK(std::abs(e.beta - 0.95) < 1e-9);

  const std::string csv = g.to_csv();
  CHECK(csv.rfind("n,beta,exponent,e_infinity_estimate\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
}
