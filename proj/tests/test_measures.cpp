#include <doctest.h>

#include <cmath>

#include "rescomp/core/entropy.hpp"
#include "rescomp/core/error.hpp"
#include "rescomp/core/linalg.hpp"
#include "rescomp/core/ops.hpp"
#include "rescomp/core/random.hpp"
#include "rescomp/measures/measures.hpp"
#include "support.hpp"

using namespace rescomp;

namespace {

// S(Δρ) - S(ρ), computed from the diagonal and the spectrum directly.
double coherence_closed_form(const DensityMatrix& rho) {
  double sd = 0.0;
  for (Index i = 0; i < rho.dim(); ++i) {
    const double p = rho.matrix()(i, i).real();
    if (p > 0.0) sd -= p * std::log2(p);
  }
  double s = 0.0;
  const RealVector l = linalg::eigenvalues(rho.matrix());
  for (Index i = 0; i < l.size(); ++i)
    if (l(i) > 1e-300) s -= l(i) * std::log2(l(i));
  return sd - s;
}

SolverConfig frank_wolfe() {
  SolverConfig cfg;
  cfg.relative_entropy_method = RelativeEntropyMethod::FrankWolfe;
  return cfg;
}

}  // namespace

TEST_CASE("relative entropy of coherence") {
  const FreeSetFamily inc = FreeSetFamily::incoherent({2});
  const DensityMatrix plus = DensityMatrix::maximally_coherent(2);
  const MeasureResult e = relative_entropy_of_resource(plus, inc, frank_wolfe());
  CHECK(std::abs(e.value - 1.0) < 1e-5);
  CHECK(e.lower_bound <= e.value + 1e-12);
  CHECK(e.converged);
  // Grid over diagonal σ = diag(p, 1-p).
  double grid = 1e300;
  for (int k = 1; k < 2000; ++k) {
    const double p = k / 2000.0;
    grid = std::min(grid, quantum_relative_entropy(plus, DensityMatrix::diagonal({2}, RealVector{{p, 1.0 - p}})));
  }
  CHECK(std::abs(e.value - grid) < 1e-5);

  Rng rng(101);
  for (int d : {2, 3}) {
    const FreeSetFamily fam = FreeSetFamily::incoherent({d});
    for (int t = 0; t < 10; ++t) {
      const DensityMatrix rho = random_density_matrix({d}, 1 + t % d, rng);
      CHECK(std::abs(relative_entropy_of_resource(rho, fam, frank_wolfe()).value - coherence_closed_form(rho)) < 1e-4);
    }
  }
  CHECK(std::abs(relative_entropy_of_resource(DensityMatrix::diagonal({2}, RealVector{{0.2, 0.8}}), inc).value) < 1e-7);
}

TEST_CASE("relative entropy of entanglement of the Bell state") {
  const DensityMatrix bell = DensityMatrix::bell_phi_plus();
  // Isotropic states p Φ⁺ + (1-p)(I - Φ⁺)/3 are PPT for p ≤ 1/2; scan them.
  double scan = 1e300;
  for (int k = 1; k <= 500; ++k) {
    const double p = 0.5 * k / 500.0;
    const Matrix s = p * bell.matrix() + (1.0 - p) * (Matrix::Identity(4, 4) - bell.matrix()) / 3.0;
    scan = std::min(scan, quantum_relative_entropy(bell, DensityMatrix::trusted({2, 2}, s)));
  }
  const MeasureResult e = relative_entropy_of_resource(bell, FreeSetFamily::ppt({2, 2}));
  CHECK(std::abs(e.value - 1.0) < 1e-3);
  CHECK(e.value <= scan + 1e-3);
}

TEST_CASE("global robustness") {
  const FreeSetFamily inc = FreeSetFamily::incoherent({2});
  const DensityMatrix plus = DensityMatrix::maximally_coherent(2);
  const MeasureResult r = global_robustness(plus, inc);
  CHECK(std::abs(r.value - 1.0) < 1e-6);
  REQUIRE(r.noise_state.has_value());
  const Matrix mixed = (plus.matrix() + r.value * r.noise_state->matrix()) / (1.0 + r.value);
  CHECK(std::abs(mixed(0, 1)) < 1e-6);

  // Grid over (s, π): the mixture is diagonal iff s·π₀₁ = -1/2 with |π₀₁| ≤ 1/2.
  double grid = 1e300;
  for (int a = 0; a <= 400; ++a) {
    const double s = 2.0 * a / 400.0;
    for (int b = 0; b <= 100; ++b) {
      const double c = -0.5 * b / 100.0;  // real off-diagonal of π = [[1/2, c], [c, 1/2]]
      if (std::abs(0.5 + s * c) < 1e-12) grid = std::min(grid, s);
    }
  }
  CHECK(r.value <= grid + 1e-6);

  for (int d : {2, 3, 4}) {
    const double v = global_robustness(DensityMatrix::maximally_coherent(d), FreeSetFamily::incoherent({d})).value;
    CHECK(std::abs(v - (d - 1)) < 1e-5);
  }
  CHECK(std::abs(global_robustness(DensityMatrix::bell_phi_plus(), FreeSetFamily::ppt({2, 2})).value - 1.0) < 1e-3);
  CHECK(std::abs(global_robustness(DensityMatrix::maximally_mixed({2}), inc).value) < 1e-7);

  SolverConfig dyk;
  dyk.robustness_method = RobustnessMethod::BisectionDykstra;
  CHECK(std::abs(global_robustness(plus, inc, dyk).value - 1.0) < 1e-5);
}

TEST_CASE("log robustness") {
  const FreeSetFamily inc = FreeSetFamily::incoherent({2});
  CHECK(std::abs(log_robustness(DensityMatrix::maximally_coherent(2), inc) - 1.0) < 2e-6);
  CHECK(std::abs(log_robustness(DensityMatrix::diagonal({2}, RealVector{{0.4, 0.6}}), inc)) < 1e-7);
  Rng rng(55);
  const FreeSetFamily two = inc.n_copy(2);
  for (int t = 0; t < 4; ++t) {
    const DensityMatrix rho = random_density_matrix({2}, 2, rng);
    CHECK(log_robustness(tensor_power(rho, 2), two) <= 2.0 * log_robustness(rho, inc) + 1e-5);
  }
}

TEST_CASE("smoothed log robustness") {
  const FreeSetFamily inc = FreeSetFamily::incoherent({2});
  Rng rng(66);
  for (int t = 0; t < 3; ++t) {
    const DensityMatrix rho = random_density_matrix({2}, 1, rng);
    const double lr = log_robustness(rho, inc);
    const double s0 = smoothed_log_robustness(rho, inc, 0.0).value;
    const double s01 = smoothed_log_robustness(rho, inc, 0.01).value;
    const double s1 = smoothed_log_robustness(rho, inc, 0.1).value;
    CHECK(std::abs(s0 - lr) < 1e-6);
    CHECK(s01 <= s0 + 1e-9);
    CHECK(s1 <= s01 + 1e-9);
    const double t_dist = trace_distance_of_resource(rho, inc).value;
    CHECK(std::abs(smoothed_log_robustness(rho, inc, std::min(0.99, t_dist + 1e-6)).value) < 1e-6);
  }
  CHECK_THROWS_AS(smoothed_log_robustness(DensityMatrix::maximally_coherent(2), inc, 1.0), Error);
}

TEST_CASE("regularized estimates") {
  const FreeSetFamily inc = FreeSetFamily::incoherent({2});
  const RegularizedEstimate plus = regularized_estimate(DensityMatrix::maximally_coherent(2), inc, 3);
  REQUIRE(plus.per_copy.size() == 3);
  for (double v : plus.per_copy) CHECK(std::abs(v - 1.0) < 1e-4);
  for (double v : regularized_estimate(DensityMatrix::maximally_mixed({2}), inc, 3).per_copy) CHECK(std::abs(v) < 1e-7);

  const FreeSetFamily gibbs = testing::gibbs_qubit();
  const DensityMatrix rho = random_density_matrix({2}, 2, 12);
  const double target = quantum_relative_entropy(rho, gibbs.reference_state());
  for (double v : regularized_estimate(rho, gibbs, 3).per_copy) CHECK(std::abs(v - target) < 1e-6);
  CHECK_THROWS_AS(regularized_estimate(rho, inc, 11), Error);
}

TEST_CASE("trace distance of resource") {
  const FreeSetFamily inc = FreeSetFamily::incoherent({2});
  const DensityMatrix plus = DensityMatrix::maximally_coherent(2);
  double grid = 1e300;
  for (int k = 0; k <= 1000; ++k) {
    const double p = k / 1000.0;
    grid = std::min(grid, trace_distance(plus, DensityMatrix::diagonal({2}, RealVector{{p, 1.0 - p}})));
  }
  const double t = trace_distance_of_resource(plus, inc).value;
  CHECK(std::abs(t - 0.5) < 1e-4);
  CHECK(std::abs(t - grid) < 1e-4);
  CHECK(std::abs(trace_distance_of_resource(DensityMatrix::maximally_mixed({2}), inc).value) < 1e-7);
  Rng rng(77);
  for (int k = 0; k < 5; ++k) {
    const DensityMatrix rho = random_density_matrix({3}, 2, rng);
    const FreeSetFamily fam = FreeSetFamily::incoherent({3});
    const double e = relative_entropy_of_resource(rho, fam).value;
    CHECK(trace_distance_of_resource(rho, fam).value <= std::sqrt(e * std::log(2.0) / 2.0) + 1e-6);
  }
}

TEST_CASE("faithfulness") {
  Rng rng(88);
  for (const FreeSetFamily& fam : testing::property_families()) {
    const DensityMatrix member = testing::random_member(fam, rng);
    CHECK(relative_entropy_of_resource(member, fam).value <= 1e-6);
    CHECK(global_robustness(member, fam).value <= 1e-6);
    const DensityMatrix res = testing::random_resource_state(fam, rng);
    CHECK(relative_entropy_of_resource(res, fam).value > 1e-6);
    CHECK(global_robustness(res, fam).value > 1e-6);
  }
}
