#include <doctest.h>

#include <cmath>

#include "rescomp/core/entropy.hpp"
#include "rescomp/core/error.hpp"
#include "rescomp/core/linalg.hpp"
#include "rescomp/core/ops.hpp"
#include "rescomp/core/random.hpp"
#include "rescomp/measures/measures.hpp"
#include "rescomp/protocol/protocol.hpp"

using namespace rescomp;

TEST_CASE("schedule and rounding") {
  CHECK(eps_schedule(4) == doctest::Approx(0.075));
  ProtocolOptions o;
  o.eps_prefactor = 1.0;
  CHECK(eps_schedule(9, o) == doctest::Approx(1.0 / 3.0));
  CHECK(output_copies(4, 2.0) == 8);
  CHECK(output_copies(3, 0.5) == 1);  // 1.5 rounds down
  CHECK(output_copies(5, 0.5) == 2);  // 2.5 rounds down
  CHECK(output_copies(3, 0.6) == 2);  // 1.8
  CHECK(output_copies(4, 0.3) == 1);  // 1.2
}

TEST_CASE("protocol channel structure") {
  const FreeSetFamily inc = FreeSetFamily::incoherent({2});
  const DensityMatrix plus = DensityMatrix::maximally_coherent(2);
  for (int n = 1; n <= 3; ++n) {
    const ProtocolSpec p = build_protocol(plus, plus, inc, n);
    CHECK(p.m == n);
    CHECK(p.channel.trace_preservation_error() < 1e-10);
    CHECK((p.sigma_n.matrix() - tensor_power(plus, p.m).matrix()).norm() < 1e-14);
    // The noise state turns σ_n into a free state at weight R(σ_n).
    const Matrix mix = (p.sigma_n.matrix() + p.robustness_sigma_n * p.pi_n.matrix()) / (1.0 + p.robustness_sigma_n);
    CHECK(p.fam_target.n_copy(p.m).contains(DensityMatrix::trusted(p.sigma_n.shape(), mix), 1e-6).is_member);

    Rng rng(static_cast<std::uint64_t>(n));
    for (int t = 0; t < 3; ++t) {
      const DensityMatrix x = random_density_matrix(p.source.shape().n_copy(n), 2, rng);
      const double a = linalg::real_trace(p.test().matrix() * x.matrix());
      const Matrix expect = a * p.sigma_n.matrix() + (1.0 - a) * p.pi_n.matrix();
      CHECK((p.channel.apply(x).matrix() - expect).norm() < 1e-12);
    }
    // Self-conversion: output within 2ε_n of σ^{⊗n}.
    const DensityMatrix out = p.channel.apply(tensor_power(plus, n));
    CHECK(trace_distance(out, tensor_power(plus, n)) <= 2.0 * p.eps_n + 1e-9);
  }
}

TEST_CASE("resource generation level") {
  const FreeSetFamily inc = FreeSetFamily::incoherent({2});
  CHECK(std::abs(eps_rng_level(QuantumChannel::identity({2}), inc, inc)) < 1e-6);
  const QuantumChannel rep = QuantumChannel::replacer({2}, DensityMatrix::maximally_coherent(2));
  CHECK(std::abs(eps_rng_level(rep, inc, inc) - 1.0) < 1e-5);
  const FreeSetFamily inc3 = FreeSetFamily::incoherent({3});
  const QuantumChannel rep3 = QuantumChannel::replacer({3}, DensityMatrix::maximally_coherent(3));
  CHECK(std::abs(eps_rng_level(rep3, inc3, inc3) - 2.0) < 1e-5);

  // Protocol channels on the qubit: the level does not grow with n.
  const DensityMatrix rho = DensityMatrix::maximally_coherent(2);
  double prev = 1e300;
  for (int n = 1; n <= 4; ++n) {
    const ProtocolSpec p = build_protocol(rho, rho, inc, n);
    const double level = eps_rng_level(p.channel, inc.n_copy(n), inc.n_copy(p.m));
    CHECK(level <= prev + 1e-3);
    prev = level;
  }
}

TEST_CASE("rate experiments") {
  const FreeSetFamily inc = FreeSetFamily::incoherent({2});
  const DensityMatrix plus2 = DensityMatrix::maximally_coherent(2);
  const RateExperimentReport self = rate_experiment(plus2, plus2, inc, 4);
  REQUIRE(self.entries.size() == 4);
  CHECK(std::abs(self.estimates.predicted_rate() - 1.0) < 1e-6);
  for (const RateEntry& e : self.entries) {
    CHECK(e.achieved_rate == static_cast<double>(e.m) / e.n);
    CHECK(e.m == e.n);
  }
  CHECK(self.entries.back().out_trace_distance <= 0.1);

  const DensityMatrix plus4 = DensityMatrix::maximally_coherent(4);
  const RateExperimentReport four =
      rate_experiment(plus4, plus2, FreeSetFamily::incoherent({4}), FreeSetFamily::incoherent({2}), 3);
  CHECK(std::abs(four.estimates.predicted_rate() - 2.0) < 1e-5);
  for (const RateEntry& e : four.entries) {
    CHECK(e.m == 2 * e.n);
    CHECK(e.achieved_rate == 2.0);
  }
  const std::string csv = four.to_csv();
  CHECK(csv.rfind("n,m,eps_n,beta_n,out_trace_dist,eps_rng,predicted_rate,achieved_rate\n", 0) == 0);
  CHECK(four.to_json().at("entries").size() == 3);

  try {
    rate_experiment(plus2, DensityMatrix::maximally_mixed({2}), inc, 2);
    FAIL("free target accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TargetIsFree);
  }
}
