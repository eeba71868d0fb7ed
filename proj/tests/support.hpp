#pragma once

// Helpers shared by the unit tests and the acceptance binary: random
// free-preserving channels per family and the property suites.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "rescomp/core/channel.hpp"
#include "rescomp/core/entropy.hpp"
#include "rescomp/core/linalg.hpp"
#include "rescomp/core/ops.hpp"
#include "rescomp/core/random.hpp"
#include "rescomp/free_sets/family.hpp"
#include "rescomp/measures/measures.hpp"

namespace rescomp::testing {

/// Incoherent operation with Kraus operators K_k = P_k diag(a_k): the column
/// amplitudes a_{·i} are unit vectors, so Σ K†K = I, and every K_k maps basis
/// states to basis states.
inline QuantumChannel random_incoherent_channel(const SubsystemShape& shape, int kraus_count, Rng& rng) {
  const Index d = shape.total();
  Matrix amps(kraus_count, d);
  for (Index i = 0; i < d; ++i) amps.col(i) = haar_random_vector(kraus_count, rng);
  std::vector<Matrix> kraus;
  for (int k = 0; k < kraus_count; ++k) {
    std::vector<Index> perm(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix kk = Matrix::Zero(d, d);
    for (Index i = 0; i < d; ++i) kk(perm[static_cast<std::size_t>(i)], i) = amps(k, i);
    kraus.push_back(kk);
  }
  return QuantumChannel::from_kraus(shape, shape, std::move(kraus));
}

/// Λ_A ⊗ Λ_B with random local channels on a bipartite shape.
inline QuantumChannel random_local_channel(const SubsystemShape& shape, Rng& rng) {
  const SubsystemShape a{shape.dim(0)};
  const SubsystemShape b{shape.dim(1)};
  return QuantumChannel::tensor(random_channel(a, a, 2, rng), random_channel(b, b, 2, rng));
}

/// p·U X U† + (1-p)·tr(X) γ with U diagonal; fixes any diagonal γ.
inline QuantumChannel random_gamma_fixing_channel(const DensityMatrix& gamma, Rng& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const Index d = gamma.dim();
  const double p = uni(rng);
  Vector phases(d);
  for (Index i = 0; i < d; ++i) phases(i) = std::polar(1.0, 2.0 * 3.14159265358979323846 * uni(rng));
  std::vector<Matrix> kraus;
  kraus.push_back(std::sqrt(p) * Matrix(phases.asDiagonal()));
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      Matrix k = Matrix::Zero(d, d);
      k(i, j) = std::sqrt((1.0 - p) * gamma.matrix()(i, i).real());
      kraus.push_back(k);
    }
  }
  return QuantumChannel::from_kraus(gamma.shape(), gamma.shape(), std::move(kraus));
}

/// Mixture of Haar unitaries: unital, so it fixes I/d.
inline QuantumChannel random_unital_channel(const SubsystemShape& shape, int terms, Rng& rng) {
  std::uniform_real_distribution<double> uni(0.1, 1.0);
  std::vector<double> w(static_cast<std::size_t>(terms));
  double total = 0.0;
  for (double& x : w) total += (x = uni(rng));
  std::vector<Matrix> kraus;
  for (int t = 0; t < terms; ++t)
    kraus.push_back(std::sqrt(w[static_cast<std::size_t>(t)] / total) * haar_random_unitary(shape.total(), rng));
  return QuantumChannel::from_kraus(shape, shape, std::move(kraus));
}

/// A random channel that maps `fam` into itself, checked on the extreme
/// points (sampled ones for PPT, plus random members).
inline QuantumChannel random_free_channel(const FreeSetFamily& fam, Rng& rng) {
  switch (fam.kind()) {
    case FamilyKind::Incoherent: return random_incoherent_channel(fam.shape(), 3, rng);
    case FamilyKind::Ppt: return random_local_channel(fam.shape(), rng);
    case FamilyKind::MaxMixedSingleton: return random_unital_channel(fam.shape(), 3, rng);
    default: return random_gamma_fixing_channel(fam.reference_state(), rng);
  }
}

inline bool preserves(const QuantumChannel& ch, const FreeSetFamily& fam, double tol = 1e-7) {
  for (const DensityMatrix& w : fam.extreme_points(16, 5)) {
    if (!fam.contains(ch.apply(w), tol).is_member) return false;
  }
  return fam.contains(ch.apply(fam.reference_state()), tol).is_member;
}

/// Random state that is not free (a random pure or low-rank state).
inline DensityMatrix random_resource_state(const FreeSetFamily& fam, Rng& rng) {
  for (int attempt = 0; attempt < 32; ++attempt) {
    std::uniform_int_distribution<Index> rank(1, std::min<Index>(2, fam.shape().total()));
    DensityMatrix r = random_density_matrix(fam.shape(), rank(rng), rng);
    if (!fam.contains(r, 1e-4).is_member) return r;
  }
  return random_density_matrix(fam.shape(), 1, rng);
}

/// Random member: a mixture of two extreme points and the reference state.
inline DensityMatrix random_member(const FreeSetFamily& fam, Rng& rng) {
  const std::vector<DensityMatrix> pts = fam.extreme_points(16, rng());
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double a = uni(rng);
  const double b = (1.0 - a) * uni(rng);
  const Matrix m = a * pts[pick(rng)].matrix() + b * pts[pick(rng)].matrix() +
                   (1.0 - a - b) * fam.reference_state().matrix();
  return DensityMatrix::trusted(fam.shape(), m);
}

/// Outcome of one property suite.
struct Suite {
  std::string name;
  int instances = 0;
  int failures = 0;
  double worst = 0.0;  // largest violation seen
  std::string first_failure;

  bool pass() const { return failures == 0 && instances > 0; }
  void record(double violation, double tol, const std::string& what) {
    ++instances;
    worst = std::max(worst, violation);
    if (violation > tol) {
      if (failures == 0) first_failure = what + " (violation " + std::to_string(violation) + ")";
      ++failures;
    }
  }
};

/// S(Λρ‖Λσ) ≤ S(ρ‖σ) and T(Λρ, Λσ) ≤ T(ρ, σ) on random channels.
inline Suite data_processing_suite(int instances, std::uint64_t seed, double tol = 1e-8) {
  Suite s;
  s.name = "data processing";
  Rng rng(seed);
  for (int i = 0; i < instances; ++i) {
    const int d = 2 + i % 3;
    const int dout = 2 + (i / 3) % 2;
    const SubsystemShape in{d};
    const SubsystemShape out{dout};
    const DensityMatrix rho = random_density_matrix(in, d, rng);
    const DensityMatrix sigma = random_density_matrix(in, d, rng);
    const QuantumChannel ch = random_channel(in, out, 1 + i % 3, rng);
    const DensityMatrix a = ch.apply(rho);
    const DensityMatrix b = ch.apply(sigma);
    s.record(quantum_relative_entropy(a, b) - quantum_relative_entropy(rho, sigma), tol,
             "relative entropy instance " + std::to_string(i));
    s.record(trace_distance(a, b) - trace_distance(rho, sigma), tol, "trace distance instance " + std::to_string(i));
  }
  return s;
}

/// Gibbs state diag(0.7, 0.3) of H = diag(0, ln(7/3)) at β = 1.
inline FreeSetFamily gibbs_qubit() {
  RealVector e{{0.0, std::log(7.0 / 3.0)}};
  return FreeSetFamily::gibbs(HermitianOperator(SubsystemShape{2}, e.cast<Complex>().asDiagonal()), 1.0);
}

inline std::vector<FreeSetFamily> property_families() {
  return {
      FreeSetFamily::incoherent({2}),
      FreeSetFamily::incoherent({3}),
      FreeSetFamily::ppt({2, 2}),
      gibbs_qubit(),
      FreeSetFamily::max_mixed({2}),
  };
}

using MeasureFn = std::function<double(const DensityMatrix&, const FreeSetFamily&)>;

inline double measure_e(const DensityMatrix& r, const FreeSetFamily& f) {
  return relative_entropy_of_resource(r, f).value;
}
inline double measure_r(const DensityMatrix& r, const FreeSetFamily& f) { return global_robustness(r, f).value; }

/// Convexity M(tρ₁+(1-t)ρ₂) ≤ tM(ρ₁)+(1-t)M(ρ₂), and faithfulness M(free) = 0,
/// M(resource) > 0, for E and R across the property families.
inline Suite convexity_faithfulness_suite(int instances_per_family, std::uint64_t seed, double tol = 1e-5) {
  Suite s;
  s.name = "convexity and faithfulness";
  Rng rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (const FreeSetFamily& fam : property_families()) {
    for (int i = 0; i < instances_per_family; ++i) {
      const DensityMatrix r1 = random_resource_state(fam, rng);
      const DensityMatrix r2 = random_density_matrix(fam.shape(), fam.shape().total(), rng);
      const double t = uni(rng);
      const DensityMatrix mix = DensityMatrix::mix(t, r1, r2);
      const DensityMatrix member = random_member(fam, rng);
      const std::string tag = fam.name() + " #" + std::to_string(i);
      for (const auto& [label, fn] : {std::pair<const char*, MeasureFn>{"E", measure_e}, {"R", measure_r}}) {
        const double m1 = fn(r1, fam);
        const double m2 = fn(r2, fam);
        s.record(fn(mix, fam) - (t * m1 + (1.0 - t) * m2), tol, std::string(label) + " convexity " + tag);
        s.record(std::abs(fn(member, fam)), tol, std::string(label) + " vanishes on free " + tag);
        s.record(m1 > tol ? 0.0 : 1.0, 0.5, std::string(label) + " positive on resource " + tag);
      }
    }
  }
  return s;
}

/// M(Λρ) ≤ M(ρ) for `channels` verified free-preserving channels per family.
inline Suite monotonicity_suite(int channels, int states_per_channel, std::uint64_t seed, double tol = 1e-5) {
  Suite s;
  s.name = "monotonicity";
  Rng rng(seed);
  for (const FreeSetFamily& fam : property_families()) {
    int built = 0;
    for (int attempt = 0; built < channels && attempt < 10 * channels; ++attempt) {
      const QuantumChannel ch = random_free_channel(fam, rng);
      if (!preserves(ch, fam)) continue;
      ++built;
      for (int k = 0; k < states_per_channel; ++k) {
        const DensityMatrix rho = random_resource_state(fam, rng);
        const DensityMatrix out = ch.apply(rho);
        const std::string tag = fam.name() + " channel " + std::to_string(built) + " state " + std::to_string(k);
        s.record(measure_e(out, fam) - measure_e(rho, fam), tol, "E " + tag);
        s.record(measure_r(out, fam) - measure_r(rho, fam), tol, "R " + tag);
      }
    }
    if (built < channels) {
      ++s.failures;
      if (s.first_failure.empty()) s.first_failure = "could not build free channels for " + fam.name();
    }
  }
  return s;
}

}  // namespace rescomp::testing
