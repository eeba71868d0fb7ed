#include <algorithm>
#include <cmath>
#include <limits>

#include "certificates.hpp"
#include "rescomp/core/error.hpp"
#include "rescomp/core/linalg.hpp"
#include "rescomp/core/ops.hpp"
#include "rescomp/measures/measures.hpp"
#include "rescomp/solvers/conic.hpp"

namespace rescomp {

namespace {

MeasureResult finish(const DensityMatrix& rho, const FreeSetFamily& fam, const detail::RobustnessCertificate& cert,
                     const std::string& method, int iterations, bool converged) {
  if (!std::isfinite(cert.upper))
    throw Error(ErrorCode::InfeasibleAtUpperBound,
                "no free state of " + fam.name() + " covers the support of the input (robustness is infinite)");
  MeasureResult r;
  r.measure = "R";
  r.family = fam.name();
  r.method = method;
  r.iterations = iterations;
  r.converged = converged;
  r.value = std::max(0.0, cert.upper - 1.0);
  r.lower_bound = std::min(r.value, std::max(0.0, cert.lower - 1.0));
  r.gap_bound = r.value - r.lower_bound;
  const DensityMatrix sigma = DensityMatrix::trusted(fam.shape(), cert.sigma);
  r.closest_free = sigma;
  // π* = ((1+s)σ - ρ)/s, which is PSD because ρ ⪯ (1+s)σ.
  if (r.value > 1e-12) {
    Matrix pi = linalg::psd_part(cert.upper * cert.sigma - rho.matrix());
    pi /= linalg::real_trace(pi);
    r.noise_state = DensityMatrix::trusted(fam.shape(), pi);
  } else {
    r.noise_state = fam.reference_state();
  }
  if (cert.witness.size() > 0) r.witness = HermitianOperator(fam.shape(), linalg::hermitize(cert.witness));
  return r;
}

bool is_pure(const DensityMatrix& rho) { return rho.purity() > 1.0 - 1e-12; }

// Incoherent pure state ψ: R = (Σ|ψ_i|)² - 1 with σ*_i ∝ |ψ_i|.
MeasureResult incoherent_pure(const DensityMatrix& rho, const FreeSetFamily& fam, const SolverConfig& cfg) {
  const linalg::Eigh e = linalg::eigh(rho.matrix());
  const Vector psi = e.vectors.col(e.values.size() - 1);
  const RealVector mag = psi.cwiseAbs();
  const double l1 = mag.sum();
  detail::RobustnessCertificate cert;
  cert.upper = l1 * l1;
  cert.sigma = (mag / l1).cast<Complex>().asDiagonal();
  // Dual witness W_ij = conj(φ_i) φ_j with φ_i = ψ_i/|ψ_i|: tr(Wρ) = (Σ|ψ_i|)², max_i W_ii = 1.
  Vector phase(psi.size());
  for (Index i = 0; i < psi.size(); ++i) phase(i) = mag(i) > 0.0 ? psi(i) / mag(i) : Complex(0.0);
  cert.witness = phase * phase.adjoint();
  cert.lower = std::max(1.0, detail::robustness_witness_bound(cert.witness, rho.matrix(), fam, cfg));
  return finish(rho, fam, cert, "closed_form", 0, true);
}

MeasureResult singleton(const DensityMatrix& rho, const FreeSetFamily& fam, const SolverConfig& cfg) {
  detail::RobustnessCertificate cert;
  cert.offer_state(rho.matrix(), fam.reference_state().matrix(), fam, cfg);
  cert.lower = cert.upper;
  return finish(rho, fam, cert, "closed_form", 0, true);
}

void offer_start(detail::RobustnessCertificate& cert, const DensityMatrix& rho, const FreeSetFamily& fam,
                 const SolverConfig& cfg) {
  const double mu = cfg.mixing_floor;
  cert.offer_state(rho.matrix(), detail::floored(fam.reference_state().matrix(), fam, 0.0), fam, cfg);
  cert.offer_state(rho.matrix(), detail::floored(fam.repair(rho.matrix()).matrix(), fam, mu), fam, cfg);
  cert.offer_state(rho.matrix(), detail::floored(fam.repair(fam.project(rho.matrix())).matrix(), fam, mu), fam,
                   cfg);
}

Matrix cone_point_to_state(const Matrix& z, const FreeSetFamily& fam, double mu) {
  Matrix y = linalg::hermitize(z);
  for (const MatrixProjection& p : fam.cone_projections()) p(y);
  const double t = linalg::real_trace(y);
  if (!(t > 1e-300)) return fam.reference_state().matrix();
  return detail::floored(fam.repair(y / t).matrix(), fam, mu);
}

MeasureResult admm(const DensityMatrix& rho, const FreeSetFamily& fam, const SolverConfig& cfg) {
  detail::RobustnessCertificate cert;
  offer_start(cert, rho, fam, cfg);
  const double target = cfg.certificate_tolerance;
  if (cert.gap() <= target) return finish(rho, fam, cert, "conic_admm", 0, true);

  const Index d = fam.shape().total();
  const Matrix r = rho.matrix();
  conic::Problem prob;
  prob.objective = {Matrix::Identity(d, d)};
  prob.sets.push_back([r](conic::Blocks& b) { b[0] = r + linalg::psd_part(b[0] - r); });
  for (const MatrixProjection& p : fam.cone_projections()) prob.sets.push_back([p](conic::Blocks& b) { p(b[0]); });

  conic::Options opt;
  opt.max_iterations = cfg.admm_max_iterations;
  opt.tolerance = cfg.admm_tolerance;
  opt.check_every = 50;
  const conic::Monitor monitor = [&](const conic::State& st) {
    cert.offer_state(r, cone_point_to_state(st.z[0], fam, cfg.mixing_floor), fam, cfg);
    const Matrix y = st.penalty * st.duals[0][0];
    for (double sign : {1.0, -1.0})
      cert.offer_witness(linalg::psd_part(Matrix(Matrix::Identity(d, d) + sign * y)), r, fam, cfg);
    return cert.gap() <= target;
  };
  const conic::State st = conic::solve(prob, {cert.upper * cert.sigma}, opt, monitor);
  monitor(st);
  return finish(rho, fam, cert, "conic_admm", st.iterations, cert.gap() <= target);
}

MeasureResult bisection_dykstra(const DensityMatrix& rho, const FreeSetFamily& fam, const SolverConfig& cfg) {
  detail::RobustnessCertificate cert;
  offer_start(cert, rho, fam, cfg);
  const Matrix r = rho.matrix();
  const double d = static_cast<double>(fam.shape().total());
  double lo = 0.0;
  double hi = d;
  int total_iterations = 0;

  auto feasible = [&](double s) {
    std::vector<conic::Projection> sets;
    for (const MatrixProjection& p : fam.set_projections()) sets.push_back([p](conic::Blocks& b) { p(b[0]); });
    sets.push_back([r, s](conic::Blocks& b) {
      const Matrix base = r / (1.0 + s);
      b[0] = base + linalg::psd_part(b[0] - base);
    });
    const conic::FeasibilityResult res =
        conic::dykstra(sets, {cert.sigma}, cfg.dykstra_max_iterations, cfg.feasibility_margin);
    total_iterations += res.iterations;
    const Matrix point = detail::floored(fam.repair(res.point[0]).matrix(), fam, cfg.mixing_floor);
    cert.offer_state(r, point, fam, cfg);
    return res.feasible;
  };

  if (cert.upper - 1.0 > d && !feasible(d))
    throw Error(ErrorCode::InfeasibleAtUpperBound,
                "robustness exceeds the bracket s_max = " + std::to_string(static_cast<int>(d)) + " for " + fam.name());
  hi = std::min(hi, cert.upper - 1.0);
  lo = std::max(lo, cert.lower - 1.0);
  int steps = 0;
  while (hi - lo > cfg.bisection_tolerance && steps++ < 200) {
    const double s = 0.5 * (lo + hi);
    if (feasible(s))
      hi = std::min(s, cert.upper - 1.0);
    else
      lo = s;
    hi = std::min(hi, cert.upper - 1.0);
  }
  return finish(rho, fam, cert, "bisection_dykstra", total_iterations, hi - lo <= cfg.bisection_tolerance);
}

}  // namespace

MeasureResult global_robustness(const DensityMatrix& rho, const FreeSetFamily& fam, const SolverConfig& cfg) {
  cfg.validate();
  require_same_shape(rho.shape(), fam.shape(), "global_robustness");
  if (cfg.robustness_method == RobustnessMethod::BisectionDykstra) return bisection_dykstra(rho, fam, cfg);
  if (cfg.robustness_method == RobustnessMethod::Auto) {
    if (fam.is_singleton()) return singleton(rho, fam, cfg);
    if (fam.kind() == FamilyKind::Incoherent && is_pure(rho)) return incoherent_pure(rho, fam, cfg);
  }
  return admm(rho, fam, cfg);
}

MeasureResult log_robustness_result(const DensityMatrix& rho, const FreeSetFamily& fam, const SolverConfig& cfg) {
  MeasureResult r = global_robustness(rho, fam, cfg);
  r.measure = "logR";
  const double v = std::log2(1.0 + r.value);
  const double l = std::log2(1.0 + r.lower_bound);
  r.value = v;
  r.lower_bound = l;
  r.gap_bound = v - l;
  return r;
}

double log_robustness(const DensityMatrix& rho, const FreeSetFamily& fam, const SolverConfig& cfg) {
  return log_robustness_result(rho, fam, cfg).value;
}

}  // namespace rescomp
