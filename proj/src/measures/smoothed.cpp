#include <algorithm>
#include <cmath>
#include <limits>

#include "certificates.hpp"
#include "rescomp/core/entropy.hpp"
#include "rescomp/core/error.hpp"
#include "rescomp/core/linalg.hpp"
#include "rescomp/measures/measures.hpp"
#include "rescomp/solvers/conic.hpp"

namespace rescomp {

namespace {

// Frobenius projection onto {X : ‖X - c‖₁ ≤ radius}.
Matrix project_trace_ball(const Matrix& x, const Matrix& c, double radius) {
  const linalg::Eigh e = linalg::eigh(linalg::hermitize(x - c));
  if (e.values.cwiseAbs().sum() <= radius) return x;
  const RealVector v = linalg::project_l1_ball(e.values, radius);
  return c + e.vectors * v.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

// A state within trace distance eps of ρ, close to x.
Matrix into_ball(const Matrix& x, const Matrix& rho, double eps) {
  Matrix s = linalg::project_spectraplex(x, 1.0);
  const double t = 0.5 * linalg::trace_norm(s - rho);
  if (t > eps) s = rho + (eps / t) * (s - rho);
  return linalg::hermitize(s);
}

}  // namespace

MeasureResult smoothed_log_robustness(const DensityMatrix& rho, const FreeSetFamily& fam, double eps,
                                      const SolverConfig& cfg) {
  cfg.validate();
  require_same_shape(rho.shape(), fam.shape(), "smoothed_log_robustness");
  if (!(eps >= 0.0 && eps < 1.0)) throw Error(ErrorCode::InvalidArgument, "smoothing radius must lie in [0, 1)");

  const MeasureResult base = global_robustness(rho, fam, cfg);
  MeasureResult out;
  out.measure = "smoothed_logR";
  out.family = fam.name();
  if (eps == 0.0 || base.value == 0.0) {
    out = log_robustness_result(rho, fam, cfg);
    out.measure = "smoothed_logR";
    out.smoothed_state = rho;
    return out;
  }
  const MeasureResult td = trace_distance_of_resource(rho, fam, cfg);
  if (td.value <= eps) {
    out.method = "smooth_onto_free";
    out.value = 0.0;
    out.lower_bound = 0.0;
    out.gap_bound = 0.0;
    out.smoothed_state = td.closest_free;
    out.closest_free = td.closest_free;
    out.noise_state = fam.reference_state();
    return out;
  }

  const Matrix r = rho.matrix();
  const Index d = fam.shape().total();
  const double mu = cfg.mixing_floor;
  // Certificate: smoothed state ρ″, free σ with ρ″ ⪯ upper·σ, and a lower bound.
  double upper = 1.0 + base.value;
  double lower = 1.0;
  Matrix best_rho = r;
  Matrix best_sigma = base.closest_free->matrix();

  auto offer = [&](const Matrix& rho2, const Matrix& sigma) {
    const double u = linalg::max_relative_eigenvalue(rho2, sigma, 1e-14);
    if (u < upper) {
      upper = u;
      best_rho = rho2;
      best_sigma = sigma;
    }
    if (std::isfinite(u)) {
      lower = std::max(lower, detail::robustness_witness_bound(detail::top_eigen_witness(rho2, sigma), r, fam, cfg,
                                                               eps));
    }
  };
  if (base.witness) lower = std::max(lower, detail::robustness_witness_bound(base.witness->matrix(), r, fam, cfg, eps));
  // Moving ρ toward its closest free state by the full budget is feasible.
  {
    const Matrix toward = r + (eps / td.value) * (td.closest_free->matrix() - r);
    offer(toward, base.closest_free->matrix());
    offer(toward, detail::floored(td.closest_free->matrix(), fam, mu));
  }

  const double target = cfg.certificate_tolerance;
  int iterations = 0;
  if (upper - lower > target) {
    const double h = std::sqrt(0.5);
    conic::Problem prob;
    prob.objective = {Matrix::Identity(d, d), Matrix::Zero(d, d)};
    // Z - ρ′ ⪰ 0 in rotated coordinates u = (Z+ρ′)/√2, v = (Z-ρ′)/√2.
    prob.sets.push_back([h](conic::Blocks& b) {
      const Matrix u = h * (b[0] + b[1]);
      const Matrix v = linalg::psd_part(Matrix(h * (b[0] - b[1])));
      b[0] = h * (u + v);
      b[1] = h * (u - v);
    });
    for (const MatrixProjection& p : fam.cone_projections()) prob.sets.push_back([p](conic::Blocks& b) { p(b[0]); });
    prob.sets.push_back([](conic::Blocks& b) { b[1] = linalg::project_spectraplex(b[1], 1.0); });
    prob.sets.push_back([r, eps](conic::Blocks& b) { b[1] = project_trace_ball(b[1], r, 2.0 * eps); });

    conic::Options opt;
    opt.max_iterations = cfg.admm_max_iterations;
    opt.tolerance = cfg.admm_tolerance;
    opt.check_every = 50;
    const conic::Monitor monitor = [&](const conic::State& st) {
      const Matrix rho2 = into_ball(st.z[1], r, eps);
      Matrix z = linalg::hermitize(st.z[0]);
      for (const MatrixProjection& p : fam.cone_projections()) p(z);
      const double t = linalg::real_trace(z);
      if (t > 1e-300) offer(rho2, detail::floored(fam.repair(z / t).matrix(), fam, mu));
      const Matrix y = st.penalty * st.duals[0][0];
      for (double sign : {1.0, -1.0}) {
        const Matrix w = linalg::psd_part(Matrix(Matrix::Identity(d, d) + sign * y));
        lower = std::max(lower, detail::robustness_witness_bound(w, r, fam, cfg, eps));
      }
      return upper - lower <= target;
    };
    const conic::State st = conic::solve(prob, {upper * best_sigma, best_rho}, opt, monitor);
    monitor(st);
    iterations = st.iterations;
  }

  out.method = "conic_admm";
  out.iterations = iterations;
  out.value = std::log2(upper);
  out.lower_bound = std::min(out.value, std::log2(lower));
  out.gap_bound = out.value - out.lower_bound;
  out.converged = upper - lower <= target;
  out.smoothed_state = DensityMatrix::trusted(fam.shape(), best_rho);
  out.closest_free = DensityMatrix::trusted(fam.shape(), best_sigma);
  if (upper > 1.0 + 1e-12) {
    Matrix pi = linalg::psd_part(upper * best_sigma - best_rho);
    pi /= linalg::real_trace(pi);
    out.noise_state = DensityMatrix::trusted(fam.shape(), pi);
  }
  return out;
}

}  // namespace rescomp
