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

struct DistanceCertificate {
  double upper = std::numeric_limits<double>::infinity();
  double lower = 0.0;
  Matrix sigma;
  Matrix witness;

  // T(ρ,F) ≥ tr(Wρ) - max_F tr(Wσ) for any 0 ⪯ W ⪯ I.
  void offer_witness(const Matrix& w_in, const Matrix& rho, const FreeSetFamily& fam, const SolverConfig& cfg) {
    const Matrix w = linalg::project_unit_box(w_in);
    const double l = linalg::trace_inner(w, rho) - fam.support_function(w, cfg);
    if (l > lower) {
      lower = l;
      witness = w;
    }
  }
  void offer_state(const Matrix& rho, const DensityMatrix& sigma_free, const FreeSetFamily& fam,
                   const SolverConfig& cfg) {
    const Matrix diff = linalg::hermitize(rho - sigma_free.matrix());
    const linalg::Eigh e = linalg::eigh(diff);
    const double t = 0.5 * e.values.cwiseAbs().sum();
    if (t < upper) {
      upper = t;
      sigma = sigma_free.matrix();
    }
    Matrix p = Matrix::Zero(diff.rows(), diff.cols());
    for (Index i = 0; i < e.values.size(); ++i)
      if (e.values(i) > 0.0) p += e.vectors.col(i) * e.vectors.col(i).adjoint();
    offer_witness(p, rho, fam, cfg);
  }
  double gap() const { return upper - lower; }
};

}  // namespace

MeasureResult trace_distance_of_resource(const DensityMatrix& rho, const FreeSetFamily& fam,
                                         const SolverConfig& cfg) {
  cfg.validate();
  require_same_shape(rho.shape(), fam.shape(), "trace_distance_of_resource");
  const Matrix r = rho.matrix();
  DistanceCertificate cert;
  cert.offer_state(r, fam.repair(fam.project(r)), fam, cfg);
  cert.offer_state(r, fam.repair(r), fam, cfg);
  const double target = cfg.certificate_tolerance;
  int iterations = 0;
  std::string method = fam.is_singleton() ? "closed_form" : "conic_admm";

  if (!fam.is_singleton() && cert.gap() > target) {
    // min tr P  s.t.  P ⪰ 0,  P + σ ⪰ ρ,  σ ∈ F.
    const Index d = fam.shape().total();
    const double h = std::sqrt(0.5);
    conic::Problem prob;
    prob.objective = {Matrix::Identity(d, d), Matrix::Zero(d, d)};
    prob.sets.push_back([r, h](conic::Blocks& b) {
      // Rotate to u = (P+σ)/√2, v = (P-σ)/√2; the constraint is u ⪰ ρ/√2.
      const Matrix u = h * (b[0] + b[1]);
      const Matrix v = h * (b[0] - b[1]);
      const Matrix base = h * r;
      const Matrix u2 = base + linalg::psd_part(u - base);
      b[0] = h * (u2 + v);
      b[1] = h * (u2 - v);
    });
    prob.sets.push_back([](conic::Blocks& b) { b[0] = linalg::psd_part(b[0]); });
    for (const MatrixProjection& p : fam.set_projections()) prob.sets.push_back([p](conic::Blocks& b) { p(b[1]); });

    conic::Options opt;
    opt.max_iterations = cfg.admm_max_iterations;
    opt.tolerance = cfg.admm_tolerance;
    opt.check_every = 50;
    const conic::Monitor monitor = [&](const conic::State& st) {
      cert.offer_state(r, fam.repair(st.z[1]), fam, cfg);
      const Matrix y = st.penalty * st.duals[0][0];
      for (double sign : {1.0, -1.0}) cert.offer_witness(Matrix(Matrix::Identity(d, d) + sign * y), r, fam, cfg);
      return cert.gap() <= target;
    };
    const Matrix p0 = linalg::psd_part(linalg::hermitize(r - cert.sigma));
    const conic::State st = conic::solve(prob, {p0, cert.sigma}, opt, monitor);
    monitor(st);
    iterations = st.iterations;
  }

  MeasureResult out;
  out.measure = "T";
  out.family = fam.name();
  out.method = method;
  out.iterations = iterations;
  out.value = cert.upper;
  out.lower_bound = std::min(cert.upper, std::max(0.0, cert.lower));
  out.gap_bound = out.value - out.lower_bound;
  out.converged = out.gap_bound <= target || fam.is_singleton();
  out.closest_free = DensityMatrix::trusted(fam.shape(), cert.sigma);
  if (cert.witness.size() > 0) out.witness = HermitianOperator(fam.shape(), linalg::hermitize(cert.witness));
  return out;
}

}  // namespace rescomp
