#include "certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rescomp/core/linalg.hpp"

namespace rescomp::detail {

Matrix floored(const Matrix& sigma, const FreeSetFamily& fam, double mu) {
  return (1.0 - mu) * sigma + mu * fam.reference_state().matrix();
}

Matrix top_eigen_witness(const Matrix& rho, const Matrix& sigma) {
  const linalg::Eigh es = linalg::eigh(linalg::hermitize(sigma));
  const Matrix s = linalg::inverse_sqrt(es, 1e-14);
  const linalg::Eigh em = linalg::eigh(linalg::hermitize(s * rho * s));
  const Index d = em.values.size();
  const double top = em.values(d - 1);
  const double cut = top - 1e-9 * std::max(1.0, std::abs(top));
  Matrix p = Matrix::Zero(d, d);
  for (Index i = d - 1; i >= 0 && em.values(i) >= cut; --i) p += em.vectors.col(i) * em.vectors.col(i).adjoint();
  return linalg::hermitize(s * p * s);
}

double robustness_witness_bound(const Matrix& w, const Matrix& rho, const FreeSetFamily& fam,
                                const SolverConfig& cfg, double eps) {
  const RealVector ev = linalg::eigenvalues(w);
  if (ev.maxCoeff() <= 0.0) return 1.0;
  const double h = fam.support_function(w, cfg);
  if (!(h > 0.0)) return 1.0;
  const double num = linalg::trace_inner(w, rho) - eps * (ev.maxCoeff() - ev.minCoeff());
  return std::max(1.0, num / h);
}

void RobustnessCertificate::offer_state(const Matrix& rho, const Matrix& sigma_free, const FreeSetFamily& fam,
                                        const SolverConfig& cfg) {
  const double u = linalg::max_relative_eigenvalue(rho, sigma_free, 1e-14);
  if (u < upper) {
    upper = u;
    sigma = sigma_free;
  }
  if (std::isfinite(u)) offer_witness(top_eigen_witness(rho, sigma_free), rho, fam, cfg);
}

void RobustnessCertificate::offer_witness(const Matrix& w, const Matrix& rho, const FreeSetFamily& fam,
                                          const SolverConfig& cfg) {
  const double l = robustness_witness_bound(w, rho, fam, cfg);
  if (l > lower) {
    lower = l;
    witness = w;
  }
}

}  // namespace rescomp::detail
