#include "rescomp/core/entropy.hpp"

#include <cmath>
#include <limits>

#include "rescomp/core/error.hpp"
#include "rescomp/core/linalg.hpp"

namespace rescomp {

double neg_entropy_of_spectrum(const RealVector& ev) {
  double acc = 0.0;
  for (Index i = 0; i < ev.size(); ++i) {
    const double l = ev(i);
    if (l < -kPsdTol) throw Error(ErrorCode::InvariantViolation, "negative eigenvalue in entropy");
    if (l > 0.0) acc += l * std::log2(l);
  }
  return acc;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return std::max(0.0, -neg_entropy_of_spectrum(rho.spectrum()));
}

double relative_entropy(const Matrix& rho, const Matrix& sigma, double support_tol) {
  if (rho.rows() != sigma.rows()) throw Error(ErrorCode::ShapeMismatch, "relative entropy of different dimensions");
  const double rho_term = neg_entropy_of_spectrum(linalg::eigenvalues(linalg::hermitize(rho)));
  const linalg::Eigh es = linalg::eigh(linalg::hermitize(sigma));
  double cross = 0.0;
  double outside = 0.0;
  for (Index i = 0; i < es.values.size(); ++i) {
    const double w = (es.vectors.col(i).adjoint() * rho * es.vectors.col(i))(0, 0).real();
    if (es.values(i) <= support_tol) {
      outside += w;
    } else {
      cross += w * std::log2(es.values(i));
    }
  }
  if (outside > support_tol) return std::numeric_limits<double>::infinity();
  return std::max(0.0, rho_term - cross);
}

double quantum_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma, double support_tol) {
  require_same_shape(rho.shape(), sigma.shape(), "quantum_relative_entropy");
  return relative_entropy(rho.matrix(), sigma.matrix(), support_tol);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  require_same_shape(a.shape(), b.shape(), "trace_distance");
  return 0.5 * linalg::trace_norm(a.matrix() - b.matrix());
}

}  // namespace rescomp
