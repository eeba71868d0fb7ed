#include "rescomp/core/state.hpp"

#include <cmath>
#include <sstream>

#include "rescomp/core/error.hpp"
#include "rescomp/core/linalg.hpp"

namespace rescomp {

namespace {

void require_square(const SubsystemShape& shape, const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() != shape.total())
    throw Error(ErrorCode::ShapeMismatch, "matrix side " + std::to_string(m.rows()) + " does not match shape " +
                                              shape.to_string());
}

}  // namespace

std::optional<std::string> density_matrix_violation(const Matrix& m) {
  std::ostringstream os;
  if (m.rows() != m.cols()) return std::string("not square");
  if (double e = linalg::hermiticity_error(m); e > kHermitianTol) {
    os << "not Hermitian (deviation " << e << ")";
    return os.str();
  }
  if (double t = std::abs(m.trace() - Complex(1.0)); t > kTraceTol) {
    os << "trace deviates from 1 by " << t;
    return os.str();
  }
  if (double lmin = linalg::min_eigenvalue(m); lmin < -kPsdTol) {
    os << "negative eigenvalue " << lmin;
    return os.str();
  }
  return std::nullopt;
}

void require_same_shape(const SubsystemShape& a, const SubsystemShape& b, const char* where) {
  if (!(a == b))
    throw Error(ErrorCode::ShapeMismatch, std::string(where) + ": shapes " + a.to_string() + " and " + b.to_string());
}

HermitianOperator::HermitianOperator(SubsystemShape shape, Matrix matrix)
    : shape_(std::move(shape)), matrix_(std::move(matrix)) {
  require_square(shape_, matrix_);
  if (linalg::hermiticity_error(matrix_) > kHermitianTol)
    throw Error(ErrorCode::InvariantViolation, "operator is not Hermitian");
  matrix_ = linalg::hermitize(matrix_);
}

DensityMatrix::DensityMatrix(SubsystemShape shape, Matrix matrix)
    : shape_(std::move(shape)), matrix_(std::move(matrix)) {
  require_square(shape_, matrix_);
  if (auto v = density_matrix_violation(matrix_)) throw Error(ErrorCode::InvariantViolation, "density matrix " + *v);
  matrix_ = linalg::hermitize(matrix_);
}

DensityMatrix::DensityMatrix(SubsystemShape shape, Matrix matrix, TrustedTag)
    : shape_(std::move(shape)), matrix_(linalg::hermitize(matrix)) {
  require_square(shape_, matrix_);
}

DensityMatrix DensityMatrix::trusted(SubsystemShape shape, Matrix matrix) {
  return DensityMatrix(std::move(shape), std::move(matrix), TrustedTag{});
}

DensityMatrix DensityMatrix::maximally_mixed(const SubsystemShape& shape) {
  const Index d = shape.total();
  return trusted(shape, Matrix::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::pure(const SubsystemShape& shape, const Vector& psi) {
  if (psi.size() != shape.total()) throw Error(ErrorCode::ShapeMismatch, "state vector length does not match shape");
  const double norm = psi.norm();
  if (norm == 0.0) throw Error(ErrorCode::InvalidArgument, "zero state vector");
  Vector v = psi / norm;
  return trusted(shape, v * v.adjoint());
}

DensityMatrix DensityMatrix::basis(const SubsystemShape& shape, Index i) {
  if (i < 0 || i >= shape.total()) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  Matrix m = Matrix::Zero(shape.total(), shape.total());
  m(i, i) = 1.0;
  return trusted(shape, std::move(m));
}

DensityMatrix DensityMatrix::maximally_coherent(int d) {
  SubsystemShape shape{d};
  return pure(shape, Vector::Ones(d));
}

DensityMatrix DensityMatrix::bell_phi_plus() {
  Vector psi = Vector::Zero(4);
  psi(0) = 1.0;
  psi(3) = 1.0;
  return pure(SubsystemShape{2, 2}, psi);
}

DensityMatrix DensityMatrix::diagonal(const SubsystemShape& shape, const RealVector& p) {
  if (p.size() != shape.total()) throw Error(ErrorCode::ShapeMismatch, "probability vector length does not match shape");
  Matrix m = p.cast<Complex>().asDiagonal();
  return DensityMatrix(shape, std::move(m));
}

RealVector DensityMatrix::spectrum() const { return linalg::eigenvalues(matrix_); }

double DensityMatrix::purity() const { return linalg::trace_inner(matrix_, matrix_); }

DensityMatrix DensityMatrix::mix(double t, const DensityMatrix& a, const DensityMatrix& b) {
  require_same_shape(a.shape(), b.shape(), "mix");
  if (t < 0.0 || t > 1.0) throw Error(ErrorCode::InvalidArgument, "mixing weight outside [0, 1]");
  return trusted(a.shape(), t * a.matrix() + (1.0 - t) * b.matrix());
}

TestOperator::TestOperator(SubsystemShape shape, Matrix matrix)
    : shape_(std::move(shape)), matrix_(std::move(matrix)) {
  require_square(shape_, matrix_);
  if (linalg::hermiticity_error(matrix_) > kHermitianTol)
    throw Error(ErrorCode::InvariantViolation, "test operator is not Hermitian");
  matrix_ = linalg::hermitize(matrix_);
  RealVector ev = linalg::eigenvalues(matrix_);
  if (ev.minCoeff() < -kPsdTol || ev.maxCoeff() > 1.0 + kPsdTol)
    throw Error(ErrorCode::InvariantViolation, "test operator eigenvalues outside [0, 1]");
}

}  // namespace rescomp
