#include "rescomp/core/random.hpp"

#include <cmath>

#include "rescomp/core/error.hpp"
#include "rescomp/kernels/kernels.hpp"

namespace rescomp {

namespace {

Matrix ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  // Fill column by column so the draw order is fixed.
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

// First `cols` columns of a Haar-distributed unitary of side rows.
Matrix haar_isometry(Index rows, Index cols, Rng& rng) {
  Matrix g = ginibre(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (Index j = 0; j < cols; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

}  // namespace

Vector haar_random_vector(Index dim, Rng& rng) {
  Matrix g = ginibre(dim, 1, rng);
  return g.col(0) / g.col(0).norm();
}

Matrix haar_random_unitary(Index dim, Rng& rng) { return haar_isometry(dim, dim, rng); }

DensityMatrix random_density_matrix(const SubsystemShape& shape, Index rank, Rng& rng) {
  const Index d = shape.total();
  if (rank < 1 || rank > d)
    throw Error(ErrorCode::InvalidRank, "rank " + std::to_string(rank) + " not in [1, " + std::to_string(d) + "]");
  // Pure state on C^d ⊗ C^rank, reshaped to a d × rank amplitude matrix; the
  // reduced state on C^d is psi psi†.
  Vector v = haar_random_vector(d * rank, rng);
  Matrix psi = Eigen::Map<Matrix>(v.data(), rank, d).transpose();
  return DensityMatrix::trusted(shape, psi * psi.adjoint());
}

DensityMatrix random_density_matrix(const SubsystemShape& shape, Index rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_density_matrix(shape, rank, rng);
}

QuantumChannel random_channel(const SubsystemShape& input, const SubsystemShape& output, int kraus_count, Rng& rng) {
  if (kraus_count < 1) throw Error(ErrorCode::InvalidArgument, "kraus_count must be >= 1");
  const Index din = input.total(), dout = output.total();
  if (dout * kraus_count < din)
    throw Error(ErrorCode::InvalidArgument, "output dimension times Kraus count must be at least the input dimension");
  Matrix v = haar_isometry(dout * kraus_count, din, rng);
  std::vector<Matrix> ops;
  ops.reserve(static_cast<std::size_t>(kraus_count));
  for (int k = 0; k < kraus_count; ++k) ops.push_back(v.middleRows(k * dout, dout));
  return QuantumChannel::from_kraus(input, output, std::move(ops));
}

QuantumChannel random_channel(const SubsystemShape& input, const SubsystemShape& output, int kraus_count,
                              std::uint64_t seed) {
  Rng rng(seed);
  return random_channel(input, output, kraus_count, rng);
}

}  // namespace rescomp
