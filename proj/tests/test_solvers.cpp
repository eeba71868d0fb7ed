#include <doctest.h>

#include <limits>
#include <random>

#include <Eigen/Dense>

#include "rescomp/core/linalg.hpp"
#include "rescomp/solvers/conic.hpp"
#include "rescomp/solvers/lp.hpp"
#include "rescomp/solvers/nnls.hpp"

using namespace rescomp;

namespace {

// Vertex enumeration: every basis of size m, keeping feasible basic solutions.
double brute_force_lp(const RealMatrix& a, const RealVector& b, const RealVector& c) {
  const Index m = a.rows();
  const Index n = a.cols();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(static_cast<std::size_t>(n), 0);
  std::fill(pick.end() - m, pick.end(), 1);
  do {
    std::vector<Index> cols;
    for (Index j = 0; j < n; ++j)
      if (pick[static_cast<std::size_t>(j)]) cols.push_back(j);
    RealMatrix basis(m, m);
    for (Index k = 0; k < m; ++k) basis.col(k) = a.col(cols[static_cast<std::size_t>(k)]);
    Eigen::FullPivLU<RealMatrix> lu(basis);
    if (lu.rank() < m) continue;
    const RealVector xb = lu.solve(b);
    if (xb.minCoeff() < -1e-10) continue;
    double obj = 0.0;
    for (Index k = 0; k < m; ++k) obj += c(cols[static_cast<std::size_t>(k)]) * xb(k);
    best = std::min(best, obj);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

// Active-set enumeration for NNLS: least squares on each support, keeping
// nonnegative solutions.
double brute_force_nnls(const RealMatrix& a, const RealVector& b) {
  const Index n = a.cols();
  double best = b.squaredNorm();
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<Index> cols;
    for (Index j = 0; j < n; ++j)
      if (mask & (1 << j)) cols.push_back(j);
    RealMatrix sub(a.rows(), static_cast<Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Index>(k)) = a.col(cols[k]);
    const RealVector x = sub.colPivHouseholderQr().solve(b);
    if (x.minCoeff() < -1e-12) continue;
    best = std::min(best, (sub * x - b).squaredNorm());
  }
  return best;
}

}  // namespace

TEST_CASE("simplex agrees with vertex enumeration") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 40; ++t) {
    const Index m = 2 + t % 2;
    const Index n = 5;
    RealMatrix a(m, n);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j) a(i, j) = u(rng);
    a.row(m - 1).setOnes();  // Σx = 1 keeps every instance bounded
    RealVector x0(n);
    for (Index j = 0; j < n; ++j) x0(j) = 0.5 + 0.5 * u(rng);
    x0 /= x0.sum();
    const RealVector b = a * x0;  // feasible by construction
    RealVector c(n);
    for (Index j = 0; j < n; ++j) c(j) = u(rng);
    const lp::Result r = lp::solve_standard(a, b, c);
    REQUIRE(r.status == lp::Status::Optimal);
    CHECK(r.objective == doctest::Approx(brute_force_lp(a, b, c)).epsilon(1e-9));
    CHECK((a * r.x - b).norm() < 1e-9);
    CHECK(r.x.minCoeff() >= 0.0);
  }
}

TEST_CASE("simplex detects infeasibility") {
  RealMatrix a(2, 2);
  a << 1, 1, 1, 1;
  RealVector b(2);
  b << 1, 2;
  CHECK(lp::solve_standard(a, b, RealVector::Zero(2)).status == lp::Status::Infeasible);
}

TEST_CASE("matrix games") {
  // The row player minimizes.
  // Matching pennies: value 0, uniform strategies.
  RealMatrix mp(2, 2);
  mp << 1, -1, -1, 1;
  const lp::GameSolution g = lp::solve_matrix_game(mp);
  CHECK(g.value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(g.row_strategy(0) == doctest::Approx(0.5));
  // 2×2 without saddle point: value (ad - bc)/(a + d - b - c).
  RealMatrix p(2, 2);
  p << 3, 1, 0, 2;
  CHECK(lp::solve_matrix_game(p).value == doctest::Approx((3.0 * 2 - 1.0 * 0) / (3.0 + 2 - 1 - 0)));
  // Saddle point: row 0 dominates, and its worst column is 5.
  RealMatrix s(2, 3);
  s << 4, 2, 5, 6, 3, 7;
  CHECK(lp::solve_matrix_game(s).value == doctest::Approx(5.0));
  CHECK_THROWS(lp::solve_matrix_game(RealMatrix(0, 0)));
}

TEST_CASE("nnls agrees with active-set enumeration") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  for (int t = 0; t < 30; ++t) {
    RealMatrix a(6, 4);
    RealVector b(6);
    for (Index i = 0; i < 6; ++i) {
      b(i) = g(rng);
      for (Index j = 0; j < 4; ++j) a(i, j) = g(rng);
    }
    const RealVector x = nnls(a, b);
    CHECK(x.minCoeff() >= 0.0);
    CHECK((a * x - b).squaredNorm() == doctest::Approx(brute_force_nnls(a, b)).epsilon(1e-9));
  }
  RealMatrix a = RealMatrix::Identity(3, 3);
  RealVector b(3);
  b << 0.2, 0.5, 0.3;
  const RealVector x = simplex_least_squares(a, b);
  CHECK((x - b).norm() < 1e-6);
}

TEST_CASE("dykstra and admm on a spectraplex") {
  const Matrix h = linalg::hermitize(Matrix::Random(3, 3));
  const conic::Projection psd = [](conic::Blocks& x) { x[0] = linalg::psd_part(x[0]); };
  const conic::Projection trace = [](conic::Blocks& x) {
    const double shift = (x[0].trace().real() - 1.0) / static_cast<double>(x[0].rows());
    x[0] -= shift * Matrix::Identity(x[0].rows(), x[0].cols());
  };
  const conic::FeasibilityResult f = conic::dykstra({psd, trace}, {h}, 100000, 1e-12);
  CHECK(f.feasible);
  // Dykstra converges to the projection of the start onto the intersection.
  CHECK((f.point[0] - linalg::project_spectraplex(h, 1.0)).norm() < 1e-6);

  // min tr(C X) over the spectraplex is λ_min(C).
  conic::Problem p;
  p.objective = {h};
  p.sets = {[](conic::Blocks& x) { x[0] = linalg::project_spectraplex(x[0], 1.0); }};
  conic::Options opt;
  const conic::State s = conic::solve(p, {Matrix::Identity(3, 3) / 3.0}, opt);
  CHECK(linalg::real_trace(h * s.z[0]) == doctest::Approx(linalg::min_eigenvalue(h)).epsilon(1e-6));
}
