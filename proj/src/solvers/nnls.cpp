#include "rescomp/solvers/nnls.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <vector>

#include "rescomp/core/error.hpp"

namespace rescomp {

namespace {

RealVector solve_on(const RealMatrix& a, const RealVector& b, const std::vector<Index>& passive) {
  RealMatrix sub(a.rows(), static_cast<Index>(passive.size()));
  for (std::size_t k = 0; k < passive.size(); ++k) sub.col(static_cast<Index>(k)) = a.col(passive[k]);
  return sub.colPivHouseholderQr().solve(b);
}

}  // namespace

RealVector nnls(const RealMatrix& a, const RealVector& b, int max_iterations) {
  if (a.rows() != b.size()) throw Error(ErrorCode::ShapeMismatch, "nnls: dimension mismatch");
  const Index n = a.cols();
  if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n + 30);
  RealVector x = RealVector::Zero(n);
  std::vector<bool> in_p(static_cast<std::size_t>(n), false);
  const double tol = 1e-12 * (1.0 + a.cwiseAbs().maxCoeff()) * (1.0 + b.cwiseAbs().maxCoeff());

  for (int outer = 0; outer < max_iterations; ++outer) {
    RealVector w = a.transpose() * (b - a * x);
    Index best = -1;
    double best_w = tol;
    for (Index j = 0; j < n; ++j) {
      if (!in_p[static_cast<std::size_t>(j)] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    in_p[static_cast<std::size_t>(best)] = true;

    for (int inner = 0; inner <= n; ++inner) {
      std::vector<Index> passive;
      for (Index j = 0; j < n; ++j) if (in_p[static_cast<std::size_t>(j)]) passive.push_back(j);
      const RealVector s = solve_on(a, b, passive);
      bool all_pos = true;
      for (Index k = 0; k < s.size(); ++k) if (s(k) <= 0.0) all_pos = false;
      if (all_pos) {
        x.setZero();
        for (std::size_t k = 0; k < passive.size(); ++k) x(passive[k]) = s(static_cast<Index>(k));
        break;
      }
      double alpha = 1.0;
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const double sk = s(static_cast<Index>(k));
        if (sk <= 0.0) {
          const double xk = x(passive[k]);
          alpha = std::min(alpha, xk / (xk - sk));
        }
      }
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const Index j = passive[k];
        x(j) += alpha * (s(static_cast<Index>(k)) - x(j));
        if (x(j) <= 1e-15) {
          x(j) = 0.0;
          in_p[static_cast<std::size_t>(j)] = false;
        }
      }
    }
  }
  return x;
}

RealVector simplex_least_squares(const RealMatrix& a, const RealVector& b) {
  const double weight = 1e4 * (1.0 + a.cwiseAbs().maxCoeff());
  RealMatrix aug(a.rows() + 1, a.cols());
  aug.topRows(a.rows()) = a;
  aug.row(a.rows()).setConstant(weight);
  RealVector rhs(b.size() + 1);
  rhs.head(b.size()) = b;
  rhs(b.size()) = weight;
  RealVector x = nnls(aug, rhs);
  const double s = x.sum();
  if (s <= 0.0) return RealVector::Constant(a.cols(), 1.0 / static_cast<double>(a.cols()));
  return x / s;
}

}  // namespace rescomp
