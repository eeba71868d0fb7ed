#include "rescomp/solvers/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "rescomp/core/error.hpp"

namespace rescomp::lp {

namespace {

constexpr double kPivotTol = 1e-11;

struct Tableau {
  RealMatrix t;            // (m+1) x (cols+1); last row = reduced costs, last column = rhs
  std::vector<Index> basis;
  Index m;
  Index cols;

  void pivot(Index row, Index col) {
    t.row(row) /= t(row, col);
    for (Index i = 0; i <= m; ++i) {
      if (i == row) continue;
      const double f = t(i, col);
      if (f != 0.0) t.row(i) -= f * t.row(row);
    }
    basis[static_cast<std::size_t>(row)] = col;
  }

  // Dantzig pricing, switching to Bland's rule after a run of degenerate
  // pivots so that cycling cannot persist. `allowed` limits the entering
  // columns.
  Status run(Index allowed, int& budget) {
    int degenerate = 0;
    while (true) {
      const bool bland = degenerate > 50;
      Index enter = -1;
      double most = -kPivotTol;
      for (Index j = 0; j < allowed; ++j) {
        if (t(m, j) < most) {
          enter = j;
          if (bland) break;
          most = t(m, j);
        }
      }
      if (enter < 0) return Status::Optimal;
      Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < m; ++i) {
        if (t(i, enter) > kPivotTol) {
          const double ratio = t(i, cols) / t(i, enter);
          if (ratio < best - 1e-14 ||
              (std::abs(ratio - best) <= 1e-14 && leave >= 0 &&
               basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return Status::Unbounded;
      if (--budget < 0) return Status::IterationLimit;
      degenerate = best <= 1e-12 ? degenerate + 1 : 0;
      pivot(leave, enter);
    }
  }
};

}  // namespace

Result solve_standard(const RealMatrix& a, const RealVector& b, const RealVector& c, int max_pivots) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (b.size() != m || c.size() != n) {
    throw Error(ErrorCode::ShapeMismatch, "lp: inconsistent problem dimensions");
  }
  Tableau tab;
  tab.m = m;
  tab.cols = n + m;
  tab.t = RealMatrix::Zero(m + 1, n + m + 1);
  tab.basis.resize(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    const double sign = b(i) < 0.0 ? -1.0 : 1.0;
    tab.t.row(i).head(n) = sign * a.row(i);
    tab.t(i, n + i) = 1.0;
    tab.t(i, n + m) = sign * b(i);
    tab.basis[static_cast<std::size_t>(i)] = n + i;
  }
  for (Index i = 0; i < m; ++i) {
    tab.t.row(m).head(n) -= tab.t.row(i).head(n);
    tab.t(m, n + m) -= tab.t(i, n + m);
  }

  Result result;
  int budget = max_pivots;
  Status s = tab.run(n + m, budget);
  if (s == Status::IterationLimit) {
    result.status = s;
    return result;
  }
  const double phase1 = -tab.t(m, n + m);
  const double scale = 1.0 + b.cwiseAbs().sum();
  if (phase1 > 1e-9 * scale) {
    result.status = Status::Infeasible;
    return result;
  }
  // Drive remaining artificials out of the basis where possible.
  for (Index i = 0; i < m; ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] < n) continue;
    for (Index j = 0; j < n; ++j) {
      if (std::abs(tab.t(i, j)) > 1e-9) {
        tab.pivot(i, j);
        break;
      }
    }
  }
  // Phase 2 cost row.
  tab.t.row(m).setZero();
  tab.t.row(m).head(n) = c.transpose();
  for (Index i = 0; i < m; ++i) {
    const Index bi = tab.basis[static_cast<std::size_t>(i)];
    const double cb = bi < n ? c(bi) : 0.0;
    if (cb != 0.0) tab.t.row(m) -= cb * tab.t.row(i);
  }
  s = tab.run(n, budget);
  result.status = s;
  result.x = RealVector::Zero(n);
  for (Index i = 0; i < m; ++i) {
    const Index bi = tab.basis[static_cast<std::size_t>(i)];
    if (bi < n) result.x(bi) = std::max(0.0, tab.t(i, n + m));
  }
  result.objective = c.dot(result.x);
  return result;
}

namespace {

// min t s.t. Mᵀx ≤ t·1, Σx = 1, x ≥ 0 (payoff shifted positive so t ≥ 0 is harmless).
RealVector minimizer_strategy(const RealMatrix& pay) {
  const Index m = pay.rows();
  const Index p = pay.cols();
  const Index nv = m + 1 + p;
  RealMatrix a = RealMatrix::Zero(p + 1, nv);
  RealVector b = RealVector::Zero(p + 1);
  RealVector c = RealVector::Zero(nv);
  for (Index k = 0; k < p; ++k) {
    a.block(k, 0, 1, m) = pay.col(k).transpose();
    a(k, m) = -1.0;
    a(k, m + 1 + k) = 1.0;
  }
  a.block(p, 0, 1, m).setOnes();
  b(p) = 1.0;
  c(m) = 1.0;
  const Result r = solve_standard(a, b, c);
  if (r.status != Status::Optimal) {
    throw Error(ErrorCode::SolverFailure, "matrix game: simplex did not reach optimality (status " + std::to_string(static_cast<int>(r.status)) + ", " + std::to_string(m) + "x" + std::to_string(p) + ")");
  }
  RealVector x = r.x.head(m);
  const double s = x.sum();
  return s > 0.0 ? RealVector(x / s) : RealVector(RealVector::Constant(m, 1.0 / static_cast<double>(m)));
}

}  // namespace

GameSolution solve_matrix_game(const RealMatrix& payoff) {
  if (payoff.rows() == 0 || payoff.cols() == 0) {
    throw Error(ErrorCode::InvalidArgument, "matrix game: empty payoff");
  }
  const double shift = 1.0 - payoff.minCoeff();
  const RealMatrix pos = payoff.array() + shift;
  GameSolution g;
  g.row_strategy = minimizer_strategy(pos);
  // Column player: max u s.t. M y ≥ u·1, i.e. the minimizer problem of -Mᵀ.
  const RealMatrix neg = -pos.transpose();
  const double shift2 = 1.0 - neg.minCoeff();
  g.column_strategy = minimizer_strategy(neg.array() + shift2);
  g.value = g.row_strategy.dot(payoff * g.column_strategy);
  return g;
}

}  // namespace rescomp::lp
