#pragma once

#include "rescomp/core/types.hpp"

namespace rescomp::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Result {
  Status status = Status::Infeasible;
  RealVector x;
  double objective = 0.0;
};

/// Dense two-phase simplex (Dantzig pricing, Bland fallback on degeneracy) for
///   minimize cᵀx  subject to  A x = b, x ≥ 0.
/// Intended for the small programs that arise here (a few hundred rows).
Result solve_standard(const RealMatrix& a, const RealVector& b, const RealVector& c, int max_pivots = 200000);

/// Mixed equilibrium of the zero-sum game with payoff M (rows minimize,
/// columns maximize): value = min_x max_y xᵀ M y.
struct GameSolution {
  double value = 0.0;
  RealVector row_strategy;
  RealVector column_strategy;
};
GameSolution solve_matrix_game(const RealMatrix& payoff);

}  // namespace rescomp::lp
