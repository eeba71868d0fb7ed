#pragma once

#include <functional>
#include <vector>

#include "rescomp/core/types.hpp"

namespace rescomp::conic {

/// A point of the product space: a tuple of Hermitian matrices.
using Blocks = std::vector<Matrix>;

/// In-place Frobenius projection onto one closed convex set of the product space.
using Projection = std::function<void(Blocks&)>;

/// minimize ⟨c, x⟩ subject to x ∈ S_1 ∩ ... ∩ S_k, each S_i given by its
/// exact projector. The objective is attached to the first set.
struct Problem {
  Blocks objective;
  std::vector<Projection> sets;
};

struct Options {
  int max_iterations = 20000;
  double tolerance = 1e-10;
  double penalty = 1.0;
  int check_every = 50;
};

struct State {
  Blocks z;                  // consensus point
  std::vector<Blocks> duals; // scaled duals u_i
  double penalty = 1.0;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
};

/// Called every check_every iterations; returning true stops the solve
/// (e.g. once a certified gap is small enough).
using Monitor = std::function<bool(const State&)>;

/// Consensus ADMM. Each iteration projects once onto every set. For the
/// first set, W = c + penalty·u_1 estimates the multiplier of its constraint.
State solve(const Problem& problem, const Blocks& start, const Options& options, const Monitor& monitor = {});

/// Dykstra's alternating projections for the feasibility of S_1 ∩ ... ∩ S_k.
struct FeasibilityResult {
  Blocks point;
  double residual = 0.0;  // max distance between consecutive projections
  int iterations = 0;
  bool feasible = false;
};
FeasibilityResult dykstra(const std::vector<Projection>& sets, const Blocks& start, int max_iterations, double margin);

double squared_norm(const Blocks& b);
double inner(const Blocks& a, const Blocks& b);

}  // namespace rescomp::conic
