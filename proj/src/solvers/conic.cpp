#include "rescomp/solvers/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rescomp/core/error.hpp"

namespace rescomp::conic {

double squared_norm(const Blocks& b) {
  double s = 0.0;
  for (const Matrix& m : b) s += m.squaredNorm();
  return s;
}

double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i].adjoint() * b[i]).trace().real();
  return s;
}

State solve(const Problem& problem, const Blocks& start, const Options& options, const Monitor& monitor) {
  const std::size_t k = problem.sets.size();
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "conic: no constraint sets");
  if (problem.objective.size() != start.size()) {
    throw Error(ErrorCode::ShapeMismatch, "conic: objective and start have different block counts");
  }
  State st;
  st.z = start;
  st.penalty = options.penalty;
  Blocks zero = start;
  for (Matrix& m : zero) m.setZero();
  st.duals.assign(k, zero);
  std::vector<Blocks> x(k, start);
  const std::size_t nb = start.size();

  for (int it = 1; it <= options.max_iterations; ++it) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < nb; ++j) {
        x[i][j] = st.z[j] - st.duals[i][j];
        if (i == 0) x[i][j] -= problem.objective[j] / st.penalty;
      }
      problem.sets[i](x[i]);
    }
    Blocks z_prev = st.z;
    for (std::size_t j = 0; j < nb; ++j) {
      st.z[j].setZero();
      for (std::size_t i = 0; i < k; ++i) st.z[j] += x[i][j] + st.duals[i][j];
      st.z[j] /= static_cast<double>(k);
    }
    double rp = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < nb; ++j) {
        const Matrix r = x[i][j] - st.z[j];
        st.duals[i][j] += r;
        rp += r.squaredNorm();
      }
    }
    double rd = 0.0;
    for (std::size_t j = 0; j < nb; ++j) rd += (st.z[j] - z_prev[j]).squaredNorm();
    st.primal_residual = std::sqrt(rp / static_cast<double>(k));
    st.dual_residual = st.penalty * std::sqrt(rd * static_cast<double>(k));
    st.iterations = it;

    const double scale = 1.0 + std::sqrt(squared_norm(st.z));
    if (st.primal_residual < options.tolerance * scale && st.dual_residual < options.tolerance * scale) {
      st.converged = true;
      break;
    }
    if (it % 25 == 0) {
      // Residual balancing; the scaled duals rescale inversely.
      double factor = 1.0;
      if (st.primal_residual > 10.0 * st.dual_residual) factor = 2.0;
      else if (st.dual_residual > 10.0 * st.primal_residual) factor = 0.5;
      if (factor != 1.0) {
        st.penalty *= factor;
        for (Blocks& u : st.duals) for (Matrix& m : u) m /= factor;
      }
    }
    if (monitor && options.check_every > 0 && it % options.check_every == 0) {
      if (monitor(st)) {
        st.converged = true;
        break;
      }
    }
  }
  return st;
}

FeasibilityResult dykstra(const std::vector<Projection>& sets, const Blocks& start, int max_iterations, double margin) {
  FeasibilityResult out;
  const std::size_t k = sets.size();
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "dykstra: no sets");
  Blocks x = start;
  Blocks zero = start;
  for (Matrix& m : zero) m.setZero();
  std::vector<Blocks> incr(k, zero);
  double checkpoint = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iterations; ++it) {
    double moved = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      Blocks y = x;
      for (std::size_t j = 0; j < y.size(); ++j) y[j] += incr[i][j];
      Blocks p = y;
      sets[i](p);
      for (std::size_t j = 0; j < y.size(); ++j) {
        incr[i][j] = y[j] - p[j];
        moved = std::max(moved, (p[j] - x[j]).norm());
      }
      x = std::move(p);
    }
    // Distance of the current point to every set.
    double worst = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      Blocks p = x;
      sets[i](p);
      for (std::size_t j = 0; j < p.size(); ++j) worst = std::max(worst, (p[j] - x[j]).norm());
    }
    out.iterations = it;
    out.residual = worst;
    if (worst <= margin) {
      out.feasible = true;
      break;
    }
    if (moved < 1e-15) break;
    // An empty intersection shows up as a residual that stops shrinking.
    if (it % 1000 == 0) {
      if (worst > 0.99 * checkpoint) break;
      checkpoint = worst;
    }
  }
  out.point = x;
  return out;
}

}  // namespace rescomp::conic
