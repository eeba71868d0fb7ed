#include "rescomp/hypothesis/hypothesis.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "rescomp/core/error.hpp"
#include "rescomp/core/linalg.hpp"
#include "rescomp/core/ops.hpp"
#include "rescomp/core/serialize.hpp"
#include "rescomp/measures/measures.hpp"
#include "rescomp/solvers/lp.hpp"

namespace rescomp {

namespace {

struct NpSolution {
  Matrix test;
  double value = 0.0;  // tr(ωA)
  double lower = 0.0;  // certified lower bound on the optimum
  std::string method;
};

// Fractional knapsack on commuting diagonals: accept outcomes in order of
// increasing ω_i/ρ_i until the acceptance reaches 1 - eps.
NpSolution np_diagonal(const RealVector& rho, const RealVector& omega, double eps) {
  const Index d = rho.size();
  RealVector a = RealVector::Zero(d);
  if (eps == 0.0) {
    for (Index i = 0; i < d; ++i) a(i) = rho(i) > 1e-15 ? 1.0 : 0.0;
  } else {
    std::vector<Index> order;
    for (Index i = 0; i < d; ++i)
      if (rho(i) > 0.0) order.push_back(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](Index x, Index y) { return omega(x) * rho(y) < omega(y) * rho(x); });
    double need = 1.0 - eps;
    for (Index i : order) {
      if (need <= 0.0) break;
      const double take = std::min(1.0, need / rho(i));
      a(i) = take;
      need -= take * rho(i);
    }
  }
  NpSolution s;
  s.test = a.cast<Complex>().asDiagonal();
  s.value = std::max(0.0, omega.dot(a));
  s.lower = s.value;
  s.method = "neyman_pearson_diagonal";
  return s;
}

// Pure ρ = ψψ† and full-rank ω: the optimum without A ⪯ I is
// (1-eps)/⟨ψ|ω⁻¹|ψ⟩ at A = q vv†, v ∝ ω⁻¹ψ (Cauchy–Schwarz). It is the
// answer whenever q ≤ 1.
bool np_pure(const Matrix& rho, const Matrix& omega, double eps, NpSolution& out) {
  if (eps <= 0.0) return false;
  const linalg::Eigh er = linalg::eigh(rho);
  const Index d = rho.rows();
  if (er.values(d - 1) < 1.0 - 1e-12) return false;
  const Vector psi = er.vectors.col(d - 1);
  Eigen::LDLT<Matrix> ldlt(omega);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
  if (ldlt.vectorD().real().minCoeff() <= 1e-13) return false;
  const Vector x = ldlt.solve(psi);
  const double quad = psi.dot(x).real();  // ⟨ψ|ω⁻¹|ψ⟩
  if (!(quad > 0.0)) return false;
  const Vector v = x / x.norm();
  const double overlap = std::norm(psi.dot(v));
  const double q = (1.0 - eps) / overlap;
  if (q > 1.0) return false;
  out.test = q * (v * v.adjoint());
  out.value = (1.0 - eps) / quad;
  out.lower = out.value;
  out.method = "neyman_pearson_pure";
  return true;
}

// General case: maximize the concave dual f(μ) = μ(1-eps) - tr(μρ - ω)₊ by
// bisection on its supergradient (1-eps) - tr(ρ P₊(μρ-ω)), which is monotone.
// At the crossing, A mixes the positive projectors on both sides so that
// tr(ρA) = 1 - eps exactly.
NpSolution np_general(const Matrix& rho, const Matrix& omega, double eps) {
  const Index d = rho.rows();
  NpSolution s;
  s.method = "neyman_pearson";
  if (eps == 0.0) {
    const linalg::Eigh e = linalg::eigh(rho);
    Matrix p = Matrix::Zero(d, d);
    for (Index i = 0; i < d; ++i)
      if (e.values(i) > 1e-12) p += e.vectors.col(i) * e.vectors.col(i).adjoint();
    s.test = p;
    s.value = linalg::trace_inner(omega, p);
    s.lower = s.value;
    return s;
  }
  struct Side {
    double mu = 0.0;
    Matrix p;
    double accept = 0.0;  // tr(ρP)
    double cost = 0.0;    // tr(ωP)
    double dual = 0.0;    // f(μ)
  };
  auto side = [&](double mu) {
    Side sd;
    sd.mu = mu;
    const linalg::Eigh e = linalg::eigh(linalg::hermitize(mu * rho - omega));
    const double thr = 1e-14 * (1.0 + mu);
    sd.p = Matrix::Zero(d, d);
    double plus = 0.0;
    for (Index i = 0; i < d; ++i) {
      if (e.values(i) > thr) {
        sd.p += e.vectors.col(i) * e.vectors.col(i).adjoint();
        plus += e.values(i);
      }
    }
    sd.accept = linalg::trace_inner(rho, sd.p);
    sd.cost = linalg::trace_inner(omega, sd.p);
    sd.dual = mu * (1.0 - eps) - plus;
    return sd;
  };
  const double need = 1.0 - eps;
  Side lo = side(0.0);
  Side hi = side(1.0);
  for (int k = 0; k < 200 && hi.accept < need; ++k) {
    lo = hi;
    hi = side(hi.mu * 2.0);
  }
  double best_lower = std::max({0.0, lo.dual, hi.dual});
  auto combine = [&]() {
    const double q = hi.accept > lo.accept ? std::clamp((need - lo.accept) / (hi.accept - lo.accept), 0.0, 1.0) : 1.0;
    s.test = q * hi.p + (1.0 - q) * lo.p;
    s.value = q * hi.cost + (1.0 - q) * lo.cost;
  };
  combine();
  for (int k = 0; k < 200; ++k) {
    if (s.value - best_lower <= 1e-13 + 1e-10 * s.value) break;
    if (hi.mu - lo.mu <= 1e-15 * hi.mu) break;
    const double mid = (lo.mu > 0.0 && hi.mu > 4.0 * lo.mu) ? std::sqrt(lo.mu * hi.mu) : 0.5 * (lo.mu + hi.mu);
    Side m = side(mid);
    best_lower = std::max(best_lower, m.dual);
    (m.accept >= need ? hi : lo) = std::move(m);
    combine();
  }
  s.lower = std::min(best_lower, s.value);
  return s;
}

NpSolution neyman_pearson(const Matrix& rho, const Matrix& omega, double eps) {
  if (linalg::is_diagonal(rho) && linalg::is_diagonal(omega))
    return np_diagonal(rho.diagonal().real(), omega.diagonal().real(), eps);
  NpSolution s;
  if (np_pure(rho, omega, eps, s)) return s;
  return np_general(rho, omega, eps);
}

Matrix clip_test(const Matrix& a) {
  const Matrix h = linalg::hermitize(a);
  if (linalg::is_diagonal(h)) {
    RealVector v = h.diagonal().real().cwiseMax(0.0).cwiseMin(1.0);
    return v.cast<Complex>().asDiagonal();
  }
  return linalg::project_unit_box(h);
}

void check_eps(double eps, bool allow_zero) {
  const bool ok = allow_zero ? (eps >= 0.0 && eps < 1.0) : (eps > 0.0 && eps < 1.0);
  if (!ok)
    throw Error(ErrorCode::InvalidArgument,
                std::string("eps must lie in ") + (allow_zero ? "[0, 1)" : "(0, 1)") + ", got " + std::to_string(eps));
}

}  // namespace

HypothesisTestResult beta_singleton(const DensityMatrix& rho_n, const DensityMatrix& omega_n, double eps) {
  require_same_shape(rho_n.shape(), omega_n.shape(), "beta_singleton");
  check_eps(eps, true);
  const NpSolution s = neyman_pearson(rho_n.matrix(), omega_n.matrix(), eps);
  const Matrix a = clip_test(s.test);
  return HypothesisTestResult{
      .beta = s.value,
      .lower_bound = s.lower,
      .test = TestOperator(rho_n.shape(), a),
      .type1 = 1.0 - linalg::trace_inner(rho_n.matrix(), a),
      .worst_free = omega_n,
      .iterations = 1,
      .converged = true,
      .sampled_extreme_points = false,
      .method = s.method,
  };
}

HypothesisTestResult beta_n(const DensityMatrix& rho, const FreeSetFamily& fam, int n, double eps,
                            const SolverConfig& cfg) {
  cfg.validate();
  require_same_shape(rho.shape(), fam.shape(), "beta_n");
  check_eps(eps, false);
  check_copy_dimension(rho.shape(), n);
  const DensityMatrix rho_n = tensor_power(rho, n);
  const FreeSetFamily fam_n = fam.n_copy(n);
  if (fam_n.is_singleton()) return beta_singleton(rho_n, fam_n.reference_state(), eps);

  // Double oracle over the extreme points: the restricted game between the
  // tests found so far and all extreme points gives an upper bound (its row
  // mixture is a feasible test); the Neyman–Pearson response to its column
  // mixture ω̄ ∈ F gives a lower bound.
  // Incoherent extreme points are the basis states; they are never
  // materialized.
  const bool basis_points = fam_n.kind() == FamilyKind::Incoherent;
  const std::vector<DensityMatrix> points =
      basis_points ? std::vector<DensityMatrix>{} : fam_n.extreme_points(cfg.extreme_point_samples, cfg.seed);
  const Index k = basis_points ? rho_n.dim() : static_cast<Index>(points.size());
  auto row_of = [&](const Matrix& a) {
    RealVector r(k);
    if (basis_points) {
      r = a.diagonal().real();
    } else {
      for (Index j = 0; j < k; ++j) r(j) = linalg::trace_inner(points[static_cast<std::size_t>(j)].matrix(), a);
    }
    return r;
  };
  const Index d = rho_n.dim();
  auto mixture = [&](const RealVector& w) {
    if (basis_points) return Matrix(w.cast<Complex>().asDiagonal());
    Matrix m = Matrix::Zero(d, d);
    for (Index j = 0; j < k; ++j)
      if (w(j) > 0.0) m += w(j) * points[static_cast<std::size_t>(j)].matrix();
    return m;
  };
  // Queries are stabilized towards the best lower-bound point found so far;
  // plain cutting planes oscillate badly near the optimum.
  constexpr double kStability = 0.8;
  RealVector query = RealVector::Constant(k, 1.0 / static_cast<double>(k));
  RealVector best_query = query;

  std::vector<Matrix> tests;
  RealMatrix rows(0, k);
  double lower = -1.0;
  double upper = std::numeric_limits<double>::infinity();
  Matrix best_test;
  int it = 0;
  bool converged = false;
  const int max_rounds = std::max(1, std::min(cfg.max_iterations, 1000));
  for (it = 1; it <= max_rounds; ++it) {
    const NpSolution np = neyman_pearson(rho_n.matrix(), mixture(query), eps);
    if (np.lower > lower) {
      lower = np.lower;
      best_query = query;
    }
    tests.push_back(np.test);
    rows.conservativeResize(rows.rows() + 1, Eigen::NoChange);
    rows.row(rows.rows() - 1) = row_of(np.test).transpose();
    // The response itself is a feasible test, and near the optimum it is the
    // best one available.
    const double direct = rows.row(rows.rows() - 1).maxCoeff();
    if (direct < upper) {
      upper = direct;
      best_test = np.test;
    }

    RealVector p, q;
    if (rows.rows() == 1) {
      p = RealVector::Ones(1);
      q = RealVector::Zero(k);
      Index arg = 0;
      rows.row(0).maxCoeff(&arg);
      q(arg) = 1.0;
    } else {
      const lp::GameSolution g = lp::solve_matrix_game(rows);
      p = g.row_strategy;
      q = g.column_strategy;
    }
    const double u = (rows.transpose() * p).maxCoeff();
    if (u < upper) {
      upper = u;
      best_test = Matrix::Zero(d, d);
      for (std::size_t j = 0; j < tests.size(); ++j) best_test += p(static_cast<Index>(j)) * tests[j];
    }
    if (upper - lower <= cfg.tolerance * std::max(upper, 1e-6)) {
      converged = true;
      break;
    }
    query = kStability * best_query + (1.0 - kStability) * q;
  }
  lower = std::max(lower, 0.0);
  Index worst = 0;
  const Matrix a = clip_test(best_test);
  const RealVector final_row = row_of(a);
  final_row.maxCoeff(&worst);
  return HypothesisTestResult{
      .beta = final_row(worst),
      .lower_bound = std::min(lower, final_row(worst)),
      .test = TestOperator(rho_n.shape(), a),
      .type1 = 1.0 - linalg::trace_inner(rho_n.matrix(), a),
      .worst_free = basis_points ? DensityMatrix::basis(rho_n.shape(), worst) : points[static_cast<std::size_t>(worst)],
      .iterations = std::min(it, max_rounds),
      .converged = converged,
      .sampled_extreme_points = !fam_n.extreme_points_exact(),
      .method = "double_oracle",
  };
}

std::string ExponentSequence::to_csv() const {
  std::ostringstream os;
  os << "n,beta,exponent,e_infinity_estimate\n";
  for (const ExponentEntry& e : entries)
    os << e.n << ',' << io::format_number(e.beta) << ',' << io::format_number(e.exponent) << ','
       << io::format_number(e.e_infinity_estimate) << '\n';
  return os.str();
}

ExponentSequence stein_exponent_sequence(const DensityMatrix& rho, const FreeSetFamily& fam, int n_max, double eps,
                                         const SolverConfig& cfg, int regularization_n_max) {
  check_copy_dimension(rho.shape(), n_max);
  check_eps(eps, false);
  int reg = regularization_n_max;
  if (reg <= 0) {
    const bool closed = fam.kind() == FamilyKind::Incoherent || fam.is_singleton();
    reg = 1;
    while (reg < n_max && (closed || std::pow(static_cast<double>(rho.dim()), reg + 1) <= 64.0)) ++reg;
  }
  reg = std::min(reg, n_max);
  const RegularizedEstimate est = regularized_estimate(rho, fam, reg, cfg);

  ExponentSequence seq;
  seq.eps = eps;
  seq.e_infinity_estimate = est.estimate;
  seq.e_infinity_n = reg;
  seq.converged = est.converged;
  for (int n = 1; n <= n_max; ++n) {
    const HypothesisTestResult b = beta_n(rho, fam, n, eps, cfg);
    seq.lower_bound_estimate = seq.lower_bound_estimate || b.sampled_extreme_points;
    seq.converged = seq.converged && b.converged;
    ExponentEntry e;
    e.n = n;
    e.beta = b.beta;
    e.exponent = b.beta > 0.0 ? -std::log2(b.beta) / n : std::numeric_limits<double>::infinity();
    e.e_infinity_estimate = n <= reg ? est.per_copy[static_cast<std::size_t>(n - 1)] : est.estimate;
    seq.entries.push_back(e);
  }
  return seq;
}

}  // namespace rescomp
