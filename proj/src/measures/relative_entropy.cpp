#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "certificates.hpp"
#include "rescomp/core/entropy.hpp"
#include "rescomp/core/error.hpp"
#include "rescomp/core/linalg.hpp"
#include "rescomp/core/ops.hpp"
#include "rescomp/measures/measures.hpp"

namespace rescomp {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// S(ρ‖σ_μ) and its gradient in σ, with σ_μ = (1-μ)σ + μτ.
class RelativeEntropyObjective {
 public:
  RelativeEntropyObjective(const Matrix& rho, const FreeSetFamily& fam, double mu)
      : rho_(rho), fam_(fam), mu_(mu), neg_entropy_(-von_neumann_entropy(DensityMatrix::trusted(fam.shape(), rho))) {}

  struct Point {
    linalg::Eigh eig;
    double value;
  };

  Point at(const Matrix& sigma) const {
    Point p{linalg::eigh(linalg::hermitize(detail::floored(sigma, fam_, mu_))), 0.0};
    const Matrix r = p.eig.vectors.adjoint() * rho_ * p.eig.vectors;
    double cross = 0.0;
    for (Index i = 0; i < r.rows(); ++i) {
      const double w = r(i, i).real();
      if (w == 0.0) continue;
      cross += w * std::log2(std::max(p.eig.values(i), 1e-300));
    }
    p.value = std::max(0.0, neg_entropy_ - cross);
    return p;
  }

  Matrix gradient(const Point& p) const {
    Matrix g = linalg::frechet_derivative(
        p.eig, rho_, [](double x) { return std::log(std::max(x, 1e-300)); }, [](double x) { return 1.0 / x; });
    return linalg::hermitize(g * (-(1.0 - mu_) / kLn2));
  }

 private:
  const Matrix& rho_;
  const FreeSetFamily& fam_;
  double mu_;
  double neg_entropy_;
};

constexpr int kPptFrankWolfeSteps = 40;
constexpr int kCertifyEvery = 10;
// Inexact projections are fine here: repair() restores exact membership.
constexpr int kPolishProjectionRounds = 500;
// The polish gives up once the certified gap fails to halve over this many
// certification windows.
constexpr int kGapWindows = 10;

// Accelerated projected gradient (momentum with function-value restart and
// backtracking) from (sigma, p). Every kCertifyEvery steps the oracle gap
// certifies a lower bound as in the Frank–Wolfe loop. Near the optimum the
// value stops resolving descent (f - f* falls under rounding well before the
// gap does), so a stalled run continues with fixed steps, which need no value
// comparisons, until the lower bound stops rising. Returns the steps taken.
int projected_gradient(const RelativeEntropyObjective& obj, const FreeSetFamily& fam, const SolverConfig& cfg,
                       int budget, Matrix& sigma, RelativeEntropyObjective::Point& p, double& best_lower,
                       MeasureResult& r) {
  auto certify = [&](const Matrix& g) {
    const LinearMinimization lmo = fam.linear_minimization(g, cfg);
    best_lower = std::max(best_lower, p.value - (linalg::trace_inner(g, sigma) - lmo.lower_bound) + r.floor_correction);
    return p.value - best_lower <= cfg.tolerance;
  };
  double eta = 1e-2;
  double accepted_eta = eta;
  double theta = 1.0;
  Matrix prev = sigma;
  double window_value = p.value;
  double window_lower = best_lower;
  int k = 0;
  bool fixed = false;
  int flat_windows = 0;
  double reference_gap = 0.0;
  int reference_step = 0;
  for (; k < budget; ++k) {
    if (k % kCertifyEvery == 0) {
      if (certify(obj.gradient(p))) {
        r.converged = true;
        return k;
      }
      const double gap = p.value - best_lower;
      if (k == 0 || gap <= 0.5 * reference_gap) {
        reference_gap = gap;
        reference_step = k;
      } else if (k - reference_step >= kGapWindows * kCertifyEvery) {
        return k;
      }
      const bool lower_flat = best_lower - window_lower <= 1e-3 * gap;
      if (k > 0 && !fixed && lower_flat && window_value - p.value <= 1e-13 * (1.0 + p.value)) {
        fixed = true;
        eta = accepted_eta;
      } else if (fixed) {
        flat_windows = lower_flat ? flat_windows + 1 : 0;
        if (flat_windows >= 5) return k;
      }
      window_value = p.value;
      window_lower = best_lower;
    }
    if (fixed) {
      const Matrix cand = fam.repair(fam.project(sigma - eta * obj.gradient(p), kPolishProjectionRounds)).matrix();
      const RelativeEntropyObjective::Point q = obj.at(cand);
      if (q.value <= p.value + 1e-14 * (1.0 + p.value)) {
        sigma = cand;
        p = q;
      }
      continue;
    }
    const double next_theta = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    const Matrix y = sigma + ((theta - 1.0) / next_theta) * (sigma - prev);
    const RelativeEntropyObjective::Point py = obj.at(y);
    const Matrix g = obj.gradient(py);
    bool accepted = false;
    for (int tries = 0; tries < 50; ++tries) {
      const Matrix cand = fam.repair(fam.project(y - eta * g, kPolishProjectionRounds)).matrix();
      const Matrix step = cand - y;
      const RelativeEntropyObjective::Point q = obj.at(cand);
      if (q.value <= py.value + linalg::trace_inner(g, step) + step.squaredNorm() / (2.0 * eta) + 1e-15) {
        accepted_eta = eta;
        prev = sigma;
        if (q.value > p.value) {
          theta = 1.0;  // restart: drop the momentum, keep the iterate
        } else {
          sigma = cand;
          p = q;
          theta = next_theta;
        }
        eta *= 1.5;
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) {
      fixed = true;
      eta = accepted_eta;
    }
  }
  r.converged = certify(obj.gradient(p));
  return k;
}

// ------------------------------------------------------------ barrier Newton

// PPT sets up to this dimension use the log-barrier method below after the
// Frank–Wolfe warm start; larger ones fall back to projected gradient.
constexpr Index kBarrierMaxDim = 16;

// Orthonormal basis of the traceless Hermitian d×d matrices.
std::vector<Matrix> traceless_hermitian_basis(Index d) {
  std::vector<Matrix> b;
  const double r = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      Matrix x = Matrix::Zero(d, d);
      x(i, j) = x(j, i) = r;
      b.push_back(x);
      Matrix y = Matrix::Zero(d, d);
      y(i, j) = Complex(0.0, r);
      y(j, i) = Complex(0.0, -r);
      b.push_back(y);
    }
  }
  for (Index l = 1; l < d; ++l) {
    Matrix z = Matrix::Zero(d, d);
    const double c = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    for (Index m = 0; m < l; ++m) z(m, m) = c;
    z(l, l) = -static_cast<double>(l) * c;
    b.push_back(z);
  }
  return b;
}

// First and second divided differences of ln.
double ln_dd1(double a, double b) {
  if (a == b) return 1.0 / a;
  return std::log1p((a - b) / b) / (a - b);
}

double ln_dd2(double x, double y, double z) {
  if (x > y) std::swap(x, y);
  if (y > z) std::swap(y, z);
  if (x > y) std::swap(x, y);
  const double m = (x + y + z) / 3.0;
  if (z - x <= 1e-4 * m) return -0.5 / (m * m);
  return (ln_dd1(x, y) - ln_dd1(y, z)) / (x - z);
}

// ln det m by Cholesky, or nullopt when m is not positive definite.
std::optional<double> log_det(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) return std::nullopt;
  double s = 0.0;
  for (Index i = 0; i < m.rows(); ++i) {
    const double v = llt.matrixL()(i, i).real();
    if (!(v > 0.0)) return std::nullopt;
    s += 2.0 * std::log(v);
  }
  return s;
}

// Minimizes t·S(ρ‖σ) - ln det σ - ln det σ^Γ over tr σ = 1 by damped Newton
// for increasing t. Central points have a linearization gap of at most
// ν/t (ν = 2d), so unlike boundary iterates they certify through the same
// oracle gap as Frank–Wolfe. Returns the Newton steps taken.
int barrier_newton(const RelativeEntropyObjective& obj, const Matrix& rho, const FreeSetFamily& fam,
                   const SolverConfig& cfg, int budget, Matrix& sigma, RelativeEntropyObjective::Point& p,
                   double& best_lower, MeasureResult& r) {
  const Index d = rho.rows();
  const SubsystemShape& shape = fam.shape();
  const std::vector<int>& party = fam.party_a();
  const std::vector<Matrix> basis = traceless_hermitian_basis(d);
  const Index n = static_cast<Index>(basis.size());
  const double nu = 2.0 * static_cast<double>(d);
  const double mu = cfg.mixing_floor;
  const double chain = (1.0 - mu) * (1.0 - mu) / kLn2;
  auto pt = [&](const Matrix& x) { return partial_transpose(x, shape, party); };
  auto certify = [&](const Matrix& g) {
    const LinearMinimization lmo = fam.linear_minimization(g, cfg);
    best_lower = std::max(best_lower, p.value - (linalg::trace_inner(g, sigma) - lmo.lower_bound) + r.floor_correction);
    return p.value - best_lower <= cfg.tolerance;
  };
  auto barrier = [&](const Matrix& x) -> std::optional<double> {
    const auto a = log_det(x);
    if (!a) return std::nullopt;
    const auto b = log_det(pt(x));
    if (!b) return std::nullopt;
    return -*a - *b;
  };

  Matrix x = 0.9 * sigma + 0.1 * Matrix::Identity(d, d) / static_cast<double>(d);
  RelativeEntropyObjective::Point px = obj.at(x);
  double t = nu / std::max(p.value - best_lower, cfg.tolerance);
  const double t_final = 10.0 * nu / cfg.tolerance;
  constexpr int kStageSteps = 50;
  int steps = 0;
  int stage_steps = 0;
  while (steps < budget) {
    // Newton direction for t·f + φ at x.
    const Matrix xi = x.inverse();
    const Matrix xg = pt(x);
    const Matrix xgi = xg.inverse();
    const Matrix gf = obj.gradient(px);
    const Matrix grad = t * gf - xi - pt(xgi);
    const Matrix& u = px.eig.vectors;
    const RealVector& lam = px.eig.values;
    const Matrix rt = u.adjoint() * rho * u;
    std::vector<double> dd(static_cast<std::size_t>(d * d * d));
    for (Index i = 0; i < d; ++i)
      for (Index k = 0; k < d; ++k)
        for (Index j = 0; j < d; ++j) dd[static_cast<std::size_t>((i * d + k) * d + j)] = ln_dd2(lam(i), lam(k), lam(j));
    RealVector gv(n);
    RealMatrix h(n, n);
    for (Index l = 0; l < n; ++l) {
      gv(l) = linalg::trace_inner(basis[static_cast<std::size_t>(l)], grad);
      const Matrix& bl = basis[static_cast<std::size_t>(l)];
      const Matrix dt = u.adjoint() * bl * u;
      Matrix m(d, d);
      for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
          Complex acc = 0.0;
          for (Index k = 0; k < d; ++k)
            acc += dd[static_cast<std::size_t>((i * d + k) * d + j)] * (rt(i, k) * dt(k, j) + dt(i, k) * rt(k, j));
          m(i, j) = acc;
        }
      }
      const Matrix hl = (-t * chain) * (u * m * u.adjoint()) + xi * bl * xi + pt(xgi * pt(bl) * xgi);
      for (Index k = 0; k < n; ++k) h(k, l) = linalg::trace_inner(basis[static_cast<std::size_t>(k)], hl);
    }
    h = 0.5 * (h + h.transpose()).eval();
    const RealVector dx = -h.ldlt().solve(gv);
    const double decrement = -gv.dot(dx);
    ++steps;
    ++stage_steps;

    // A stage that has not centered in kStageSteps is as central as rounding allows.
    bool centered = !(decrement > 2e-10) || stage_steps >= kStageSteps;
    if (!centered) {
      Matrix step = Matrix::Zero(d, d);
      for (Index k = 0; k < n; ++k) step += dx(k) * basis[static_cast<std::size_t>(k)];
      const double f0 = t * px.value + *barrier(x);
      double s = 1.0;
      bool moved = false;
      for (; s > 1e-12; s *= 0.5) {
        const Matrix cand = linalg::hermitize(x + s * step);
        const auto phi = barrier(cand);
        if (!phi) continue;
        const RelativeEntropyObjective::Point pc = obj.at(cand);
        const double f1 = t * pc.value + *phi;
        if (f1 <= f0 - 0.25 * s * decrement || (decrement < 1e-6 && f1 <= f0 + 1e-12 * std::abs(f0))) {
          x = cand;
          px = pc;
          moved = true;
          break;
        }
      }
      centered = !moved;
    }
    if (centered) {
      sigma = x;
      p = px;
      if (t >= t_final || steps >= budget) {
        if (certify(obj.gradient(p))) {
          r.converged = true;
          return steps;
        }
        if (t >= 1e4 * t_final) return steps;
      }
      t *= 10.0;
      stage_steps = 0;
    }
  }
  sigma = x;
  p = px;
  r.converged = certify(obj.gradient(p));
  return steps;
}

MeasureResult closed_form(const DensityMatrix& rho, const FreeSetFamily& fam) {
  MeasureResult r;
  r.measure = "E";
  r.family = fam.name();
  r.method = "closed_form";
  if (fam.kind() == FamilyKind::Incoherent) {
    const DensityMatrix d = dephase(rho);
    r.value = std::max(0.0, von_neumann_entropy(d) - von_neumann_entropy(rho));
    r.closest_free = d;
  } else if (fam.is_singleton()) {
    r.value = quantum_relative_entropy(rho, fam.reference_state());
    r.closest_free = fam.reference_state();
  } else {
    throw Error(ErrorCode::InvalidArgument, "no closed form for the relative entropy of " + fam.name());
  }
  r.lower_bound = r.value;
  r.gap_bound = 0.0;
  return r;
}

MeasureResult frank_wolfe(const DensityMatrix& rho, const FreeSetFamily& fam, const SolverConfig& cfg) {
  const double mu = cfg.mixing_floor;
  RelativeEntropyObjective obj(rho.matrix(), fam, mu);

  // Start from the better of the reference state and ρ pushed into F.
  std::vector<Matrix> atoms;
  std::vector<double> weights;
  {
    const Matrix a = fam.reference_state().matrix();
    const Matrix b = fam.repair(rho.matrix()).matrix();
    atoms.push_back(obj.at(a).value <= obj.at(b).value ? a : b);
    weights.push_back(1.0);
  }
  Matrix sigma = atoms.front();

  MeasureResult r;
  r.measure = "E";
  r.family = fam.name();
  r.method = "frank_wolfe";
  r.floor_correction = std::log2(1.0 - mu);
  r.converged = false;
  double best_lower = 0.0;

  RelativeEntropyObjective::Point p = obj.at(sigma);
  // On curved sets (PPT) Frank–Wolfe crawls once it nears a face; hand the
  // iterate to projected gradient after this many steps.
  const int fw_budget = fam.kind() == FamilyKind::Ppt ? kPptFrankWolfeSteps : cfg.max_iterations;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    if (it >= fw_budget) {
      if (fam.shape().total() <= kBarrierMaxDim) {
        r.method = "frank_wolfe+barrier_newton";
        it += barrier_newton(obj, rho.matrix(), fam, cfg, cfg.max_iterations - it, sigma, p, best_lower, r);
      } else {
        r.method = "frank_wolfe+projected_gradient";
        it += projected_gradient(obj, fam, cfg, cfg.max_iterations - it, sigma, p, best_lower, r);
      }
      break;
    }
    // E ≥ 0, so a start at (numerically) zero needs no oracle call.
    if (p.value - best_lower <= cfg.tolerance) {
      r.converged = true;
      break;
    }
    const Matrix g = obj.gradient(p);
    const LinearMinimization lmo = fam.linear_minimization(g, cfg);
    const double gap = linalg::trace_inner(g, sigma) - lmo.lower_bound;
    best_lower = std::max(best_lower, p.value - gap + r.floor_correction);
    if (p.value - best_lower <= cfg.tolerance) {
      r.converged = true;
      break;
    }
    // Pairwise step: move weight from the worst active atom to the oracle point.
    std::size_t away = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      const double v = linalg::trace_inner(g, atoms[j]);
      if (v > worst) {
        worst = v;
        away = j;
      }
    }
    const Matrix dir = lmo.point.matrix() - atoms[away];
    if (dir.norm() < 1e-14) {
      r.converged = p.value - best_lower <= std::sqrt(cfg.tolerance);
      break;
    }
    const double gmax = weights[away];
    double step;
    if (cfg.line_search) {
      auto slope = [&](double t) { return linalg::trace_inner(obj.gradient(obj.at(sigma + t * dir)), dir); };
      if (slope(gmax) <= 0.0) {
        step = gmax;
      } else {
        double lo = 0.0, hi = gmax;
        for (int k = 0; k < 60 && hi - lo > 1e-13 * gmax; ++k) {
          const double mid = 0.5 * (lo + hi);
          (slope(mid) > 0.0 ? hi : lo) = mid;
        }
        step = 0.5 * (lo + hi);
      }
    } else {
      step = std::min(gmax, 2.0 / (it + 2.0));
    }
    weights[away] -= step;
    bool found = false;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if ((atoms[j] - lmo.point.matrix()).norm() < 1e-13) {
        weights[j] += step;
        found = true;
        break;
      }
    }
    if (!found) {
      atoms.push_back(lmo.point.matrix());
      weights.push_back(step);
    }
    for (std::size_t j = atoms.size(); j-- > 0;) {
      if (weights[j] <= 1e-15 && atoms.size() > 1) {
        atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(j));
        weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(j));
      }
    }
    sigma.setZero();
    double total = 0.0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      sigma += weights[j] * atoms[j];
      total += weights[j];
    }
    sigma /= total;
    p = obj.at(sigma);
  }
  r.iterations = it;
  r.value = p.value;
  r.lower_bound = std::min(best_lower, r.value);
  r.gap_bound = r.value - r.lower_bound;
  r.closest_free = DensityMatrix::trusted(fam.shape(), detail::floored(sigma, fam, mu));
  return r;
}

}  // namespace

MeasureResult relative_entropy_of_resource(const DensityMatrix& rho, const FreeSetFamily& fam,
                                           const SolverConfig& cfg) {
  cfg.validate();
  require_same_shape(rho.shape(), fam.shape(), "relative_entropy_of_resource");
  switch (cfg.relative_entropy_method) {
    case RelativeEntropyMethod::ClosedForm: return closed_form(rho, fam);
    case RelativeEntropyMethod::FrankWolfe: return frank_wolfe(rho, fam, cfg);
    case RelativeEntropyMethod::Auto:
      if (fam.kind() == FamilyKind::Incoherent || fam.is_singleton()) return closed_form(rho, fam);
      return frank_wolfe(rho, fam, cfg);
  }
  return frank_wolfe(rho, fam, cfg);
}

}  // namespace rescomp
