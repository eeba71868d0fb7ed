#include "rescomp/core/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rescomp::linalg {

Eigh eigh(const Matrix& h) {
  Eigh out;
  if (h.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(h.real());
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
  }
  return out;
}

RealVector eigenvalues(const Matrix& h) {
  if (h.imag().cwiseAbs().maxCoeff() == 0.0) {
    return Eigen::SelfAdjointEigenSolver<RealMatrix>(h.real(), Eigen::EigenvaluesOnly).eigenvalues();
  }
  return Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

Matrix hermitize(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

double hermiticity_error(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Matrix apply_function(const Eigh& e, const std::function<double(double)>& f) {
  RealVector fv = e.values.unaryExpr(f);
  return e.vectors * fv.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

Matrix psd_part(const Eigh& e) {
  RealVector v = e.values.cwiseMax(0.0);
  return hermitize(e.vectors * v.cast<Complex>().asDiagonal() * e.vectors.adjoint());
}

Matrix psd_part(const Matrix& h) { return psd_part(eigh(hermitize(h))); }

Matrix project_spectraplex(const Matrix& h, double total) {
  Eigh e = eigh(hermitize(h));
  RealVector v = project_simplex(e.values, total);
  return hermitize(e.vectors * v.cast<Complex>().asDiagonal() * e.vectors.adjoint());
}

Matrix project_unit_box(const Matrix& h) {
  Eigh e = eigh(hermitize(h));
  RealVector v = e.values.cwiseMax(0.0).cwiseMin(1.0);
  return hermitize(e.vectors * v.cast<Complex>().asDiagonal() * e.vectors.adjoint());
}

double trace_norm(const Matrix& h) { return eigenvalues(hermitize(h)).cwiseAbs().sum(); }

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double min_eigenvalue(const Matrix& h) { return eigenvalues(hermitize(h)).minCoeff(); }
double max_eigenvalue(const Matrix& h) { return eigenvalues(hermitize(h)).maxCoeff(); }
double real_trace(const Matrix& m) { return m.trace().real(); }

double trace_inner(const Matrix& a, const Matrix& b) {
  // tr(ab) = Σ_ij a_ij b_ji; for Hermitian b, b_ji = conj(b_ij).
  return (a.array() * b.conjugate().array()).sum().real();
}

RealVector project_simplex(const RealVector& v, double total) {
  const Index n = v.size();
  if (total <= 0.0) return RealVector::Zero(n);
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Index k = 0; k < n; ++k) {
    cumulative += u[static_cast<std::size_t>(k)];
    const double t = (cumulative - total) / static_cast<double>(k + 1);
    if (u[static_cast<std::size_t>(k)] - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

RealVector project_l1_ball(const RealVector& v, double radius) {
  if (v.cwiseAbs().sum() <= radius) return v;
  RealVector mag = project_simplex(v.cwiseAbs(), radius);
  RealVector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out(i) = v(i) < 0 ? -mag(i) : mag(i);
  return out;
}

Matrix frechet_derivative(const Eigh& a, const Matrix& direction,
                          const std::function<double(double)>& f,
                          const std::function<double(double)>& df) {
  const Index n = a.values.size();
  const RealVector& lam = a.values;
  RealVector flam = lam.unaryExpr(f);
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  Matrix inner = a.vectors.adjoint() * direction * a.vectors;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double gap = lam(i) - lam(j);
      double g;
      if (std::abs(gap) > 1e-12 * scale) {
        g = (flam(i) - flam(j)) / gap;
      } else {
        g = df(0.5 * (lam(i) + lam(j)));
      }
      inner(i, j) *= g;
    }
  }
  return hermitize(a.vectors * inner * a.vectors.adjoint());
}

Matrix inverse_sqrt(const Eigh& e, double tol) {
  RealVector v(e.values.size());
  for (Index i = 0; i < v.size(); ++i) v(i) = e.values(i) > tol ? 1.0 / std::sqrt(e.values(i)) : 0.0;
  return e.vectors * v.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

double max_relative_eigenvalue(const Matrix& rho, const Matrix& sigma, double support_tol) {
  Eigh es = eigh(hermitize(sigma));
  // Weight of ρ outside supp σ.
  double outside = 0.0;
  for (Index i = 0; i < es.values.size(); ++i) {
    if (es.values(i) <= support_tol) {
      outside += (es.vectors.col(i).adjoint() * rho * es.vectors.col(i))(0, 0).real();
    }
  }
  if (outside > support_tol) return std::numeric_limits<double>::infinity();
  Matrix s = inverse_sqrt(es, support_tol);
  return max_eigenvalue(s * rho * s);
}

RealVector hvec(const Matrix& h) {
  const Index n = h.rows();
  RealVector v(n * n);
  Index k = 0;
  for (Index i = 0; i < n; ++i) v(k++) = h(i, i).real();
  const double r2 = std::sqrt(2.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      v(k++) = r2 * h(i, j).real();
      v(k++) = r2 * h(i, j).imag();
    }
  }
  return v;
}

Matrix from_hvec(const RealVector& v, Index n) {
  Matrix h(n, n);
  Index k = 0;
  for (Index i = 0; i < n; ++i) h(i, i) = v(k++);
  const double r2 = std::sqrt(2.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double re = v(k++) / r2;
      const double im = v(k++) / r2;
      h(i, j) = Complex(re, im);
      h(j, i) = Complex(re, -im);
    }
  }
  return h;
}

bool is_diagonal(const Matrix& m, double tol) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (i != j && std::abs(m(i, j)) > tol) return false;
  return true;
}

}  // namespace rescomp::linalg
