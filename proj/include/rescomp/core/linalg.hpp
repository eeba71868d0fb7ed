#pragma once

#include <functional>

#include "rescomp/core/types.hpp"

namespace rescomp::linalg {

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending.
struct Eigh {
  RealVector values;
  Matrix vectors;
};

/// Hermitian eigendecomposition. Uses the real symmetric solver when the
/// imaginary part vanishes identically.
Eigh eigh(const Matrix& h);
RealVector eigenvalues(const Matrix& h);

Matrix hermitize(const Matrix& m);
double hermiticity_error(const Matrix& m);

/// U f(Λ) U† for a scalar function f applied to the spectrum.
Matrix apply_function(const Eigh& e, const std::function<double(double)>& f);

/// Frobenius projection onto the PSD cone.
Matrix psd_part(const Matrix& h);
Matrix psd_part(const Eigh& e);
/// Frobenius projection onto {X ⪰ 0, tr X = total}.
Matrix project_spectraplex(const Matrix& h, double total);
/// Frobenius projection onto {0 ⪯ X ⪯ I}.
Matrix project_unit_box(const Matrix& h);

double trace_norm(const Matrix& h);
double operator_norm(const Matrix& m);
double min_eigenvalue(const Matrix& h);
double max_eigenvalue(const Matrix& h);
double real_trace(const Matrix& m);
/// Re tr(a b) for Hermitian a, b.
double trace_inner(const Matrix& a, const Matrix& b);

/// Euclidean projection of v onto {x ≥ 0, Σ x = total}.
RealVector project_simplex(const RealVector& v, double total = 1.0);
/// Euclidean projection of v onto the ℓ1 ball of the given radius.
RealVector project_l1_ball(const RealVector& v, double radius);

/// Fréchet derivative of the matrix function f at A = U diag(λ) U†, applied
/// to the direction H: U (Γ ∘ (U† H U)) U† with the first divided differences
/// Γ_ij = (f(λ_i) - f(λ_j)) / (λ_i - λ_j), and Γ_ii = f'(λ_i).
Matrix frechet_derivative(const Eigh& a, const Matrix& direction,
                          const std::function<double(double)>& f,
                          const std::function<double(double)>& df);

/// λ_max(σ^{-1/2} ρ σ^{-1/2}) restricted to supp σ; +inf when ρ has weight
/// outside the support of σ (eigenvalues of σ below support_tol).
double max_relative_eigenvalue(const Matrix& rho, const Matrix& sigma, double support_tol = 1e-12);

/// Pseudo-inverse square root on the support (eigenvalues above tol).
Matrix inverse_sqrt(const Eigh& e, double tol = 1e-12);

/// Isometric real coordinates of a Hermitian matrix: diagonal entries, then
/// √2 Re and √2 Im of the strict upper triangle. ⟨hvec A, hvec B⟩ = tr(AB).
RealVector hvec(const Matrix& h);
Matrix from_hvec(const RealVector& v, Index dim);

bool is_diagonal(const Matrix& m, double tol = 0.0);

}  // namespace rescomp::linalg
