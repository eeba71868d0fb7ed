#pragma once

#include "rescomp/core/types.hpp"

namespace rescomp {

/// Lawson–Hanson active-set solution of min ‖A x - b‖₂ subject to x ≥ 0.
RealVector nnls(const RealMatrix& a, const RealVector& b, int max_iterations = 0);

/// min ‖A x - b‖₂ over the probability simplex (x ≥ 0, Σx = 1). The sum
/// constraint enters as a heavily weighted extra row; the result is
/// renormalized onto the simplex.
RealVector simplex_least_squares(const RealMatrix& a, const RealVector& b);

}  // namespace rescomp
