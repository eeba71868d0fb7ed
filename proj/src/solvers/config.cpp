#include "rescomp/solvers/config.hpp"

#include "rescomp/core/error.hpp"

namespace rescomp {

void SolverConfig::validate() const {
  if (!(tolerance > 0.0) || !(bisection_tolerance > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "solver tolerances must be positive");
  }
  if (!(mixing_floor > 0.0) || mixing_floor > 1e-3) {
    throw Error(ErrorCode::InvalidArgument, "mixing floor must lie in (0, 1e-3]");
  }
  if (max_iterations <= 0 || admm_max_iterations <= 0 || dykstra_max_iterations <= 0) {
    throw Error(ErrorCode::InvalidArgument, "iteration limits must be positive");
  }
  if (extreme_point_samples <= 0) {
    throw Error(ErrorCode::InvalidArgument, "extreme_point_samples must be positive");
  }
}

std::string to_string(RelativeEntropyMethod m) {
  switch (m) {
    case RelativeEntropyMethod::Auto: return "auto";
    case RelativeEntropyMethod::FrankWolfe: return "frank_wolfe";
    case RelativeEntropyMethod::ClosedForm: return "closed_form";
  }
  return "unknown";
}

std::string to_string(RobustnessMethod m) {
  switch (m) {
    case RobustnessMethod::Auto: return "auto";
    case RobustnessMethod::ConicAdmm: return "conic_admm";
    case RobustnessMethod::BisectionDykstra: return "bisection_dykstra";
  }
  return "unknown";
}

}  // namespace rescomp
