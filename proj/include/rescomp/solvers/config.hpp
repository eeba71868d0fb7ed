#pragma once

#include <cstdint>
#include <string>

namespace rescomp {

enum class RelativeEntropyMethod { Auto, FrankWolfe, ClosedForm };
enum class RobustnessMethod { Auto, ConicAdmm, BisectionDykstra };

/// Knobs shared by every solver. Defaults are the documented constants.
struct SolverConfig {
  int max_iterations = 3000;        // Frank–Wolfe / outer iterations
  double tolerance = 1e-8;          // target certified gap
  double bisection_tolerance = 1e-8;
  double mixing_floor = 1e-9;       // μ, weight of the interior state mixed into iterates
  std::uint64_t seed = 1;

  int admm_max_iterations = 20000;
  double admm_tolerance = 1e-10;
  int dykstra_max_iterations = 100000;
  double feasibility_margin = 1e-8;
  double membership_tol = 1e-7;
  double certificate_tolerance = 1e-7;  // target certified gap for the conic measures

  bool line_search = true;          // exact line search on the Frank–Wolfe segment
  int extreme_point_samples = 64;   // for families without exact extreme points
  RelativeEntropyMethod relative_entropy_method = RelativeEntropyMethod::Auto;
  RobustnessMethod robustness_method = RobustnessMethod::Auto;

  /// Throws InvalidArgument unless tolerance > 0 and μ ∈ (0, 1e-3].
  void validate() const;
};

std::string to_string(RelativeEntropyMethod m);
std::string to_string(RobustnessMethod m);

}  // namespace rescomp
