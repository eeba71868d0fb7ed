#include <cmath>

#include "rescomp/core/error.hpp"
#include "rescomp/core/ops.hpp"
#include "rescomp/core/serialize.hpp"
#include "rescomp/measures/measures.hpp"

namespace rescomp {

nlohmann::json MeasureResult::to_json(bool include_matrices) const {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : "-inf";
  };
  nlohmann::json j{{"measure", measure},     {"family", family},         {"method", method},
                   {"value", num(value)},    {"lower_bound", num(lower_bound)},
                   {"gap_bound", num(gap_bound)}, {"iterations", iterations}, {"converged", converged}};
  if (measure == "E") j["floor_correction"] = floor_correction;
  if (include_matrices) {
    nlohmann::json opt = nlohmann::json::object();
    if (closest_free) opt["closest_free"] = io::to_json(*closest_free);
    if (noise_state) opt["noise_state"] = io::to_json(*noise_state);
    if (smoothed_state) opt["smoothed_state"] = io::to_json(*smoothed_state);
    if (witness) opt["witness"] = io::to_json(*witness);
    j["optimizer"] = std::move(opt);
  }
  return j;
}

const MeasureResult& require_converged(const MeasureResult& r) {
  if (!r.converged)
    throw Error(ErrorCode::NonConvergence, r.measure + " on " + r.family + ": certified gap " +
                                               std::to_string(r.gap_bound) + " after " +
                                               std::to_string(r.iterations) + " iterations");
  return r;
}

void check_copy_dimension(const SubsystemShape& shape, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "copy count must be at least 1");
  const double total = std::pow(static_cast<double>(shape.total()), n);
  if (total > static_cast<double>(kMaxDimension))
    throw Error(ErrorCode::DimensionCap, "dimension " + std::to_string(shape.total()) + "^" + std::to_string(n) +
                                             " exceeds the cap " + std::to_string(kMaxDimension));
}

RegularizedEstimate regularized_estimate(const DensityMatrix& rho, const FreeSetFamily& fam, int n_max,
                                         const SolverConfig& cfg) {
  check_copy_dimension(rho.shape(), n_max);
  RegularizedEstimate out;
  for (int n = 1; n <= n_max; ++n) {
    MeasureResult r = relative_entropy_of_resource(tensor_power(rho, n), fam.n_copy(n), cfg);
    out.n.push_back(n);
    out.per_copy.push_back(r.value / n);
    out.converged = out.converged && r.converged;
    out.results.push_back(std::move(r));
  }
  out.estimate = out.per_copy.back();
  out.gap_bound = out.results.back().gap_bound / n_max;
  return out;
}

}  // namespace rescomp
