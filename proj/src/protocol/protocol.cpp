#include "rescomp/protocol/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rescomp/core/entropy.hpp"
#include "rescomp/core/error.hpp"
#include "rescomp/core/linalg.hpp"
#include "rescomp/core/ops.hpp"
#include "rescomp/core/serialize.hpp"
#include "rescomp/measures/measures.hpp"

namespace rescomp {

namespace {

bool closed_form_family(const FreeSetFamily& fam) {
  return fam.kind() == FamilyKind::Incoherent || fam.is_singleton();
}

// Largest k ≤ wanted with dim^k inside the budget for the family's solver.
int estimate_copies_for(const DensityMatrix& rho, const FreeSetFamily& fam, int wanted) {
  const double cap = closed_form_family(fam) ? 1024.0 : 64.0;
  int k = 1;
  while (k < wanted && std::pow(static_cast<double>(rho.dim()), k + 1) <= cap) ++k;
  return k;
}

template <class Fn>
void for_each_extreme_point(const FreeSetFamily& fam, const SolverConfig& cfg, Fn&& fn) {
  if (fam.kind() == FamilyKind::Incoherent) {
    const Index d = fam.shape().total();
    for (Index i = 0; i < d; ++i) fn(DensityMatrix::basis(fam.shape(), i));
    return;
  }
  for (const DensityMatrix& p : fam.extreme_points(cfg.extreme_point_samples, cfg.seed)) fn(p);
}

}  // namespace

double eps_schedule(int n, const ProtocolOptions& opts) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "eps_schedule: n must be positive");
  return opts.eps_prefactor / std::sqrt(static_cast<double>(n));
}

int output_copies(int n, double rate) {
  return static_cast<int>(std::ceil(static_cast<double>(n) * rate - 0.5));
}

RateEstimates estimate_rates(const DensityMatrix& rho, const DensityMatrix& sigma, const FreeSetFamily& fam_source,
                             const FreeSetFamily& fam_target, const SolverConfig& cfg, const ProtocolOptions& opts) {
  RateEstimates e;
  e.target_copies = estimate_copies_for(sigma, fam_target, opts.estimate_copies);
  const RegularizedEstimate t = regularized_estimate(sigma, fam_target, e.target_copies, cfg);
  e.target = t.estimate;
  if (e.target <= opts.target_free_threshold) {
    throw Error(ErrorCode::TargetIsFree, "target estimate " + io::format_number(e.target) + " is below " +
                                             io::format_number(opts.target_free_threshold) +
                                             "; conversion rates are undefined for free targets");
  }
  e.source_copies = estimate_copies_for(rho, fam_source, opts.estimate_copies);
  const RegularizedEstimate s = regularized_estimate(rho, fam_source, e.source_copies, cfg);
  e.source = s.estimate;
  e.source_single = s.per_copy.front();
  e.converged = s.converged && t.converged;
  return e;
}

ProtocolSpec build_protocol(const DensityMatrix& rho, const DensityMatrix& sigma, const FreeSetFamily& fam_source,
                            const FreeSetFamily& fam_target, int n, const RateEstimates& estimates,
                            const SolverConfig& cfg, const ProtocolOptions& opts) {
  require_same_shape(rho.shape(), fam_source.shape(), "build_protocol (source)");
  require_same_shape(sigma.shape(), fam_target.shape(), "build_protocol (target)");
  check_copy_dimension(rho.shape(), n);
  const int m = output_copies(n, estimates.predicted_rate());
  if (m < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "build_protocol: n = " + std::to_string(n) + " yields no output copies at the predicted rate");
  }
  check_copy_dimension(sigma.shape(), m);

  const double eps = eps_schedule(n, opts);
  HypothesisTestResult hyp = beta_n(rho, fam_source, n, eps, cfg);

  const FreeSetFamily fam_m = fam_target.n_copy(m);
  DensityMatrix sigma_n = tensor_power(sigma, m);
  const MeasureResult rob = global_robustness(sigma_n, fam_m, cfg);
  if (rob.value <= 0.0 || !rob.noise_state) {
    throw Error(ErrorCode::TargetIsFree, "build_protocol: sigma^{⊗" + std::to_string(m) + "} is free");
  }
  DensityMatrix pi_n = *rob.noise_state;

  const Matrix& a = hyp.test.matrix();
  std::vector<Matrix> povm{a, Matrix::Identity(a.rows(), a.cols()) - a};
  QuantumChannel channel =
      QuantumChannel::measure_prepare(hyp.test.shape(), sigma_n.shape(), std::move(povm), {sigma_n, pi_n});
  const bool converged = hyp.converged && rob.converged;
  return ProtocolSpec{
      .source = rho,
      .target = sigma,
      .fam_source = fam_source,
      .fam_target = fam_target,
      .n = n,
      .m = m,
      .eps_n = eps,
      .hypothesis = std::move(hyp),
      .sigma_n = std::move(sigma_n),
      .pi_n = std::move(pi_n),
      .robustness_sigma_n = rob.value,
      .channel = std::move(channel),
      .converged = converged,
  };
}

ProtocolSpec build_protocol(const DensityMatrix& rho, const DensityMatrix& sigma, const FreeSetFamily& fam, int n,
                            const SolverConfig& cfg, const ProtocolOptions& opts) {
  const FreeSetFamily fam_target = fam.with_shape(sigma.shape());
  const RateEstimates est = estimate_rates(rho, sigma, fam, fam_target, cfg, opts);
  return build_protocol(rho, sigma, fam, fam_target, n, est, cfg, opts);
}

RngLevel eps_rng_level_detail(const QuantumChannel& ch, const FreeSetFamily& fam_in, const FreeSetFamily& fam_out,
                              const SolverConfig& cfg) {
  require_same_shape(ch.input_shape(), fam_in.shape(), "eps_rng_level (input)");
  require_same_shape(ch.output_shape(), fam_out.shape(), "eps_rng_level (output)");
  RngLevel level;
  level.sampled = !fam_in.extreme_points_exact();
  auto evaluate = [&](const DensityMatrix& out) {
    const MeasureResult r = global_robustness(out, fam_out, cfg);
    level.level = std::max(level.level, r.value);
    level.converged = level.converged && r.converged;
    ++level.evaluations;
  };

  if (ch.is_measure_prepare() && ch.povm().size() == 2) {
    // The image of F is a segment a·τ₀ + (1-a)·τ₁; R is convex along it, so
    // only the extreme values of a = tr(E₀ω) matter.
    const Matrix& e0 = ch.povm()[0];
    double lo = 1.0;
    double hi = 0.0;
    for_each_extreme_point(fam_in, cfg, [&](const DensityMatrix& w) {
      const double a = linalg::trace_inner(w.matrix(), e0);
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    });
    const DensityMatrix& t0 = ch.prepared_states()[0];
    const DensityMatrix& t1 = ch.prepared_states()[1];
    for (double a : {lo, hi}) {
      a = std::clamp(a, 0.0, 1.0);
      evaluate(DensityMatrix::trusted(t0.shape(), a * t0.matrix() + (1.0 - a) * t1.matrix()));
      if (hi - lo <= 1e-15) break;
    }
    return level;
  }

  std::vector<Matrix> seen;
  for_each_extreme_point(fam_in, cfg, [&](const DensityMatrix& w) {
    const DensityMatrix out = ch.apply(w);
    for (const Matrix& s : seen)
      if ((s - out.matrix()).cwiseAbs().maxCoeff() <= 1e-13) return;
    seen.push_back(out.matrix());
    evaluate(out);
  });
  return level;
}

double eps_rng_level(const QuantumChannel& ch, const FreeSetFamily& fam_in, const FreeSetFamily& fam_out,
                     const SolverConfig& cfg) {
  return eps_rng_level_detail(ch, fam_in, fam_out, cfg).level;
}

bool RateExperimentReport::converged() const {
  if (!estimates.converged) return false;
  return std::all_of(entries.begin(), entries.end(), [](const RateEntry& e) { return e.converged; });
}

std::string RateExperimentReport::to_csv() const {
  std::ostringstream os;
  os << "n,m,eps_n,beta_n,out_trace_dist,eps_rng,predicted_rate,achieved_rate\n";
  for (const RateEntry& e : entries) {
    os << e.n << ',' << e.m << ',' << io::format_number(e.eps_n) << ',' << io::format_number(e.beta_n) << ','
       << io::format_number(e.out_trace_distance) << ',' << io::format_number(e.eps_rng) << ','
       << io::format_number(e.predicted_rate) << ',' << io::format_number(e.achieved_rate) << '\n';
  }
  return os.str();
}

nlohmann::json RateExperimentReport::to_json() const {
  nlohmann::json j;
  j["family_source"] = fam_source;
  j["family_target"] = fam_target;
  j["e_infinity_source"] = estimates.source;
  j["e_infinity_target"] = estimates.target;
  j["e_infinity_source_copies"] = estimates.source_copies;
  j["e_infinity_target_copies"] = estimates.target_copies;
  j["e_source_single_copy"] = estimates.source_single;
  j["predicted_rate"] = estimates.predicted_rate();
  j["eps_prefactor"] = options.eps_prefactor;
  j["proof_delta"] = options.proof_delta;
  j["eps_rng_sampled"] = eps_rng_sampled;
  j["converged"] = converged();
  nlohmann::json rows = nlohmann::json::array();
  for (const RateEntry& e : entries) {
    rows.push_back({
        {"n", e.n},
        {"m", e.m},
        {"eps_n", e.eps_n},
        {"beta_n", e.beta_n},
        {"out_trace_dist", e.out_trace_distance},
        {"eps_rng", e.eps_rng},
        {"achieved_rate", e.achieved_rate},
        {"robustness_sigma_n", e.robustness_sigma_n},
        {"robustness_pi_n", e.robustness_pi_n},
        {"pi_bound_holds", e.pi_bound_holds},
        {"max_free_acceptance", e.max_free_acceptance},
        {"proof_bound", e.proof_bound},
        {"proof_bound_checked", e.proof_bound_checked},
        {"proof_bound_holds", e.proof_bound_holds},
        {"converged", e.converged},
    });
  }
  j["entries"] = std::move(rows);
  return j;
}

RateExperimentReport rate_experiment(const DensityMatrix& rho, const DensityMatrix& sigma,
                                     const FreeSetFamily& fam_source, const FreeSetFamily& fam_target, int n_max,
                                     const SolverConfig& cfg, const ProtocolOptions& opts) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "rate_experiment: n_max must be positive");
  check_copy_dimension(rho.shape(), n_max);
  RateExperimentReport report;
  report.fam_source = fam_source.name();
  report.fam_target = fam_target.name();
  report.options = opts;
  report.estimates = estimate_rates(rho, sigma, fam_source, fam_target, cfg, opts);
  check_copy_dimension(sigma.shape(), output_copies(n_max, report.estimates.predicted_rate()));

  for (int n = 1; n <= n_max; ++n) {
    if (output_copies(n, report.estimates.predicted_rate()) < 1) continue;
    const ProtocolSpec p = build_protocol(rho, sigma, fam_source, fam_target, n, report.estimates, cfg, opts);
    RateEntry e;
    e.n = n;
    e.m = p.m;
    e.eps_n = p.eps_n;
    e.beta_n = p.hypothesis.beta;
    e.out_trace_distance = trace_distance(p.channel.apply(tensor_power(rho, n)), p.sigma_n);
    const FreeSetFamily fam_in = fam_source.n_copy(n);
    const FreeSetFamily fam_out = fam_target.n_copy(p.m);
    const RngLevel rng = eps_rng_level_detail(p.channel, fam_in, fam_out, cfg);
    e.eps_rng = rng.level;
    report.eps_rng_sampled = report.eps_rng_sampled || rng.sampled;
    e.predicted_rate = report.estimates.predicted_rate();
    e.achieved_rate = static_cast<double>(p.m) / static_cast<double>(n);

    e.robustness_sigma_n = p.robustness_sigma_n;
    const MeasureResult rpi = global_robustness(p.pi_n, fam_out, cfg);
    e.robustness_pi_n = rpi.value;
    e.pi_bound_holds = rpi.value <= 1.0 / p.robustness_sigma_n + 1e-6;
    e.max_free_acceptance = p.hypothesis.beta;
    e.proof_bound = std::exp2(-static_cast<double>(n) * (report.estimates.source_single - opts.proof_delta));
    e.proof_bound_checked = n >= opts.proof_min_n && fam_in.extreme_points_exact();
    e.proof_bound_holds = e.max_free_acceptance <= e.proof_bound;
    e.converged = p.converged && rng.converged && rpi.converged;
    report.entries.push_back(e);
  }
  return report;
}

RateExperimentReport rate_experiment(const DensityMatrix& rho, const DensityMatrix& sigma, const FreeSetFamily& fam,
                                     int n_max, const SolverConfig& cfg, const ProtocolOptions& opts) {
  return rate_experiment(rho, sigma, fam, fam.with_shape(sigma.shape()), n_max, cfg, opts);
}

}  // namespace rescomp
