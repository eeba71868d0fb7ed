#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <Eigen/Core>
#include <toml.hpp>

#include "rescomp/cli/cli.hpp"
#include "rescomp/core/error.hpp"
#include "rescomp/core/serialize.hpp"
#include "rescomp/free_sets/postulates.hpp"
#include "rescomp/hypothesis/hypothesis.hpp"
#include "rescomp/measures/measures.hpp"

#ifndef RESCOMP_VERSION
#define RESCOMP_VERSION "0.0.0"
#endif

namespace rescomp::cli {

namespace fs = std::filesystem;

namespace {

/// Collects the files of one run. Each file is written once, atomically; the
/// manifest goes last and lists them.
class Artifacts {
 public:
  explicit Artifacts(const ExperimentConfig& cfg)
      : cfg_(cfg), dir_(cfg.output), start_(std::chrono::steady_clock::now()) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) {
      throw Error(ErrorCode::ConfigError, "cannot create output directory " + dir_.string());
    }
  }

  void write(const std::string& name, const std::string& contents) {
    io::write_file_atomic((dir_ / name).string(), contents);
    files_.push_back(name);
  }
  void write_json(const std::string& name, const nlohmann::json& j) { write(name, j.dump(2) + "\n"); }

  int finish(int code, nlohmann::json summary = {}) {
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    nlohmann::json m;
    m["schema"] = "rescomp.manifest/1";
    m["command"] = to_string(cfg_.command);
    m["config"] = cfg_.to_json();
    m["seed"] = cfg_.solver.seed;
    m["versions"] = {
        {"rescomp", RESCOMP_VERSION},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
        {"tomlplusplus", std::to_string(TOML_LIB_MAJOR) + "." + std::to_string(TOML_LIB_MINOR) + "." +
                             std::to_string(TOML_LIB_PATCH)},
        {"compiler", __VERSION__},
    };
    m["exit_code"] = code;
    m["outputs"] = files_;
    if (!summary.is_null()) m["summary"] = std::move(summary);
    m["wall_ms"] = wall_ms;
    io::write_file_atomic((dir_ / "manifest.json").string(), m.dump(2) + "\n");
    return code;
  }

 private:
  const ExperimentConfig& cfg_;
  fs::path dir_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> files_;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

MeasureResult compute(const std::string& measure, const DensityMatrix& rho, const FreeSetFamily& fam,
                      const ExperimentConfig& cfg) {
  if (measure == "E") return relative_entropy_of_resource(rho, fam, cfg.solver);
  if (measure == "R") return global_robustness(rho, fam, cfg.solver);
  if (measure == "logR") return log_robustness_result(rho, fam, cfg.solver);
  if (measure == "T") return trace_distance_of_resource(rho, fam, cfg.solver);
  if (measure == "slogR") return smoothed_log_robustness(rho, fam, cfg.eps, cfg.solver);
  throw Error(ErrorCode::ConfigError, "unknown measure '" + measure + "'");
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int run_measure(const ExperimentConfig& cfg) {
  const FreeSetFamily fam = parse_family(cfg.family);
  std::vector<DensityMatrix> states;
  for (const std::string& s : cfg.states) states.push_back(parse_state(s));

  std::ostringstream csv;
  // wall_ms lives in the manifest so that reruns stay byte-identical.
  csv << "measure,family,state_id,n,value,gap,lower_bound,converged,iterations,method\n";
  nlohmann::json all = nlohmann::json::array();
  bool converged = true;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (const std::string& m : cfg.measures) {
      const MeasureResult r = compute(m, states[i], fam, cfg);
      converged = converged && r.converged;
      csv << m << ',' << csv_field(fam.name()) << ',' << csv_field(cfg.states[i]) << ",1," << io::format_number(r.value)
          << ',' << io::format_number(r.gap_bound) << ',' << io::format_number(r.lower_bound) << ','
          << (r.converged ? 1 : 0) << ',' << r.iterations << ',' << r.method << '\n';
      nlohmann::json j = r.to_json(cfg.include_matrices);
      j["state"] = cfg.states[i];
      all.push_back(std::move(j));
    }
  }
  Artifacts out(cfg);
  out.write("results.csv", csv.str());
  out.write_json("results.json", all);
  if (!converged) std::cerr << "rescomp: some measures did not reach their target gap (see results.csv)\n";
  return out.finish(converged ? kExitOk : kExitNonConvergence, {{"converged", converged}});
}

int run_validate(const ExperimentConfig& cfg) {
  const FreeSetFamily fam = parse_family(cfg.family);
  const PostulateReport report = validate_postulates(fam, cfg.samples, cfg.solver.seed);
  Artifacts out(cfg);
  const std::string text = report.to_text();
  out.write("postulates.txt", text);
  out.write_json("postulates.json", report.to_json());
  std::cerr << text;
  const bool pass = report.all_pass();
  return out.finish(pass ? kExitOk : kExitValidateFail, {{"all_pass", pass}, {"family", report.family}});
}

int run_stein(const ExperimentConfig& cfg) {
  const FreeSetFamily fam = parse_family(cfg.family);
  const DensityMatrix rho = parse_state(cfg.states.front());
  const ExponentSequence seq = stein_exponent_sequence(rho, fam, cfg.n_max, cfg.eps, cfg.solver);

  std::ostringstream tsv;
  tsv << "# n\texponent\n";
  for (const ExponentEntry& e : seq.entries) tsv << e.n << '\t' << io::format_number(e.exponent) << '\n';

  nlohmann::json summary;
  summary["family"] = fam.name();
  summary["eps"] = seq.eps;
  summary["e_infinity_estimate"] = seq.e_infinity_estimate;
  summary["e_infinity_copies"] = seq.e_infinity_n;
  summary["final_exponent"] = seq.entries.back().exponent;
  summary["lower_bound_estimate"] = seq.lower_bound_estimate;
  summary["converged"] = seq.converged;
  Artifacts out(cfg);
  out.write("stein.csv", seq.to_csv());
  out.write("stein_exponent.tsv", tsv.str());
  out.write_json("summary.json", summary);
  return out.finish(seq.converged ? kExitOk : kExitNonConvergence, summary);
}

int run_convert(const ExperimentConfig& cfg) {
  const FreeSetFamily fam_source = parse_family(cfg.family);
  const DensityMatrix rho = parse_state(cfg.states.front());
  const DensityMatrix sigma = parse_state(cfg.target);
  const FreeSetFamily fam_target =
      cfg.target_family.empty() ? fam_source.with_shape(sigma.shape()) : parse_family(cfg.target_family);
  const RateExperimentReport report =
      rate_experiment(rho, sigma, fam_source, fam_target, cfg.n_max, cfg.solver, cfg.protocol);

  std::ostringstream tsv;
  tsv << "# n\tout_trace_dist\n";
  for (const RateEntry& e : report.entries) tsv << e.n << '\t' << io::format_number(e.out_trace_distance) << '\n';
  Artifacts out(cfg);
  out.write("rates.csv", report.to_csv());
  out.write("trace_distance.tsv", tsv.str());
  const nlohmann::json summary = report.to_json();
  out.write_json("summary.json", summary);
  const bool ok = report.converged();
  return out.finish(ok ? kExitOk : kExitNonConvergence,
                    {{"converged", ok}, {"predicted_rate", report.estimates.predicted_rate()}});
}

int run_report(const ExperimentConfig& cfg) {
  const fs::path in = cfg.input;
  const fs::path manifest_path = in / "manifest.json";
  if (!fs::exists(manifest_path)) throw Error(ErrorCode::ConfigError, "no manifest.json in " + in.string());
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_text(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, "cannot parse " + manifest_path.string() + ": " + e.what());
  }
  std::ostringstream md;
  md << "# rescomp " << manifest.value("command", std::string("?")) << " run\n\n";
  md << "- exit code: " << manifest.value("exit_code", -1) << "\n";
  md << "- seed: " << manifest.value("seed", std::uint64_t{0}) << "\n";
  if (manifest.contains("config")) {
    const nlohmann::json& c = manifest["config"];
    md << "- family: " << c.value("family", std::string()) << "\n";
    if (c.contains("states")) md << "- states: " << c["states"].dump() << "\n";
  }
  if (manifest.contains("summary")) md << "- summary: `" << manifest["summary"].dump() << "`\n";
  for (const auto& f : manifest.value("outputs", nlohmann::json::array())) {
    const std::string name = f.get<std::string>();
    if (!name.ends_with(".csv") && !name.ends_with(".txt")) continue;
    md << "\n## " << name << "\n\n```\n" << read_text(in / name) << "```\n";
  }
  Artifacts out(cfg);
  out.write("report.md", md.str());
  return out.finish(kExitOk);
}

int run(const ExperimentConfig& cfg) {
  cfg.check();
  switch (cfg.command) {
    case Command::Measure: return run_measure(cfg);
    case Command::Validate: return run_validate(cfg);
    case Command::Stein: return run_stein(cfg);
    case Command::Convert: return run_convert(cfg);
    case Command::Report: return run_report(cfg);
  }
  return kExitConfig;
}

}  // namespace rescomp::cli
