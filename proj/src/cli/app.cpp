#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "rescomp/cli/cli.hpp"
#include "rescomp/core/error.hpp"

namespace rescomp::cli {

namespace {

// Flag values as parsed; only flags that were given override the config file.
struct Flags {
  std::string config;
  std::string family;
  std::vector<std::string> states;
  std::string measures;
  std::string target;
  std::string target_family;
  double eps = 0.0;
  int n_max = 0;
  int samples = 0;
  std::string output;
  std::string input;
  std::uint64_t seed = 0;
  int max_iterations = 0;
  double tolerance = 0.0;
  std::string re_method;
  std::string rob_method;
  double eps_prefactor = 0.0;
  int estimate_copies = 0;
  bool include_matrices = false;
};

void add_options(CLI::App& sub, Flags& f) {
  sub.add_option("-c,--config", f.config, "TOML config file; flags override its values");
  sub.add_option("-f,--family", f.family, "free-set family descriptor or JSON file");
  sub.add_option("-s,--state", f.states, "state descriptor or JSON file (repeatable)");
  sub.add_option("-m,--measures", f.measures, "comma-separated subset of E,R,logR,T,slogR");
  sub.add_option("--target", f.target, "target state (convert)");
  sub.add_option("--target-family", f.target_family, "target family (convert)");
  sub.add_option("--eps", f.eps, "type-1 error (stein) or smoothing radius (slogR)");
  sub.add_option("-n,--n-max", f.n_max, "largest number of copies");
  sub.add_option("--samples", f.samples, "sampled members per postulate (validate)");
  sub.add_option("-o,--output", f.output, "output directory");
  sub.add_option("-i,--input", f.input, "directory of an earlier run (report)");
  sub.add_option("--seed", f.seed, "solver seed (RESCOMP_SEED overrides)");
  sub.add_option("--max-iterations", f.max_iterations, "outer iteration limit");
  sub.add_option("--tolerance", f.tolerance, "target certified gap");
  sub.add_option("--re-method", f.re_method, "auto | frank_wolfe | closed_form");
  sub.add_option("--rob-method", f.rob_method, "auto | conic_admm | bisection_dykstra");
  sub.add_option("--eps-prefactor", f.eps_prefactor, "c in the schedule eps_n = c/sqrt(n) (convert)");
  sub.add_option("--estimate-copies", f.estimate_copies, "copies used for the E-infinity estimates (convert)");
  sub.add_flag("--include-matrices", f.include_matrices, "embed closest free states and witnesses in JSON");
}

ExperimentConfig assemble(const CLI::App& sub, const Flags& f, Command command) {
  ExperimentConfig cfg;
  if (!f.config.empty()) load_toml(f.config, cfg);
  cfg.command = command;
  cfg.config_path = f.config;
  auto given = [&](const char* name) { return sub.count(name) > 0; };
  if (given("--family")) cfg.family = f.family;
  if (given("--state")) cfg.states = f.states;
  if (given("--measures")) {
    cfg.measures.clear();
    std::string cur;
    for (char c : f.measures + ",") {
      if (c == ',') {
        if (!cur.empty()) cfg.measures.push_back(cur);
        cur.clear();
      } else if (c != ' ') {
        cur += c;
      }
    }
  }
  if (given("--target")) cfg.target = f.target;
  if (given("--target-family")) cfg.target_family = f.target_family;
  if (given("--eps")) cfg.eps = f.eps;
  if (given("--n-max")) cfg.n_max = f.n_max;
  if (given("--samples")) cfg.samples = f.samples;
  if (given("--output")) cfg.output = f.output;
  if (given("--input")) cfg.input = f.input;
  if (given("--seed")) cfg.solver.seed = f.seed;
  if (given("--max-iterations")) cfg.solver.max_iterations = f.max_iterations;
  if (given("--tolerance")) cfg.solver.tolerance = f.tolerance;
  if (given("--re-method")) cfg.solver.relative_entropy_method = parse_relative_entropy_method(f.re_method);
  if (given("--rob-method")) cfg.solver.robustness_method = parse_robustness_method(f.rob_method);
  if (given("--eps-prefactor")) cfg.protocol.eps_prefactor = f.eps_prefactor;
  if (given("--estimate-copies")) cfg.protocol.estimate_copies = f.estimate_copies;
  if (given("--include-matrices")) cfg.include_matrices = true;

  if (const char* env = std::getenv("RESCOMP_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') throw Error(ErrorCode::ConfigError, std::string("RESCOMP_SEED is not an integer: ") + env);
    cfg.solver.seed = v;
  }
  return cfg;
}

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonConvergence:
    case ErrorCode::SolverFailure:
    case ErrorCode::InfeasibleAtUpperBound: return kExitNonConvergence;
    case ErrorCode::TargetIsFree: return kExitTargetIsFree;
    case ErrorCode::DimensionCap: return kExitDimensionCap;
    default: return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rescomp: resource-theory measures, hypothesis testing and conversion experiments"};
  app.require_subcommand(1);
  Flags flags;
  const std::pair<Command, const char*> commands[] = {
      {Command::Measure, "compute E, R, logR, T or smoothed logR for states"},
      {Command::Validate, "check the five postulates on a family"},
      {Command::Stein, "Stein exponent sequence -log2(beta_n)/n"},
      {Command::Convert, "build conversion protocols and measure rates"},
      {Command::Report, "summarize the artifacts of an earlier run"},
  };
  for (const auto& [cmd, help] : commands) add_options(*app.add_subcommand(to_string(cmd), help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, std::cerr, std::cerr);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    for (const auto& [cmd, help] : commands) {
      const CLI::App* sub = app.get_subcommand(to_string(cmd));
      if (sub->parsed()) return run(assemble(*sub, flags, cmd));
    }
  } catch (const Error& e) {
    std::cerr << "rescomp: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "rescomp: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace rescomp::cli
