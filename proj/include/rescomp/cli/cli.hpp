#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rescomp/free_sets/family.hpp"
#include "rescomp/protocol/protocol.hpp"
#include "rescomp/solvers/config.hpp"

namespace rescomp::cli {

enum class Command { Measure, Validate, Stein, Convert, Report };

std::string to_string(Command c);
Command command_from_string(const std::string& s);

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitNonConvergence = 2,
  kExitValidateFail = 3,
  kExitTargetIsFree = 4,
  kExitDimensionCap = 5,
};

struct ExperimentConfig {
  Command command = Command::Measure;
  std::string family;                 // descriptor or JSON path
  std::vector<std::string> states;    // descriptors or JSON paths
  std::vector<std::string> measures{"E", "R", "logR"};
  std::string target;                 // convert: target state
  std::string target_family;          // convert: defaults to the source kind on the target shape
  double eps = 0.05;
  int n_max = 4;
  int samples = 64;                   // validate
  std::string output = "rescomp_out";
  std::string input;                  // report: directory of an earlier run
  bool include_matrices = false;
  SolverConfig solver;
  ProtocolOptions protocol;
  std::string config_path;

  nlohmann::json to_json() const;
  /// Throws ConfigError on missing pieces for the chosen command.
  void check() const;
};

/// Merges a TOML file into cfg (keys absent from the file are untouched).
void load_toml(const std::string& path, ExperimentConfig& cfg);

/// incoherent:2[,2] | ppt:2,2[:0] | maxmixed:2 | gibbs:<beta>:<e0,e1,..> |
/// singleton:<state> | adversarial_polytope | path to a JSON family.
FreeSetFamily parse_family(const std::string& spec);

/// plus_state:d | bell_state | random:seed:shape:rank | basis:d:i |
/// maxmixed:d | diag:p0,p1,.. | path to a JSON state. name(a, b, c) is
/// accepted for name:a:b:c, and shapes may be written 2x2.
DensityMatrix parse_state(const std::string& spec);

SubsystemShape parse_shape(const std::string& s);
RelativeEntropyMethod parse_relative_entropy_method(const std::string& s);
RobustnessMethod parse_robustness_method(const std::string& s);

/// Runs one command and writes its artifacts under cfg.output.
int run(const ExperimentConfig& cfg);

int run_measure(const ExperimentConfig& cfg);
int run_validate(const ExperimentConfig& cfg);
int run_stein(const ExperimentConfig& cfg);
int run_convert(const ExperimentConfig& cfg);
int run_report(const ExperimentConfig& cfg);

/// Full command line entry point: parses flags, applies RESCOMP_SEED, maps
/// errors to exit codes and reports diagnostics on stderr.
int main(int argc, char** argv);

}  // namespace rescomp::cli
