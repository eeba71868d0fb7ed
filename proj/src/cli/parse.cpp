#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <sstream>

#include <toml.hpp>

#include "rescomp/cli/cli.hpp"
#include "rescomp/core/error.hpp"
#include "rescomp/core/random.hpp"
#include "rescomp/core/serialize.hpp"

namespace rescomp::cli {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

std::string trim(std::string s) {
  auto sp = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), sp));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), sp).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

long long to_int(const std::string& s, const std::string& ctx) {
  long long v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) bad("expected an integer in " + ctx + ", got '" + s + "'");
  return v;
}

double to_double(const std::string& s, const std::string& ctx) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    bad("expected a number in " + ctx + ", got '" + s + "'");
  }
}

RealVector to_reals(const std::string& s, const std::string& ctx) {
  const std::vector<std::string> parts = split(s, ',');
  RealVector v(static_cast<Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v(static_cast<Index>(i)) = to_double(parts[i], ctx);
  return v;
}

// name(a, b, c) → name:a:b:c
std::string normalize(const std::string& raw) {
  std::string s = trim(raw);
  const auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') return s;
  std::string out = trim(s.substr(0, open));
  for (const std::string& a : split(s.substr(open + 1, s.size() - open - 2), ',')) {
    if (!a.empty()) out += ":" + a;
  }
  return out;
}

bool looks_like_path(const std::string& s) {
  return s.ends_with(".json") || s.find('/') != std::string::npos;
}

nlohmann::json read_json(const std::string& path, const char* what) {
  if (!std::filesystem::exists(path)) bad(std::string(what) + " file not found: " + path);
  try {
    return io::read_json_file(path);
  } catch (const Error& e) {
    bad(std::string("cannot read ") + what + " file " + path + ": " + e.what());
  } catch (const std::exception& e) {
    bad(std::string("cannot parse ") + what + " file " + path + ": " + e.what());
  }
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::Measure: return "measure";
    case Command::Validate: return "validate";
    case Command::Stein: return "stein";
    case Command::Convert: return "convert";
    case Command::Report: return "report";
  }
  return "unknown";
}

Command command_from_string(const std::string& s) {
  for (Command c : {Command::Measure, Command::Validate, Command::Stein, Command::Convert, Command::Report})
    if (to_string(c) == s) return c;
  bad("unknown command '" + s + "'");
}

SubsystemShape parse_shape(const std::string& s) {
  std::string t = s;
  std::replace(t.begin(), t.end(), 'x', ',');
  std::vector<int> dims;
  for (const std::string& p : split(t, ',')) {
    const long long d = to_int(p, "shape '" + s + "'");
    if (d < 1 || d > 1024) bad("subsystem dimension out of range in shape '" + s + "'");
    dims.push_back(static_cast<int>(d));
  }
  if (dims.empty()) bad("empty shape");
  return SubsystemShape(std::move(dims));
}

DensityMatrix parse_state(const std::string& spec) {
  const std::string s = normalize(spec);
  if (looks_like_path(s)) {
    const nlohmann::json j = read_json(s, "state");
    try {
      return io::density_from_json(j);
    } catch (const std::exception& e) {
      bad("invalid state in " + s + ": " + e.what());
    }
  }
  const std::vector<std::string> parts = split(s, ':');
  const std::string& name = parts[0];
  auto need = [&](std::size_t n) {
    if (parts.size() != n + 1) bad("state '" + spec + "' expects " + std::to_string(n) + " argument(s)");
  };
  try {
    if (name == "plus_state") {
      need(1);
      return DensityMatrix::maximally_coherent(static_cast<int>(to_int(parts[1], spec)));
    }
    if (name == "bell_state") {
      need(0);
      return DensityMatrix::bell_phi_plus();
    }
    if (name == "maxmixed") {
      need(1);
      return DensityMatrix::maximally_mixed(parse_shape(parts[1]));
    }
    if (name == "basis") {
      need(2);
      return DensityMatrix::basis(parse_shape(parts[1]), to_int(parts[2], spec));
    }
    if (name == "diag") {
      need(1);
      const RealVector p = to_reals(parts[1], spec);
      return DensityMatrix::diagonal(SubsystemShape{static_cast<int>(p.size())}, p);
    }
    if (name == "random") {
      need(3);
      const long long seed = to_int(parts[1], spec);
      if (seed < 0) bad("random state seed must be non-negative");
      return random_density_matrix(parse_shape(parts[2]), to_int(parts[3], spec), static_cast<std::uint64_t>(seed));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    bad("state '" + spec + "': " + e.what());
  }
  bad("unknown state '" + spec + "'");
}

FreeSetFamily parse_family(const std::string& spec) {
  const std::string s = normalize(spec);
  if (s.empty()) bad("no family given");
  if (looks_like_path(s)) {
    const nlohmann::json j = read_json(s, "family");
    try {
      return FreeSetFamily::from_json(j);
    } catch (const std::exception& e) {
      bad("invalid family in " + s + ": " + e.what());
    }
  }
  const auto colon = s.find(':');
  const std::string name = s.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
  try {
    if (name == "incoherent") return FreeSetFamily::incoherent(parse_shape(rest));
    if (name == "maxmixed") return FreeSetFamily::max_mixed(parse_shape(rest));
    if (name == "ppt") {
      const std::vector<std::string> parts = split(rest, ':');
      if (parts.empty() || parts.size() > 2) bad("family '" + spec + "' expects ppt:<shape>[:<party A factors>]");
      std::vector<int> party{0};
      if (parts.size() == 2) {
        party.clear();
        for (const std::string& p : split(parts[1], ',')) party.push_back(static_cast<int>(to_int(p, spec)));
      }
      return FreeSetFamily::ppt(parse_shape(parts[0]), party);
    }
    if (name == "gibbs") {
      const std::vector<std::string> parts = split(rest, ':');
      if (parts.size() != 2) bad("family '" + spec + "' expects gibbs:<beta>:<e0,e1,..>");
      const double beta = to_double(parts[0], spec);
      const RealVector e = to_reals(parts[1], spec);
      const HermitianOperator h(SubsystemShape{static_cast<int>(e.size())}, e.cast<Complex>().asDiagonal());
      return FreeSetFamily::gibbs(h, beta);
    }
    if (name == "singleton") return FreeSetFamily::singleton(parse_state(rest));
    if (name == "adversarial_polytope") {
      if (!rest.empty()) bad("adversarial_polytope takes no arguments");
      return FreeSetFamily::adversarial_polytope();
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    bad("family '" + spec + "': " + e.what());
  }
  bad("unknown family '" + spec + "'");
}

// ------------------------------------------------------------------ config

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["command"] = to_string(command);
  j["family"] = family;
  j["states"] = states;
  j["measures"] = measures;
  j["target"] = target;
  j["target_family"] = target_family;
  j["eps"] = eps;
  j["n_max"] = n_max;
  j["samples"] = samples;
  j["output"] = output;
  j["input"] = input;
  j["include_matrices"] = include_matrices;
  j["solver"] = {
      {"max_iterations", solver.max_iterations},
      {"tolerance", solver.tolerance},
      {"seed", solver.seed},
      {"admm_max_iterations", solver.admm_max_iterations},
      {"extreme_point_samples", solver.extreme_point_samples},
      {"relative_entropy_method", rescomp::to_string(solver.relative_entropy_method)},
      {"robustness_method", rescomp::to_string(solver.robustness_method)},
  };
  j["protocol"] = {
      {"eps_prefactor", protocol.eps_prefactor},
      {"estimate_copies", protocol.estimate_copies},
      {"proof_delta", protocol.proof_delta},
  };
  return j;
}

void ExperimentConfig::check() const {
  if (command != Command::Report && family.empty()) bad("no family given (--family)");
  switch (command) {
    case Command::Measure:
      if (states.empty()) bad("measure needs at least one --state");
      if (measures.empty()) bad("measure needs at least one entry in --measures");
      for (const std::string& m : measures)
        if (m != "E" && m != "R" && m != "logR" && m != "T" && m != "slogR") bad("unknown measure '" + m + "'");
      break;
    case Command::Validate:
      if (samples < 1) bad("validate needs samples >= 1");
      break;
    case Command::Stein:
    case Command::Convert:
      if (states.size() != 1) bad(to_string(command) + " needs exactly one --state");
      if (command == Command::Convert && target.empty()) bad("convert needs --target");
      if (n_max < 1) bad("n_max must be >= 1");
      if (command == Command::Stein && !(eps > 0.0 && eps < 1.0)) bad("eps must lie in (0, 1)");
      break;
    case Command::Report:
      if (input.empty()) bad("report needs --input");
      break;
  }
  if (output.empty()) bad("empty output directory");
}

namespace {

template <class T>
void read_into(const toml::table& t, std::string_view key, T& out) {
  const toml::node* n = t.get(key);
  if (n == nullptr) return;
  const auto v = n->value<T>();
  if (!v) bad("config key '" + std::string(key) + "' has the wrong type");
  out = *v;
}

void reject_unknown(const toml::table& t, std::initializer_list<std::string_view> known, const std::string& where) {
  for (const auto& [k, v] : t) {
    if (std::find(known.begin(), known.end(), k.str()) == known.end())
      bad("unknown config key '" + where + std::string(k.str()) + "'");
  }
}

RelativeEntropyMethod re_method(const std::string& s) {
  for (auto m : {RelativeEntropyMethod::Auto, RelativeEntropyMethod::FrankWolfe, RelativeEntropyMethod::ClosedForm})
    if (rescomp::to_string(m) == s) return m;
  bad("unknown relative_entropy_method '" + s + "'");
}

RobustnessMethod rob_method(const std::string& s) {
  for (auto m : {RobustnessMethod::Auto, RobustnessMethod::ConicAdmm, RobustnessMethod::BisectionDykstra})
    if (rescomp::to_string(m) == s) return m;
  bad("unknown robustness_method '" + s + "'");
}

std::vector<std::string> string_list(toml::node_view<toml::node> n, const char* key) {
  std::vector<std::string> out;
  if (const toml::array* a = n.as_array()) {
    for (const toml::node& e : *a) {
      const auto s = e.value<std::string>();
      if (!s) bad(std::string("config key '") + key + "' must be a list of strings");
      out.push_back(*s);
    }
  } else if (const auto s = n.value<std::string>()) {
    out = split(*s, ',');
  } else {
    bad(std::string("config key '") + key + "' must be a string or list of strings");
  }
  return out;
}

}  // namespace

void load_toml(const std::string& path, ExperimentConfig& cfg) {
  if (!std::filesystem::exists(path)) bad("config file not found: " + path);
  toml::table t;
  try {
    t = toml::parse_file(path);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "cannot parse config " << path << ": " << e.description() << " at line " << e.source().begin.line;
    bad(os.str());
  }
  reject_unknown(t,
                 {"command", "family", "states", "state", "measures", "target", "target_family", "eps", "n_max",
                  "samples", "output", "input", "include_matrices", "solver", "protocol"},
                 "");
  std::string command;
  read_into(t, "command", command);
  if (!command.empty()) cfg.command = command_from_string(command);
  read_into(t, "family", cfg.family);
  if (t.contains("states")) cfg.states = string_list(t["states"], "states");
  if (t.contains("state")) cfg.states = string_list(t["state"], "state");
  if (t.contains("measures")) cfg.measures = string_list(t["measures"], "measures");
  read_into(t, "target", cfg.target);
  read_into(t, "target_family", cfg.target_family);
  read_into(t, "eps", cfg.eps);
  read_into(t, "n_max", cfg.n_max);
  read_into(t, "samples", cfg.samples);
  read_into(t, "output", cfg.output);
  read_into(t, "input", cfg.input);
  read_into(t, "include_matrices", cfg.include_matrices);

  if (t.contains("solver")) {
    const toml::table* s = t["solver"].as_table();
    if (s == nullptr) bad("config key 'solver' must be a table");
    reject_unknown(*s,
                   {"max_iterations", "tolerance", "seed", "admm_max_iterations", "extreme_point_samples",
                    "relative_entropy_method", "robustness_method"},
                   "solver.");
    read_into(*s, "max_iterations", cfg.solver.max_iterations);
    read_into(*s, "tolerance", cfg.solver.tolerance);
    std::int64_t seed = -1;
    read_into(*s, "seed", seed);
    if (s->contains("seed")) {
      if (seed < 0) bad("config key 'solver.seed' must be non-negative");
      cfg.solver.seed = static_cast<std::uint64_t>(seed);
    }
    read_into(*s, "admm_max_iterations", cfg.solver.admm_max_iterations);
    read_into(*s, "extreme_point_samples", cfg.solver.extreme_point_samples);
    std::string m;
    read_into(*s, "relative_entropy_method", m);
    if (!m.empty()) cfg.solver.relative_entropy_method = re_method(m);
    m.clear();
    read_into(*s, "robustness_method", m);
    if (!m.empty()) cfg.solver.robustness_method = rob_method(m);
  }
  if (t.contains("protocol")) {
    const toml::table* p = t["protocol"].as_table();
    if (p == nullptr) bad("config key 'protocol' must be a table");
    reject_unknown(*p, {"eps_prefactor", "estimate_copies", "proof_delta"}, "protocol.");
    read_into(*p, "eps_prefactor", cfg.protocol.eps_prefactor);
    read_into(*p, "estimate_copies", cfg.protocol.estimate_copies);
    read_into(*p, "proof_delta", cfg.protocol.proof_delta);
  }
}

RelativeEntropyMethod parse_relative_entropy_method(const std::string& s) { return re_method(s); }
RobustnessMethod parse_robustness_method(const std::string& s) { return rob_method(s); }

}  // namespace rescomp::cli
