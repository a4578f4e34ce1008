#include "bfdarcy_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace bfdarcy::cli {

namespace {

const std::vector<std::string> kKeys = {
    "problem", "data",  "mu",         "forchheimer", "exponent",      "k_brinkman",
    "k_darcy", "nx",    "ny_brinkman", "ny_darcy",   "mesh_pattern",  "mesh",
    "tol",     "max_iter", "initial_guess", "constraint", "csv",     "vtk",
    "verbose", "levels", "forchheimer_list", "k_darcy_list",
};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::config, where + ": " + what);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<double> parse_numbers(const std::string& where, const std::string& value) {
  std::string s = value;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream is(s);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) fail(where, "not a number: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

double parse_double(const std::string& where, const std::string& value) {
  const auto v = parse_numbers(where, value);
  if (v.size() != 1) fail(where, "expected one number");
  return v[0];
}

int parse_int(const std::string& where, const std::string& value) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) fail(where, "not an integer: '" + value + "'");
  return v;
}

bool parse_bool(const std::string& where, const std::string& value) {
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  fail(where, "not a boolean: '" + value + "'");
}

Problem parse_problem(const std::string& where, const std::string& value) {
  if (value == "example1" || value == "example1_variant") return Problem::example1;
  if (value == "example2") return Problem::example2;
  if (value == "custom") return Problem::custom;
  fail(where, "unknown problem '" + value + "'");
}

Mat2 parse_tensor(const std::string& where, const std::string& value) {
  const auto v = parse_numbers(where, value);
  Mat2 k;
  if (v.size() == 1) {
    k = v[0] * Mat2::Identity();
  } else if (v.size() == 4) {
    k << v[0], v[1], v[2], v[3];
  } else {
    fail(where, "permeability needs 1 or 4 numbers");
  }
  if (std::abs(k(0, 1) - k(1, 0)) > 1e-14 * k.norm()) fail(where, "permeability must be symmetric");
  if (Eigen::SelfAdjointEigenSolver<Mat2>(k).eigenvalues().minCoeff() <= 0.0) {
    fail(where, "permeability must be positive definite");
  }
  return k;
}

void apply_defaults(RunConfig& c) {
  if (c.data_set() == Problem::example2) {
    c.exponent = 4.0;
    c.k_brinkman = 0.1 * Mat2::Identity();
    c.k_darcy = 1e-3 * Mat2::Identity();
  }
}

}  // namespace

PhysicalParams RunConfig::params() const {
  PhysicalParams p;
  p.mu = mu;
  p.forchheimer = forchheimer;
  p.exponent = exponent;
  p.k_brinkman = constant_tensor(k_brinkman);
  p.k_darcy = constant_tensor(k_darcy);
  return p;
}

std::vector<std::string> config_keys() { return kKeys; }

RunConfig parse_config(std::istream& in, const std::string& source) {
  std::map<std::string, std::pair<std::string, int>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail(where, "expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) fail(where, "unknown key '" + key + "'");
    if (value.empty()) fail(where, "missing value for '" + key + "'");
    if (!entries.emplace(key, std::pair{value, lineno}).second) fail(where, "duplicate key '" + key + "'");
  }

  RunConfig c;
  auto where = [&](const std::string& key) {
    return source + ":" + std::to_string(entries.at(key).second);
  };
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second.first;
  };
  if (auto* v = get("problem")) c.problem = parse_problem(where("problem"), *v);
  if (auto* v = get("data")) {
    if (c.problem != Problem::custom) fail(where("data"), "'data' is only used with problem = custom");
    c.data = parse_problem(where("data"), *v);
    if (c.data == Problem::custom) fail(where("data"), "data must be example1 or example2");
  }
  if (auto* v = get("mesh")) c.mesh_path = *v;
  if (c.problem == Problem::custom && c.mesh_path.empty()) {
    fail(source, "problem = custom needs a 'mesh' path");
  }
  apply_defaults(c);

  if (auto* v = get("mu")) c.mu = parse_double(where("mu"), *v);
  if (auto* v = get("forchheimer")) c.forchheimer = parse_double(where("forchheimer"), *v);
  if (auto* v = get("exponent")) c.exponent = parse_double(where("exponent"), *v);
  if (auto* v = get("k_brinkman")) c.k_brinkman = parse_tensor(where("k_brinkman"), *v);
  if (auto* v = get("k_darcy")) c.k_darcy = parse_tensor(where("k_darcy"), *v);
  if (auto* v = get("nx")) c.nx = parse_int(where("nx"), *v);
  if (auto* v = get("ny_brinkman")) c.ny_brinkman = parse_int(where("ny_brinkman"), *v);
  if (auto* v = get("ny_darcy")) c.ny_darcy = parse_int(where("ny_darcy"), *v);
  if (auto* v = get("mesh_pattern")) {
    if (*v == "right_diagonal") c.pattern = MeshPattern::right_diagonal;
    else if (*v == "crisscross") c.pattern = MeshPattern::crisscross;
    else fail(where("mesh_pattern"), "unknown mesh pattern '" + *v + "'");
  }
  if (auto* v = get("tol")) c.tol = parse_double(where("tol"), *v);
  if (auto* v = get("max_iter")) c.max_iter = parse_int(where("max_iter"), *v);
  if (auto* v = get("initial_guess")) {
    const auto u = parse_numbers(where("initial_guess"), *v);
    if (u.size() != 2) fail(where("initial_guess"), "initial guess needs 2 numbers");
    c.initial = {u[0], u[1]};
  }
  if (auto* v = get("constraint")) {
    c.constraint_set = true;
    if (*v == "exact") c.constraint = ConstraintMode::exact;
    else if (*v == "penalty") c.constraint = ConstraintMode::penalty;
    else if (*v == "none") c.constraint = ConstraintMode::none;
    else fail(where("constraint"), "unknown constraint mode '" + *v + "'");
  }
  if (auto* v = get("csv")) c.csv = *v;
  if (auto* v = get("vtk")) c.vtk = *v;
  if (auto* v = get("verbose")) c.verbose = parse_bool(where("verbose"), *v);
  if (auto* v = get("levels")) c.levels = parse_int(where("levels"), *v);
  if (auto* v = get("forchheimer_list")) c.forchheimer_list = parse_numbers(where("forchheimer_list"), *v);
  if (auto* v = get("k_darcy_list")) c.k_darcy_list = parse_numbers(where("k_darcy_list"), *v);

  if (!(c.mu > 0.0)) fail(source, "mu must be positive");
  if (!(c.forchheimer >= 0.0)) fail(source, "forchheimer must be nonnegative");
  if (!(c.exponent >= 3.0 && c.exponent <= 4.0)) fail(source, "exponent out of range [3,4]");
  if (c.nx < 1 || c.ny_brinkman < 0 || c.ny_darcy < 0) fail(source, "mesh counts must be positive");
  if (!(c.tol > 0.0)) fail(source, "tol must be positive");
  if (c.max_iter < 1) fail(source, "max_iter must be at least 1");
  for (double f : c.forchheimer_list) {
    if (!(f >= 0.0)) fail(source, "forchheimer_list entries must be nonnegative");
  }
  for (double k : c.k_darcy_list) {
    if (!(k > 0.0)) fail(source, "k_darcy_list entries must be positive");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open config '" + path + "'");
  return parse_config(in, path);
}

}  // namespace bfdarcy::cli
