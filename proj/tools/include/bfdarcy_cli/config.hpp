#pragma once

#include <istream>
#include <string>
#include <vector>

#include "bfdarcy/verification.hpp"

namespace bfdarcy::cli {

enum class Problem { example1, example2, custom };

/// Everything a run needs, read from a flat `key = value` file.
struct RunConfig {
  Problem problem = Problem::example1;
  Problem data = Problem::example1;  // data set used with problem = custom

  double mu = 1.0;
  double forchheimer = 10.0;
  double exponent = 3.0;
  Mat2 k_brinkman = Mat2::Identity();
  Mat2 k_darcy = 0.1 * Mat2::Identity();

  int nx = 16;
  int ny_brinkman = 0;  // 0: derived from nx and the geometry
  int ny_darcy = 0;
  MeshPattern pattern = MeshPattern::right_diagonal;
  std::string mesh_path;

  double tol = 1e-6;
  int max_iter = 50;
  Vec2 initial{0.1, 0.0};
  bool constraint_set = false;
  ConstraintMode constraint = ConstraintMode::exact;

  std::string csv;
  std::string vtk;
  bool verbose = true;
  int levels = 5;

  std::vector<double> forchheimer_list;
  std::vector<double> k_darcy_list;

  [[nodiscard]] Problem data_set() const { return problem == Problem::custom ? data : problem; }
  [[nodiscard]] PhysicalParams params() const;
};

/// Parses the config format; `source` only labels error messages.
/// Throws Error(config) on unknown keys, malformed values or violated
/// invariants (mu > 0, F >= 0, p in [3,4], SPD permeabilities).
[[nodiscard]] RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
/// Throws Error(io) if the file cannot be read.
[[nodiscard]] RunConfig load_config(const std::string& path);

[[nodiscard]] std::vector<std::string> config_keys();

}  // namespace bfdarcy::cli
