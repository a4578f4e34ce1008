#pragma once

#include <filesystem>
#include <ostream>

#include "bfdarcy_cli/config.hpp"

namespace bfdarcy::cli {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_solver = 2, exit_io = 3 };

/// Maps a library error to the process exit code.
[[nodiscard]] int exit_code_for(ErrorCode code);

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  bool vtk = false;
  bool quiet = false;
  int levels = 0;  // 0: take the value from the config
};

/// Mesh of the configured problem, either generated or loaded.
[[nodiscard]] Mesh build_mesh(const RunConfig& config, int nx);

/// Problem data and, for manufactured problems, the exact solution.
struct ProblemSetup {
  ProblemData data;
  std::optional<ExactSolution> exact;
  ConstraintMode mode = ConstraintMode::exact;
};
[[nodiscard]] ProblemSetup build_problem(const RunConfig& config, const Mesh& mesh,
                                         const PhysicalParams& params);

/// Each command writes diagnostics to `err` and returns an exit code.
int cmd_solve(const RunConfig& config, const CommandOptions& opts, std::ostream& out,
              std::ostream& err);
int cmd_convergence(const RunConfig& config, const CommandOptions& opts, std::ostream& out,
                    std::ostream& err);
int cmd_sweep(const RunConfig& config, const CommandOptions& opts, std::ostream& out,
              std::ostream& err);
int cmd_mesh_gen(const RunConfig& config, const CommandOptions& opts, std::ostream& out,
                 std::ostream& err);

/// Iteration-count grid: one row per (F, K_D) pair, one column per mesh.
void write_sweep_csv(std::ostream& os, const std::vector<int>& nx_values,
                     const std::vector<std::pair<double, double>>& cells,
                     const std::vector<std::vector<int>>& counts);

}  // namespace bfdarcy::cli
