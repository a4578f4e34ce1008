#include <iostream>

#include <CLI11.hpp>

#include "bfdarcy_cli/commands.hpp"

using namespace bfdarcy;
using namespace bfdarcy::cli;

int main(int argc, char** argv) {
  CLI::App app{"Brinkman-Forchheimer/Darcy mixed finite element solver"};
  app.require_subcommand(1);

  std::string config_path;
  CommandOptions opts;
  std::string out_dir = ".";
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", config_path, "Run configuration (key = value)");
    if (config_required) c->required();
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_flag("--quiet", opts.quiet, "Suppress the summary on standard output");
  };
  auto* solve = app.add_subcommand("solve", "Solve one problem and export the fields");
  add_common(solve, true);
  solve->add_flag("--vtk", opts.vtk, "Write VTK files");
  auto* conv = app.add_subcommand("convergence", "Convergence study on nx = 4, 8, 16, ...");
  add_common(conv, true);
  conv->add_option("--levels", opts.levels, "Number of refinement levels");
  auto* sweep = app.add_subcommand("sweep", "Newton iteration counts over F and K_D");
  add_common(sweep, true);
  sweep->add_option("--levels", opts.levels, "Number of meshes");
  auto* gen = app.add_subcommand("mesh-gen", "Write the configured mesh to <out>/mesh.txt");
  add_common(gen, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_usage;
  }
  opts.out_dir = out_dir;

  RunConfig config;
  try {
    if (!config_path.empty()) config = load_config(config_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }

  if (*solve) return cmd_solve(config, opts, std::cout, std::cerr);
  if (*conv) return cmd_convergence(config, opts, std::cout, std::cerr);
  if (*sweep) return cmd_sweep(config, opts, std::cout, std::cerr);
  return cmd_mesh_gen(config, opts, std::cout, std::cerr);
}
