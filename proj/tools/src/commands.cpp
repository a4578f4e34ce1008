#include "bfdarcy_cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <thread>

#include "bfdarcy/io.hpp"

namespace bfdarcy::cli {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
  return os;
}

std::filesystem::path output_path(const std::string& configured, const CommandOptions& opts,
                                  const char* fallback) {
  return configured.empty() ? opts.out_dir / fallback : std::filesystem::path(configured);
}

// Bounding box of each region, read back as the stacked geometry.
StackedGeometry geometry_of(const Mesh& mesh) {
  double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
  double top = -1e300;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int v : mesh.triangle(t).v) {
      const Vec2& x = mesh.vertex(v);
      if (mesh.region(t) == Region::darcy) {
        lo[0] = std::min(lo[0], x.x());
        lo[1] = std::min(lo[1], x.y());
        hi[0] = std::max(hi[0], x.x());
        hi[1] = std::max(hi[1], x.y());
      } else {
        top = std::max(top, x.y());
      }
    }
  }
  return {lo[0], hi[0], lo[1], hi[1], top};
}

int sweep_nx(int level) { return 4 << level; }

struct Run {
  Mesh mesh;
  ProblemSetup setup;
  std::unique_ptr<Discretization> disc;
  NewtonResult result;
};

Run run_once(const RunConfig& config, const PhysicalParams& params, int nx) {
  Mesh mesh = build_mesh(config, nx);
  ProblemSetup setup = build_problem(config, mesh, params);
  auto disc = std::make_unique<Discretization>(mesh, setup.data, setup.mode);
  NewtonOptions opts;
  opts.tol = config.tol;
  opts.max_iter = config.max_iter;
  opts.initial = config.initial;
  NewtonResult result = newton_solve(*disc, params, setup.data, opts);
  return {std::move(mesh), std::move(setup), std::move(disc), std::move(result)};
}

int fail(std::ostream& err, int code, const std::string& what) {
  err << "error: " << what << '\n';
  return code;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::singular_system:
      return exit_solver;
    case ErrorCode::io:
    case ErrorCode::mesh_format:
    case ErrorCode::inverted_triangle:
    case ErrorCode::non_matching_interface:
      return exit_io;
    case ErrorCode::invalid_argument:
    case ErrorCode::odd_interface:
    case ErrorCode::config:
      return exit_usage;
  }
  return exit_usage;
}

Mesh build_mesh(const RunConfig& config, int nx) {
  if (!config.mesh_path.empty()) return load_mesh(config.mesh_path);
  if (config.data_set() == Problem::example2) {
    const int ny = std::max(1, nx / 2);
    return generate_stacked_rect(example2_geometry(), nx, config.ny_brinkman ? config.ny_brinkman : ny,
                                 config.ny_darcy ? config.ny_darcy : ny, config.pattern);
  }
  return generate_stacked_rect(example1_geometry(), nx, config.ny_brinkman ? config.ny_brinkman : nx,
                               config.ny_darcy ? config.ny_darcy : nx, config.pattern);
}

ProblemSetup build_problem(const RunConfig& config, const Mesh& mesh, const PhysicalParams& params) {
  ProblemSetup s;
  if (config.data_set() == Problem::example2) {
    s.data = example2_data();
    s.mode = ConstraintMode::none;
  } else {
    auto mp = manufactured_example1(geometry_of(mesh), params);
    s.data = std::move(mp.data);
    s.exact = std::move(mp.exact);
    s.mode = ConstraintMode::exact;
  }
  if (config.constraint_set) s.mode = config.constraint;
  return s;
}

int cmd_solve(const RunConfig& config, const CommandOptions& opts, std::ostream& out,
              std::ostream& err) {
  try {
    const PhysicalParams params = config.params();
    Run run = run_once(config, params, config.nx);
    const auto& rep = run.result.report;
    ErrorReport row;
    if (run.setup.exact) {
      row = compute_errors(*run.disc, run.result.solution, *run.setup.exact);
    } else {
      row.h_brinkman = run.mesh.h_brinkman();
      row.h_darcy = run.mesh.h_darcy();
      row.h_sigma = run.mesh.h_sigma();
      row.dofs = rep.dofs;
    }
    row.iterations = rep.iterations;

    if (!opts.quiet) {
      out << "triangles: " << run.mesh.num_triangles() << '\n'
          << "dofs: " << rep.dofs << '\n'
          << "iterations: " << rep.iterations << '\n'
          << "converged: " << (rep.converged ? "yes" : "no") << '\n'
          << "max |u.n| on Sigma: " << max_interface_normal_velocity(*run.disc, run.result.solution) << '\n';
      if (config.verbose) {
        char buf[64];
        for (std::size_t k = 0; k < rep.increments.size(); ++k) {
          std::snprintf(buf, sizeof buf, "increment %zu: %.3e\n", k + 1, rep.increments[k]);
          out << buf;
        }
      }
      if (run.setup.exact) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "e_uB %.4e  e_pB %.4e  e_uD %.4e  e_pD %.4e  e_lam %.4e\n",
                      row.e_u_brinkman, row.e_p_brinkman, row.e_u_darcy, row.e_p_darcy, row.e_lambda);
        out << buf;
      }
    }
    auto csv = open_output(output_path(config.csv, opts, "solve.csv"));
    write_convergence_csv(csv, std::span<const ErrorReport>(&row, 1), run.setup.exact.has_value());
    if (opts.vtk || !config.vtk.empty()) {
      write_vtk(output_path(config.vtk, opts, "solution"), *run.disc, run.result.solution);
    }
    if (!rep.converged) return fail(err, exit_solver, rep.message);
    return exit_ok;
  } catch (const Error& e) {
    return fail(err, exit_code_for(e.code()), e.what());
  }
}

int cmd_convergence(const RunConfig& config, const CommandOptions& opts, std::ostream& out,
                    std::ostream& err) {
  const int levels = opts.levels > 0 ? opts.levels : config.levels;
  if (levels < 3) return fail(err, exit_usage, "need ≥ 3 levels");
  if (config.data_set() != Problem::example1) {
    return fail(err, exit_usage, "convergence needs the manufactured problem (example1)");
  }
  if (!config.mesh_path.empty()) return fail(err, exit_usage, "convergence refines generated meshes only");
  std::vector<ErrorReport> rows;
  auto flush = [&]() {
    try {
      auto csv = open_output(output_path(config.csv, opts, "convergence.csv"));
      write_convergence_csv(csv, rows);
    } catch (const Error& e) {
      return fail(err, exit_io, e.what());
    }
    if (!opts.quiet) write_convergence_csv(out, rows);
    return int{exit_ok};
  };
  try {
    const PhysicalParams params = config.params();
    for (int level = 0; level < levels; ++level) {
      Run run = run_once(config, params, sweep_nx(level));
      ErrorReport row = compute_errors(*run.disc, run.result.solution, *run.setup.exact);
      row.iterations = run.result.report.iterations;
      rows.push_back(row);
      if (!run.result.report.converged) {
        flush();
        return fail(err, exit_solver, run.result.report.message + " at level " + std::to_string(level + 1));
      }
    }
  } catch (const Error& e) {
    flush();
    return fail(err, exit_code_for(e.code()), e.what());
  }
  return flush();
}

void write_sweep_csv(std::ostream& os, const std::vector<int>& nx_values,
                     const std::vector<std::pair<double, double>>& cells,
                     const std::vector<std::vector<int>>& counts) {
  os << "F,K_D";
  for (int nx : nx_values) os << ",nx=" << nx;
  os << '\n';
  char buf[64];
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%g,%g", cells[i].first, cells[i].second);
    os << buf;
    for (int c : counts[i]) os << ',' << c;
    os << '\n';
  }
}

int cmd_sweep(const RunConfig& config, const CommandOptions& opts, std::ostream& out,
              std::ostream& err) {
  if (config.forchheimer_list.empty()) return fail(err, exit_usage, "forchheimer_list is empty");
  if (config.k_darcy_list.empty()) return fail(err, exit_usage, "k_darcy_list is empty");
  const int levels = opts.levels > 0 ? opts.levels : config.levels;
  if (levels < 1) return fail(err, exit_usage, "need >= 1 level");
  if (!config.mesh_path.empty()) return fail(err, exit_usage, "sweep refines generated meshes only");

  std::vector<int> nx_values;
  for (int l = 0; l < levels; ++l) nx_values.push_back(sweep_nx(l));
  std::vector<std::pair<double, double>> cells;
  for (double f : config.forchheimer_list) {
    for (double k : config.k_darcy_list) cells.emplace_back(f, k);
  }

  // Every (cell, mesh) job writes its own slot, so the table does not
  // depend on scheduling.
  std::vector<std::vector<int>> counts(cells.size(), std::vector<int>(nx_values.size(), 0));
  struct Job { std::size_t cell, level; };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t l = 0; l < nx_values.size(); ++l) jobs.push_back({c, l});
  }
  const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
  try {
    for (std::size_t start = 0; start < jobs.size(); start += width) {
      std::vector<std::future<void>> batch;
      for (std::size_t j = start; j < std::min(jobs.size(), start + width); ++j) {
        batch.push_back(std::async(std::launch::async, [&, job = jobs[j]] {
          RunConfig local = config;
          local.forchheimer = cells[job.cell].first;
          local.k_darcy = cells[job.cell].second * Mat2::Identity();
          Run run = run_once(local, local.params(), nx_values[job.level]);
          counts[job.cell][job.level] =
              run.result.report.converged ? run.result.report.iterations : -1;
        }));
      }
      for (auto& f : batch) f.get();
    }
  } catch (const Error& e) {
    return fail(err, exit_code_for(e.code()), e.what());
  }
  try {
    auto csv = open_output(output_path(config.csv, opts, "sweep.csv"));
    write_sweep_csv(csv, nx_values, cells, counts);
  } catch (const Error& e) {
    return fail(err, exit_io, e.what());
  }
  if (!opts.quiet) write_sweep_csv(out, nx_values, cells, counts);
  for (const auto& row : counts) {
    if (std::find(row.begin(), row.end(), -1) != row.end()) {
      return fail(err, exit_solver, "Newton did not converge in some sweep cells (marked -1)");
    }
  }
  return exit_ok;
}

int cmd_mesh_gen(const RunConfig& config, const CommandOptions& opts, std::ostream& out,
                 std::ostream& err) {
  try {
    const Mesh mesh = build_mesh(config, config.nx);
    const auto path = opts.out_dir / "mesh.txt";
    std::error_code ec;
    std::filesystem::create_directories(opts.out_dir, ec);
    save_mesh(mesh, path.string());
    if (!opts.quiet) {
      out << "wrote " << path.string() << ": " << mesh.num_vertices() << " vertices, "
          << mesh.num_triangles() << " triangles\n";
    }
    return exit_ok;
  } catch (const Error& e) {
    return fail(err, exit_code_for(e.code()), e.what());
  }
}

}  // namespace bfdarcy::cli
