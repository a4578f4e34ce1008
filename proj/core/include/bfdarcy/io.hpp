#pragma once

#include <filesystem>
#include <ostream>

#include "bfdarcy/solver.hpp"

namespace bfdarcy {

/// Legacy ASCII unstructured grid: u_B at vertices (nodal part of the
/// Bernardi-Raugel field, zero at Darcy-only vertices), u_D as RT0 cell
/// averages, pressure and region id as cell data.
void write_vtk_fields(std::ostream& os, const Discretization& disc, const SolutionFields& solution);

/// Legacy ASCII polydata with one polyline along Sigma_h and lambda_h as
/// point data.
void write_vtk_lambda(std::ostream& os, const Discretization& disc, const SolutionFields& solution);

/// Writes `<stem>.vtk` and `<stem>_lambda.vtk`; throws Error(io).
void write_vtk(const std::filesystem::path& stem, const Discretization& disc,
               const SolutionFields& solution);

}  // namespace bfdarcy
