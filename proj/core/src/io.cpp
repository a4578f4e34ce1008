#include "bfdarcy/io.hpp"

#include <fstream>
#include <iomanip>

namespace bfdarcy {

namespace {

std::ofstream open_or_throw(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
  os << std::setprecision(12);
  return os;
}

}  // namespace

void write_vtk_fields(std::ostream& os, const Discretization& disc, const SolutionFields& sol) {
  const Mesh& mesh = disc.mesh();
  const int nv = mesh.num_vertices();
  const int nt = mesh.num_triangles();
  os << "# vtk DataFile Version 3.0\n"
     << "bfdarcy fields\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << nv << " double\n";
  for (int i = 0; i < nv; ++i) os << mesh.vertex(i).x() << ' ' << mesh.vertex(i).y() << " 0\n";
  os << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (int t = 0; t < nt; ++t) {
    const auto& v = mesh.triangle(t).v;
    os << "3 " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  }
  os << "CELL_TYPES " << nt << '\n';
  for (int t = 0; t < nt; ++t) os << "5\n";

  const Vector ub = sol.u_brinkman();
  os << "POINT_DATA " << nv << "\nVECTORS u_B double\n";
  for (int i = 0; i < nv; ++i) {
    const int dx = disc.br().vertex_dof(i, 0);
    const int dy = disc.br().vertex_dof(i, 1);
    os << (dx < 0 ? 0.0 : ub[dx]) << ' ' << (dy < 0 ? 0.0 : ub[dy]) << " 0\n";
  }

  const Vector ud = sol.u_darcy();
  const std::span<const double> uds(ud.data(), static_cast<std::size_t>(ud.size()));
  const Vector p = sol.pressure();
  os << "CELL_DATA " << nt << "\nVECTORS u_D double\n";
  for (int t = 0; t < nt; ++t) {
    Vec2 avg = Vec2::Zero();
    if (mesh.region(t) == Region::darcy) {
      const TriangleGeometry g(mesh, t);
      // RT0 fields are affine, so the centroid value is the cell average.
      avg = eval_rt0_field(disc.rt(), uds, t, (g.p[0] + g.p[1] + g.p[2]) / 3.0);
    }
    os << avg.x() << ' ' << avg.y() << " 0\n";
  }
  os << "SCALARS p double 1\nLOOKUP_TABLE default\n";
  for (int t = 0; t < nt; ++t) os << p[t] << '\n';
  os << "SCALARS region int 1\nLOOKUP_TABLE default\n";
  for (int t = 0; t < nt; ++t) os << (mesh.region(t) == Region::brinkman ? 0 : 1) << '\n';
}

void write_vtk_lambda(std::ostream& os, const Discretization& disc, const SolutionFields& sol) {
  const Mesh& mesh = disc.mesh();
  const auto& iface = disc.interface();
  const Vector lam = sol.lambda();
  const std::size_t ne = iface.edges.size();
  std::vector<Vec2> pts;
  std::vector<double> vals;
  for (std::size_t k = 0; k < ne; ++k) {
    const auto hats = disc.multiplier().eval(static_cast<int>(k), 0.0);
    pts.push_back(mesh.vertex(iface.edges[k].start_vertex));
    vals.push_back(lam[hats.node[0]] * hats.value[0] + lam[hats.node[1]] * hats.value[1]);
  }
  if (ne > 0) {
    const auto hats = disc.multiplier().eval(static_cast<int>(ne - 1), 1.0);
    pts.push_back(mesh.vertex(iface.edges[ne - 1].end_vertex));
    vals.push_back(lam[hats.node[0]] * hats.value[0] + lam[hats.node[1]] * hats.value[1]);
  }
  os << "# vtk DataFile Version 3.0\n"
     << "bfdarcy interface multiplier\nASCII\nDATASET POLYDATA\n";
  os << "POINTS " << pts.size() << " double\n";
  for (const auto& x : pts) os << x.x() << ' ' << x.y() << " 0\n";
  os << "LINES 1 " << pts.size() + 1 << '\n' << pts.size();
  for (std::size_t i = 0; i < pts.size(); ++i) os << ' ' << i;
  os << "\nPOINT_DATA " << pts.size() << "\nSCALARS lambda double 1\nLOOKUP_TABLE default\n";
  for (double v : vals) os << v << '\n';
}

void write_vtk(const std::filesystem::path& stem, const Discretization& disc,
               const SolutionFields& solution) {
  {
    auto os = open_or_throw(stem.string() + ".vtk");
    write_vtk_fields(os, disc, solution);
    if (!os) throw Error(ErrorCode::io, "write failed for " + stem.string() + ".vtk");
  }
  auto os = open_or_throw(stem.string() + "_lambda.vtk");
  write_vtk_lambda(os, disc, solution);
  if (!os) throw Error(ErrorCode::io, "write failed for " + stem.string() + "_lambda.vtk");
}

}  // namespace bfdarcy
