#include "bfdarcy/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace bfdarcy {

namespace {

constexpr std::array<std::pair<BoundaryTag, std::string_view>, 8> kTagNames{{
    {BoundaryTag::gb_left, "GB_LEFT"},
    {BoundaryTag::gb_top, "GB_TOP"},
    {BoundaryTag::gb_right, "GB_RIGHT"},
    {BoundaryTag::gd_left, "GD_LEFT"},
    {BoundaryTag::gd_bottom, "GD_BOTTOM"},
    {BoundaryTag::gd_right, "GD_RIGHT"},
    {BoundaryTag::sigma, "SIGMA"},
    {BoundaryTag::none, "NONE"},
}};

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

}  // namespace

std::string_view to_string(BoundaryTag tag) {
  for (const auto& [t, name] : kTagNames) {
    if (t == tag) return name;
  }
  return "NONE";
}

std::optional<BoundaryTag> parse_boundary_tag(std::string_view s) {
  for (const auto& [t, name] : kTagNames) {
    if (name == s && t != BoundaryTag::none) return t;
  }
  return std::nullopt;
}

bool is_brinkman_boundary(BoundaryTag tag) {
  return tag == BoundaryTag::gb_left || tag == BoundaryTag::gb_top ||
         tag == BoundaryTag::gb_right;
}

bool is_darcy_boundary(BoundaryTag tag) {
  return tag == BoundaryTag::gd_left || tag == BoundaryTag::gd_bottom ||
         tag == BoundaryTag::gd_right;
}

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles,
           std::vector<TaggedEdge> tagged_edges)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const int nv = num_vertices();
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& v = triangles_[t].v;
    for (int i : v) {
      if (i < 0 || i >= nv) {
        throw Error(ErrorCode::mesh_format,
                    "triangle " + std::to_string(t) + " references missing vertex " +
                        std::to_string(i));
      }
    }
    if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2]) {
      throw Error(ErrorCode::mesh_format,
                  "triangle " + std::to_string(t) + " has repeated vertices");
    }
    if (signed_area(vertices_[v[0]], vertices_[v[1]], vertices_[v[2]]) <= 0.0) {
      throw Error(ErrorCode::inverted_triangle,
                  "triangle " + std::to_string(t) + " has negative area (clockwise or degenerate)");
    }
  }

  std::unordered_map<std::uint64_t, int> lookup;
  lookup.reserve(triangles_.size() * 2);
  tri_edges_.resize(triangles_.size());
  tri_signs_.resize(triangles_.size());
  for (int t = 0; t < num_triangles(); ++t) {
    const auto& v = triangles_[t].v;
    for (int i = 0; i < 3; ++i) {
      const int a = v[(i + 1) % 3];
      const int b = v[(i + 2) % 3];
      auto [it, inserted] = lookup.try_emplace(edge_key(a, b), num_edges());
      if (inserted) {
        edges_.push_back({std::min(a, b), std::max(a, b)});
        edge_tris_.push_back({t, -1});
        tri_signs_[t][i] = 1;
      } else {
        auto& tris = edge_tris_[it->second];
        if (tris[1] != -1) {
          throw Error(ErrorCode::mesh_format, "edge (" + std::to_string(a) + "," +
                                                  std::to_string(b) +
                                                  ") is shared by more than two triangles");
        }
        tris[1] = t;
        tri_signs_[t][i] = -1;
      }
      tri_edges_[t][i] = it->second;
    }
  }

  edge_normals_.resize(edges_.size());
  for (int e = 0; e < num_edges(); ++e) {
    const int t = edge_tris_[e][0];
    const auto& v = triangles_[t].v;
    int local = 0;
    while (tri_edges_[t][local] != e) ++local;
    const Vec2 d = vertices_[v[(local + 2) % 3]] - vertices_[v[(local + 1) % 3]];
    edge_normals_[e] = Vec2(d.y(), -d.x()).normalized();
  }

  edge_tags_.assign(edges_.size(), BoundaryTag::none);
  for (const auto& te : tagged_edges) {
    const auto it = lookup.find(edge_key(te.a, te.b));
    if (te.tag == BoundaryTag::sigma) {
      if (it == lookup.end()) {
        throw Error(ErrorCode::non_matching_interface,
                    "non-matching interface: SIGMA edge (" + std::to_string(te.a) + "," +
                        std::to_string(te.b) + ") is not an edge of the mesh");
      }
      const auto& tris = edge_tris_[it->second];
      if (tris[1] == -1 || triangles_[tris[0]].region == triangles_[tris[1]].region) {
        throw Error(ErrorCode::non_matching_interface,
                    "non-matching interface: SIGMA edge (" + std::to_string(te.a) + "," +
                        std::to_string(te.b) + ") is not shared by a B and a D triangle");
      }
    } else {
      if (it == lookup.end()) {
        throw Error(ErrorCode::mesh_format, "tagged edge (" + std::to_string(te.a) + "," +
                                                std::to_string(te.b) + ") is not a mesh edge");
      }
      const auto& tris = edge_tris_[it->second];
      if (tris[1] != -1) {
        throw Error(ErrorCode::mesh_format, "boundary tag on interior edge (" +
                                                std::to_string(te.a) + "," +
                                                std::to_string(te.b) + ")");
      }
      const Region r = triangles_[tris[0]].region;
      if ((r == Region::brinkman) != is_brinkman_boundary(te.tag)) {
        throw Error(ErrorCode::mesh_format,
                    "tag " + std::string(to_string(te.tag)) + " on an edge of the wrong region");
      }
    }
    edge_tags_[it->second] = te.tag;
  }

  for (int e = 0; e < num_edges(); ++e) {
    const auto& tris = edge_tris_[e];
    if (tris[1] != -1 && triangles_[tris[0]].region != triangles_[tris[1]].region &&
        edge_tags_[e] != BoundaryTag::sigma) {
      throw Error(ErrorCode::non_matching_interface,
                  "non-matching interface: edge between B and D is not tagged SIGMA");
    }
  }
  bool has_sigma = false;
  for (int e = 0; e < num_edges(); ++e) {
    if (edge_tags_[e] == BoundaryTag::sigma) has_sigma = true;
    if (edge_tris_[e][1] == -1 && edge_tags_[e] == BoundaryTag::none) {
      throw Error(ErrorCode::mesh_format, "untagged boundary edge (" +
                                              std::to_string(edges_[e][0]) + "," +
                                              std::to_string(edges_[e][1]) + ")");
    }
  }
  if (!has_sigma) {
    throw Error(ErrorCode::non_matching_interface, "non-matching interface: Sigma is empty");
  }

  for (int e = 0; e < num_edges(); ++e) {
    const double len = edge_length(e);
    for (int t : edge_tris_[e]) {
      if (t < 0) continue;
      if (triangles_[t].region == Region::brinkman) {
        h_b_ = std::max(h_b_, len);
      } else {
        h_d_ = std::max(h_d_, len);
      }
    }
    if (edge_tags_[e] == BoundaryTag::sigma) h_sigma_ = std::max(h_sigma_, len);
  }
}

double Mesh::edge_length(int e) const {
  return (vertices_[edges_[e][1]] - vertices_[edges_[e][0]]).norm();
}

double Mesh::area(int t) const {
  const auto& v = triangles_[t].v;
  return signed_area(vertices_[v[0]], vertices_[v[1]], vertices_[v[2]]);
}

std::vector<TaggedEdge> Mesh::tagged_edges() const {
  std::vector<TaggedEdge> out;
  for (int e = 0; e < num_edges(); ++e) {
    if (edge_tags_[e] != BoundaryTag::none) out.push_back({edges_[e][0], edges_[e][1], edge_tags_[e]});
  }
  return out;
}

Mesh generate_stacked_rect(const StackedGeometry& g, int nx, int ny_b, int ny_d,
                           MeshPattern pattern) {
  if (nx < 2 || nx % 2 != 0) {
    throw Error(ErrorCode::odd_interface,
                "interface edge count must be even (nx = " + std::to_string(nx) + ")");
  }
  if (ny_b < 1 || ny_d < 1) {
    throw Error(ErrorCode::invalid_argument, "vertical subdivision counts must be positive");
  }
  if (!(g.x_max > g.x_min) || !(g.y_top > g.y_interface) || !(g.y_interface > g.y_bottom)) {
    throw Error(ErrorCode::invalid_argument, "degenerate rectangle in stacked geometry");
  }

  const int rows = ny_d + ny_b;
  auto y_of = [&](int j) {
    if (j <= ny_d) return g.y_bottom + (g.y_interface - g.y_bottom) * j / ny_d;
    return g.y_interface + (g.y_top - g.y_interface) * (j - ny_d) / ny_b;
  };
  auto x_of = [&](int i) { return g.x_min + (g.x_max - g.x_min) * i / nx; };
  auto node = [&](int i, int j) { return j * (nx + 1) + i; };

  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>((nx + 1) * (rows + 1) + nx * rows));
  for (int j = 0; j <= rows; ++j) {
    for (int i = 0; i <= nx; ++i) vertices.emplace_back(x_of(i), y_of(j));
  }
  // Cell centres for the crisscross pattern follow the grid nodes.
  const int centre0 = static_cast<int>(vertices.size());
  if (pattern == MeshPattern::crisscross) {
    for (int j = 0; j < rows; ++j) {
      for (int i = 0; i < nx; ++i) {
        vertices.emplace_back(0.5 * (x_of(i) + x_of(i + 1)), 0.5 * (y_of(j) + y_of(j + 1)));
      }
    }
  }

  std::vector<Triangle> triangles;
  for (int j = 0; j < rows; ++j) {
    const Region r = j < ny_d ? Region::darcy : Region::brinkman;
    for (int i = 0; i < nx; ++i) {
      const int a = node(i, j), b = node(i + 1, j), c = node(i + 1, j + 1), d = node(i, j + 1);
      if (pattern == MeshPattern::right_diagonal) {
        triangles.push_back({{a, b, c}, r});
        triangles.push_back({{a, c, d}, r});
      } else {
        const int m = centre0 + j * nx + i;
        triangles.push_back({{a, b, m}, r});
        triangles.push_back({{b, c, m}, r});
        triangles.push_back({{c, d, m}, r});
        triangles.push_back({{d, a, m}, r});
      }
    }
  }

  std::vector<TaggedEdge> tagged;
  for (int i = 0; i < nx; ++i) {
    tagged.push_back({node(i, 0), node(i + 1, 0), BoundaryTag::gd_bottom});
    tagged.push_back({node(i, ny_d), node(i + 1, ny_d), BoundaryTag::sigma});
    tagged.push_back({node(i, rows), node(i + 1, rows), BoundaryTag::gb_top});
  }
  for (int j = 0; j < rows; ++j) {
    const bool darcy = j < ny_d;
    tagged.push_back({node(0, j), node(0, j + 1),
                      darcy ? BoundaryTag::gd_left : BoundaryTag::gb_left});
    tagged.push_back({node(nx, j), node(nx, j + 1),
                      darcy ? BoundaryTag::gd_right : BoundaryTag::gb_right});
  }
  return Mesh(std::move(vertices), std::move(triangles), std::move(tagged));
}

InterfaceData build_interface(const Mesh& mesh) {
  std::vector<int> sigma;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge_tag(e) == BoundaryTag::sigma) sigma.push_back(e);
  }
  if (sigma.empty()) {
    throw Error(ErrorCode::non_matching_interface, "mesh has no interface edges");
  }
  if (sigma.size() % 2 != 0) {
    throw Error(ErrorCode::odd_interface, "interface edge count must be even (got " +
                                              std::to_string(sigma.size()) + ")");
  }

  std::map<int, std::vector<int>> incident;
  for (int e : sigma) {
    incident[mesh.edge(e)[0]].push_back(e);
    incident[mesh.edge(e)[1]].push_back(e);
  }
  int start = -1;
  for (const auto& [v, es] : incident) {
    if (es.size() > 2) {
      throw Error(ErrorCode::non_matching_interface, "interface is not a simple chain");
    }
    if (es.size() == 1) {
      const Vec2& p = mesh.vertex(v);
      if (start < 0 || p.x() < mesh.vertex(start).x() ||
          (p.x() == mesh.vertex(start).x() && p.y() < mesh.vertex(start).y())) {
        start = v;
      }
    }
  }
  if (start < 0) {
    throw Error(ErrorCode::non_matching_interface, "interface is a closed curve");
  }

  InterfaceData out;
  std::vector<bool> used(static_cast<std::size_t>(mesh.num_edges()), false);
  int current = start;
  std::vector<int> chain{start};
  while (true) {
    int next_edge = -1;
    for (int e : incident[current]) {
      if (!used[e]) next_edge = e;
    }
    if (next_edge < 0) break;
    used[next_edge] = true;
    const auto& ev = mesh.edge(next_edge);
    const int other = ev[0] == current ? ev[1] : ev[0];

    InterfaceData::SigmaEdge se{};
    se.edge = next_edge;
    const auto& tris = mesh.edge_triangles(next_edge);
    const bool first_is_b = mesh.region(tris[0]) == Region::brinkman;
    se.brinkman_triangle = first_is_b ? tris[0] : tris[1];
    se.darcy_triangle = first_is_b ? tris[1] : tris[0];
    se.start_vertex = current;
    se.end_vertex = other;
    const int k = static_cast<int>(out.edges.size());
    se.macro = k / 2;
    se.second_half = (k % 2) == 1;
    // Global normal points out of tris[0].
    se.normal = first_is_b ? mesh.edge_normal(next_edge) : Vec2(-mesh.edge_normal(next_edge));
    out.edges.push_back(se);
    chain.push_back(other);
    current = other;
  }
  if (out.edges.size() != sigma.size()) {
    throw Error(ErrorCode::non_matching_interface, "interface is not connected");
  }
  for (std::size_t i = 0; i < chain.size(); i += 2) out.nodes.push_back(chain[i]);
  out.normal = out.edges.front().normal;
  return out;
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::io, "cannot open " + path.string() + " for writing");
  const auto tagged = mesh.tagged_edges();
  os << "bfdarcy-mesh v1\n";
  os << mesh.num_vertices() << ' ' << mesh.num_triangles() << ' ' << tagged.size() << '\n';
  char buf[96];
  for (const auto& v : mesh.vertices()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.x(), v.y());
    os << buf;
  }
  for (const auto& t : mesh.triangles()) {
    os << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << ' '
       << (t.region == Region::brinkman ? "B" : "D") << '\n';
  }
  for (const auto& te : tagged) os << te.a << ' ' << te.b << ' ' << to_string(te.tag) << '\n';
  if (!os) throw Error(ErrorCode::io, "write failed for " + path.string());
}

Mesh load_mesh(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::io, "cannot open " + path.string());
  std::string line;
  auto next_line = [&](const char* what) {
    while (std::getline(is, line)) {
      if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) return;
    }
    throw Error(ErrorCode::mesh_format, std::string("unexpected end of file reading ") + what);
  };
  next_line("header");
  if (line.rfind("bfdarcy-mesh v1", 0) != 0) {
    throw Error(ErrorCode::mesh_format, "missing 'bfdarcy-mesh v1' header");
  }
  next_line("counts");
  long nv = -1, nt = -1, ne = -1;
  {
    std::istringstream ss(line);
    if (!(ss >> nv >> nt >> ne) || nv < 3 || nt < 1 || ne < 0) {
      throw Error(ErrorCode::mesh_format, "malformed counts line: " + line);
    }
  }
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(nv));
  for (long i = 0; i < nv; ++i) {
    next_line("vertices");
    std::istringstream ss(line);
    double x, y;
    if (!(ss >> x >> y)) throw Error(ErrorCode::mesh_format, "malformed vertex line: " + line);
    vertices.emplace_back(x, y);
  }
  std::vector<Triangle> triangles;
  triangles.reserve(static_cast<std::size_t>(nt));
  for (long i = 0; i < nt; ++i) {
    next_line("triangles");
    std::istringstream ss(line);
    int a, b, c;
    std::string tag;
    if (!(ss >> a >> b >> c >> tag) || (tag != "B" && tag != "D")) {
      throw Error(ErrorCode::mesh_format, "malformed triangle line: " + line);
    }
    triangles.push_back({{a, b, c}, tag == "B" ? Region::brinkman : Region::darcy});
  }
  std::vector<TaggedEdge> tagged;
  for (long i = 0; i < ne; ++i) {
    next_line("boundary edges");
    std::istringstream ss(line);
    int a, b;
    std::string tag;
    if (!(ss >> a >> b >> tag)) throw Error(ErrorCode::mesh_format, "malformed edge line: " + line);
    const auto parsed = parse_boundary_tag(tag);
    if (!parsed) throw Error(ErrorCode::mesh_format, "unknown edge tag '" + tag + "'");
    if (a < 0 || b < 0 || a >= nv || b >= nv) {
      throw Error(ErrorCode::mesh_format, "edge line references missing vertex: " + line);
    }
    tagged.push_back({a, b, *parsed});
  }
  return Mesh(std::move(vertices), std::move(triangles), std::move(tagged));
}

}  // namespace bfdarcy
