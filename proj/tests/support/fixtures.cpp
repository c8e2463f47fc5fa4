#include "support/fixtures.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>

namespace fix {

using armesh::Cell;
using armesh::CellType;
using armesh::Rgba8;
using armesh::SurfaceMesh;
using armesh::Tri;
using armesh::UnstructuredGrid;
using armesh::Vec3;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(std::uint8_t(v >> 24));
  out.push_back(std::uint8_t(v >> 16));
  out.push_back(std::uint8_t(v >> 8));
  out.push_back(std::uint8_t(v));
}

void be_float(std::vector<std::uint8_t>& out, float f) {
  std::uint32_t v;
  std::memcpy(&v, &f, 4);
  be32(out, v);
}

void text(std::vector<std::uint8_t>& out, const std::string& s) {
  out.insert(out.end(), s.begin(), s.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// VTK fixtures
// ---------------------------------------------------------------------------

std::string tetra_vtk_ascii() {
  return "# vtk DataFile Version 2.0\n"
         "tetra fixture\n"
         "ASCII\n"
         "DATASET UNSTRUCTURED_GRID\n"
         "POINTS 4 float\n"
         "0 0 0\n"
         "1 0 0\n"
         "0 1 0\n"
         "0 0 1\n"
         "CELLS 1 5\n"
         "4 0 1 2 3\n"
         "CELL_TYPES 1\n"
         "10\n"
         "POINT_DATA 4\n"
         "SCALARS stress float 1\n"
         "LOOKUP_TABLE default\n"
         "1.5 2.5 3.5 4.5\n";
}

std::vector<std::uint8_t> tetra_vtk_binary() {
  std::vector<std::uint8_t> out;
  text(out, "# vtk DataFile Version 2.0\n");
  text(out, "tetra fixture binary\n");
  text(out, "BINARY\n");
  text(out, "DATASET UNSTRUCTURED_GRID\n");
  text(out, "POINTS 4 float\n");
  const float pts[12] = {0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1};
  for (float f : pts) be_float(out, f);
  text(out, "\nCELLS 1 5\n");
  for (std::uint32_t v : {4u, 0u, 1u, 2u, 3u}) be32(out, v);
  text(out, "\nCELL_TYPES 1\n");
  be32(out, 10);
  text(out, "\nPOINT_DATA 4\n");
  text(out, "SCALARS stress float 1\n");
  text(out, "LOOKUP_TABLE default\n");
  for (float f : {1.5f, 2.5f, 3.5f, 4.5f}) be_float(out, f);
  text(out, "\n");
  return out;
}

std::string tetra_vtk_bad_index() {
  return "# vtk DataFile Version 2.0\n"
         "broken fixture\n"
         "ASCII\n"
         "DATASET UNSTRUCTURED_GRID\n"
         "POINTS 4 float\n"
         "0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
         "CELLS 1 5\n"
         "4 0 1 2 7\n"
         "CELL_TYPES 1\n"
         "10\n";
}

std::string hex_vtk_ascii() {
  return "# vtk DataFile Version 3.0\n"
         "hex fixture\n"
         "ASCII\n"
         "DATASET UNSTRUCTURED_GRID\n"
         "POINTS 8 float\n"
         "0 0 0\n1 0 0\n1 1 0\n0 1 0\n"
         "0 0 1\n1 0 1\n1 1 1\n0 1 1\n"
         "CELLS 1 9\n"
         "8 0 1 2 3 4 5 6 7\n"
         "CELL_TYPES 1\n"
         "12\n";
}

std::string tetra_vtk_offsets_ascii() {
  return "# vtk DataFile Version 5.1\n"
         "tetra fixture, offsets layout\n"
         "ASCII\n"
         "DATASET UNSTRUCTURED_GRID\n"
         "POINTS 4 float\n"
         "0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
         "CELLS 2 4\n"
         "OFFSETS vtktypeint64\n"
         "0 4\n"
         "CONNECTIVITY vtktypeint64\n"
         "0 1 2 3\n"
         "CELL_TYPES 1\n"
         "10\n"
         "POINT_DATA 4\n"
         "SCALARS stress float 1\n"
         "LOOKUP_TABLE default\n"
         "1.5 2.5 3.5 4.5\n";
}

std::string quad_shell_vtk_ascii(int nx, int ny) {
  std::string s;
  s += "# vtk DataFile Version 3.0\nshell fixture\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  int npx = nx + 1, npy = ny + 1;
  s += "POINTS " + std::to_string(npx * npy) + " double\n";
  for (int j = 0; j < npy; ++j)
    for (int i = 0; i < npx; ++i) {
      double x = double(i), y = double(j);
      double z = 0.1 * std::sin(0.7 * x) * std::cos(0.5 * y);
      s += num(x) + " " + num(y) + " " + num(z) + "\n";
    }
  s += "CELLS " + std::to_string(nx * ny) + " " + std::to_string(5 * nx * ny) + "\n";
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      int a = j * npx + i;
      s += "4 " + std::to_string(a) + " " + std::to_string(a + 1) + " " +
           std::to_string(a + 1 + npx) + " " + std::to_string(a + npx) + "\n";
    }
  s += "CELL_TYPES " + std::to_string(nx * ny) + "\n";
  for (int c = 0; c < nx * ny; ++c) s += "9\n";
  s += "POINT_DATA " + std::to_string(npx * npy) + "\n";
  s += "SCALARS deflection double 1\nLOOKUP_TABLE default\n";
  for (int j = 0; j < npy; ++j)
    for (int i = 0; i < npx; ++i)
      s += num(0.1 * std::sin(0.7 * i) * std::cos(0.5 * j)) + "\n";
  return s;
}

std::string fiber_line_vtk(int segments) {
  std::string s;
  s += "# vtk DataFile Version 3.0\nfiber fixture\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  int np = segments + 1;
  s += "POINTS " + std::to_string(np) + " double\n";
  for (int i = 0; i < np; ++i) {
    double x = double(i) / segments * 10.0;
    double y = 0.4 * std::sin(x * 1.8);
    s += num(x) + " " + num(y) + " 0\n";
  }
  s += "CELLS " + std::to_string(segments) + " " + std::to_string(3 * segments) + "\n";
  for (int i = 0; i < segments; ++i)
    s += "2 " + std::to_string(i) + " " + std::to_string(i + 1) + "\n";
  s += "CELL_TYPES " + std::to_string(segments) + "\n";
  for (int i = 0; i < segments; ++i) s += "3\n";
  s += "POINT_DATA " + std::to_string(np) + "\n";
  s += "SCALARS tension double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < np; ++i) s += num(std::abs(std::sin(double(i) / segments * 18.0))) + "\n";
  return s;
}

std::vector<std::string> beam_series_vtk(int frames, int nx, int ny, int nz) {
  std::vector<std::string> files;
  int npx = nx + 1, npy = ny + 1, npz = nz + 1;
  int np = npx * npy * npz;
  auto pid = [&](int i, int j, int k) { return (k * npy + j) * npx + i; };

  for (int f = 0; f < frames; ++f) {
    double amp = 0.002 * f;
    std::string s;
    s += "# vtk DataFile Version 3.0\nbending frame " + std::to_string(f) +
         "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    s += "FIELD FieldData 1\nTIME 1 1 double\n" + num(0.1 * f) + "\n";
    s += "POINTS " + std::to_string(np) + " double\n";
    for (int k = 0; k < npz; ++k)
      for (int j = 0; j < npy; ++j)
        for (int i = 0; i < npx; ++i) {
          double x = double(i), y = double(j), z = double(k);
          s += num(x) + " " + num(y) + " " + num(z + amp * x * x) + "\n";
        }
    int ncells = nx * ny * nz;
    s += "CELLS " + std::to_string(ncells) + " " + std::to_string(9 * ncells) + "\n";
    for (int k = 0; k < nz; ++k)
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          s += "8 " + std::to_string(pid(i, j, k)) + " " + std::to_string(pid(i + 1, j, k)) + " " +
               std::to_string(pid(i + 1, j + 1, k)) + " " + std::to_string(pid(i, j + 1, k)) + " " +
               std::to_string(pid(i, j, k + 1)) + " " + std::to_string(pid(i + 1, j, k + 1)) + " " +
               std::to_string(pid(i + 1, j + 1, k + 1)) + " " + std::to_string(pid(i, j + 1, k + 1)) +
               "\n";
        }
    s += "CELL_TYPES " + std::to_string(ncells) + "\n";
    for (int c = 0; c < ncells; ++c) s += "12\n";
    s += "POINT_DATA " + std::to_string(np) + "\n";
    s += "VECTORS displacement double\n";
    for (int k = 0; k < npz; ++k)
      for (int j = 0; j < npy; ++j)
        for (int i = 0; i < npx; ++i) s += "0 0 " + num(amp * double(i) * double(i)) + "\n";
    s += "SCALARS stress double 1\nLOOKUP_TABLE default\n";
    for (int k = 0; k < npz; ++k)
      for (int j = 0; j < npy; ++j)
        for (int i = 0; i < npx; ++i) s += num(amp * (nx - double(i))) + "\n";
    files.push_back(std::move(s));
  }
  return files;
}

// ---------------------------------------------------------------------------
// Direct geometry
// ---------------------------------------------------------------------------

SurfaceMesh unit_quad_mesh() {
  SurfaceMesh m;
  m.positions = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  m.triangles = {{0, 1, 2}, {0, 2, 3}};
  return armesh::compute_vertex_normals(std::move(m));
}

SurfaceMesh unit_cube_mesh(double edge, Vec3 center) {
  SurfaceMesh m;
  double h = edge / 2.0;
  for (int i = 0; i < 8; ++i) {
    m.positions.push_back({center.x + ((i & 1) ? h : -h), center.y + ((i & 2) ? h : -h),
                           center.z + ((i & 4) ? h : -h)});
  }
  // Faces as corner quadruples; orientation fixed below by an outward test.
  const int faces[6][4] = {
      {0, 2, 6, 4},  // -x
      {1, 3, 7, 5},  // +x
      {0, 1, 5, 4},  // -y
      {2, 3, 7, 6},  // +y
      {0, 1, 3, 2},  // -z
      {4, 5, 7, 6},  // +z
  };
  auto parity = [](int i) { return ((i & 1) + ((i >> 1) & 1) + ((i >> 2) & 1)) % 2; };
  for (const auto& f : faces) {
    // Rotate so an even-parity corner leads; the (v0,v2) diagonal then joins
    // the two even corners of the face.
    std::array<int, 4> q{f[0], f[1], f[2], f[3]};
    while (parity(q[0]) != 0) std::rotate(q.begin(), q.begin() + 1, q.end());
    Tri t1{std::uint32_t(q[0]), std::uint32_t(q[1]), std::uint32_t(q[2])};
    Tri t2{std::uint32_t(q[0]), std::uint32_t(q[2]), std::uint32_t(q[3])};
    Vec3 n = cross(m.positions[t1.b] - m.positions[t1.a], m.positions[t1.c] - m.positions[t1.a]);
    Vec3 outward = (m.positions[q[0]] + m.positions[q[2]]) * 0.5 - center;
    if (dot(n, outward) < 0) {
      std::swap(t1.b, t1.c);
      std::swap(t2.b, t2.c);
    }
    m.triangles.push_back(t1);
    m.triangles.push_back(t2);
  }
  return armesh::compute_vertex_normals(std::move(m));
}

SurfaceMesh icosphere(int subdivisions) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {{-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
                             {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
                             {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1}};
  for (Vec3& v : verts) v = armesh::normalized(v);
  std::vector<Tri> tris = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                           {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                           {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                           {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoint;
    auto mid = [&](std::uint32_t a, std::uint32_t b) {
      auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      std::uint32_t id = std::uint32_t(verts.size());
      verts.push_back(armesh::normalized(verts[a] + verts[b]));
      midpoint[key] = id;
      return id;
    };
    std::vector<Tri> next;
    next.reserve(tris.size() * 4);
    for (const Tri& t : tris) {
      std::uint32_t ab = mid(t.a, t.b), bc = mid(t.b, t.c), ca = mid(t.c, t.a);
      next.push_back({t.a, ab, ca});
      next.push_back({t.b, bc, ab});
      next.push_back({t.c, ca, bc});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
  SurfaceMesh m;
  m.positions = std::move(verts);
  m.triangles = std::move(tris);
  return armesh::compute_vertex_normals(std::move(m));
}

namespace {

struct Lattice {
  int nx, ny, nz;
  std::vector<Vec3> points;
  int pid(int i, int j, int k) const { return (k * (ny + 1) + j) * (nx + 1) + i; }
};

Lattice make_lattice(Rng& rng, int nx, int ny, int nz, double jitter) {
  Lattice lat{nx, ny, nz, {}};
  std::uniform_real_distribution<double> jit(-jitter, jitter);
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        lat.points.push_back({i + jit(rng), j + jit(rng), k + jit(rng)});
  return lat;
}

std::array<std::uint32_t, 8> hex_corners(const Lattice& lat, int i, int j, int k) {
  return {std::uint32_t(lat.pid(i, j, k)),         std::uint32_t(lat.pid(i + 1, j, k)),
          std::uint32_t(lat.pid(i + 1, j + 1, k)), std::uint32_t(lat.pid(i, j + 1, k)),
          std::uint32_t(lat.pid(i, j, k + 1)),     std::uint32_t(lat.pid(i + 1, j, k + 1)),
          std::uint32_t(lat.pid(i + 1, j + 1, k + 1)), std::uint32_t(lat.pid(i, j + 1, k + 1))};
}

}  // namespace

UnstructuredGrid random_mixed_grid(Rng& rng, std::size_t max_cells) {
  std::uniform_int_distribution<int> dim(1, 3);
  Lattice lat = make_lattice(rng, dim(rng), 2, 2, 0.15);
  UnstructuredGrid grid;
  grid.points = lat.points;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int k = 0; k < lat.nz; ++k)
    for (int j = 0; j < lat.ny; ++j)
      for (int i = 0; i < lat.nx; ++i) {
        if (uni(rng) < 0.3) continue;  // hole
        auto c = hex_corners(lat, i, j, k);
        double pick = uni(rng);
        std::vector<Cell> cells;
        if (pick < 0.4) {
          cells.push_back({CellType::Hexahedron, {c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7]}});
        } else if (pick < 0.7) {
          cells.push_back({CellType::Wedge, {c[0], c[2], c[1], c[4], c[6], c[5]}});
          cells.push_back({CellType::Wedge, {c[0], c[3], c[2], c[4], c[7], c[6]}});
        } else {
          // Classic 5-tet split (diagonals 02, 05, 07, 25, 27, 57).
          cells.push_back({CellType::Tetra, {c[0], c[1], c[2], c[5]}});
          cells.push_back({CellType::Tetra, {c[0], c[2], c[3], c[7]}});
          cells.push_back({CellType::Tetra, {c[0], c[5], c[7], c[4]}});
          cells.push_back({CellType::Tetra, {c[2], c[7], c[5], c[6]}});
          cells.push_back({CellType::Tetra, {c[0], c[2], c[5], c[7]}});
        }
        for (auto& cell : cells)
          if (grid.cells.size() < max_cells) grid.cells.push_back(std::move(cell));
      }
  if (grid.cells.empty()) {
    auto c = hex_corners(lat, 0, 0, 0);
    grid.cells.push_back({CellType::Hexahedron, {c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7]}});
  }
  armesh::AttributeArray stress;
  stress.components = 1;
  std::uniform_real_distribution<double> val(-10.0, 10.0);
  for (std::size_t p = 0; p < grid.points.size(); ++p) stress.values.push_back(val(rng));
  grid.point_fields["stress"] = std::move(stress);
  return grid;
}

UnstructuredGrid random_any_grid(Rng& rng, std::size_t max_cells) {
  UnstructuredGrid grid;
  std::uniform_int_distribution<int> npts(8, 40);
  std::uniform_real_distribution<double> coord(-100.0, 100.0);
  int n = npts(rng);
  for (int i = 0; i < n; ++i) grid.points.push_back({coord(rng), coord(rng), coord(rng)});

  const CellType types[6] = {CellType::Line,  CellType::Triangle,   CellType::Quad,
                             CellType::Tetra, CellType::Hexahedron, CellType::Wedge};
  std::uniform_int_distribution<int> tsel(0, 5);
  std::uniform_int_distribution<std::uint32_t> psel(0, std::uint32_t(n - 1));
  std::uniform_int_distribution<int> ncells(1, int(max_cells));
  int c = ncells(rng);
  for (int i = 0; i < c; ++i) {
    CellType t = types[tsel(rng)];
    Cell cell;
    cell.type = t;
    cell.conn.resize(std::size_t(*armesh::cell_arity(int(t))));
    for (auto& id : cell.conn) id = psel(rng);
    grid.cells.push_back(std::move(cell));
  }

  std::uniform_real_distribution<double> val(-1e6, 1e6);
  armesh::AttributeArray scalar_arr{1, {}};
  for (int i = 0; i < n; ++i) scalar_arr.values.push_back(val(rng));
  grid.point_fields["temperature"] = scalar_arr;
  armesh::AttributeArray vec{3, {}};
  for (int i = 0; i < 3 * n; ++i) vec.values.push_back(val(rng));
  grid.point_fields["velocity"] = vec;
  armesh::AttributeArray cellf{1, {}};
  for (std::size_t i = 0; i < grid.cells.size(); ++i) cellf.values.push_back(val(rng));
  grid.cell_fields["volume"] = cellf;
  return grid;
}

UnstructuredGrid random_hex_blob(Rng& rng) {
  std::uniform_int_distribution<int> dim(1, 3);
  Lattice lat = make_lattice(rng, dim(rng), dim(rng), dim(rng), 0.1);
  UnstructuredGrid grid;
  grid.points = lat.points;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int k = 0; k < lat.nz; ++k)
    for (int j = 0; j < lat.ny; ++j)
      for (int i = 0; i < lat.nx; ++i) {
        if (uni(rng) < 0.25) continue;
        auto c = hex_corners(lat, i, j, k);
        grid.cells.push_back(
            {CellType::Hexahedron, {c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7]}});
      }
  if (grid.cells.empty()) {
    auto c = hex_corners(lat, 0, 0, 0);
    grid.cells.push_back({CellType::Hexahedron, {c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7]}});
  }
  return grid;
}

SurfaceMesh random_colored_mesh(Rng& rng) {
  SurfaceMesh m;
  std::uniform_int_distribution<int> nv(3, 60);
  std::uniform_int_distribution<int> scale(-512, 512);
  int n = nv(rng);
  std::uniform_int_distribution<int> color(0, 255);
  for (int i = 0; i < n; ++i) {
    // Coordinates on a 1/64 grid stay exact through a float32 round trip.
    m.positions.push_back({scale(rng) / 64.0, scale(rng) / 64.0, scale(rng) / 64.0});
    m.colors.push_back({std::uint8_t(color(rng)), std::uint8_t(color(rng)),
                        std::uint8_t(color(rng)), 255});
  }
  std::uniform_int_distribution<std::uint32_t> vsel(0, std::uint32_t(n - 1));
  std::uniform_int_distribution<int> nt(1, 80);
  int t = nt(rng);
  for (int i = 0; i < t; ++i) m.triangles.push_back({vsel(rng), vsel(rng), vsel(rng)});
  return m;
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

std::vector<std::array<std::uint32_t, 4>> oracle_boundary_faces(const UnstructuredGrid& grid) {
  // Independent face tables (arity first, then local corner indices).
  static const int tet_faces[4][5] = {
      {3, 0, 2, 1, -1}, {3, 0, 1, 3, -1}, {3, 1, 2, 3, -1}, {3, 2, 0, 3, -1}};
  static const int hex_faces[6][5] = {{4, 0, 1, 2, 3}, {4, 4, 5, 6, 7}, {4, 0, 1, 5, 4},
                                      {4, 1, 2, 6, 5}, {4, 2, 3, 7, 6}, {4, 3, 0, 4, 7}};
  static const int wedge_faces[5][5] = {
      {3, 0, 1, 2, -1}, {3, 3, 4, 5, -1}, {4, 0, 1, 4, 3}, {4, 1, 2, 5, 4}, {4, 2, 0, 3, 5}};

  std::vector<std::array<std::uint32_t, 4>> all;
  auto add = [&](const Cell& cell, const int (*faces)[5], int nfaces) {
    for (int f = 0; f < nfaces; ++f) {
      std::array<std::uint32_t, 4> key{~0u, ~0u, ~0u, ~0u};
      int arity = faces[f][0];
      for (int i = 0; i < arity; ++i) key[std::size_t(i)] = cell.conn[std::size_t(faces[f][1 + i])];
      std::sort(key.begin(), key.begin() + arity);
      all.push_back(key);
    }
  };
  for (const Cell& cell : grid.cells) {
    switch (cell.type) {
      case CellType::Tetra: add(cell, tet_faces, 4); break;
      case CellType::Hexahedron: add(cell, hex_faces, 6); break;
      case CellType::Wedge: add(cell, wedge_faces, 5); break;
      case CellType::Triangle:
      case CellType::Quad:
      case CellType::Line:
        break;  // the oracle covers faces of 3D cells only
    }
  }
  std::sort(all.begin(), all.end());
  std::vector<std::array<std::uint32_t, 4>> unique_once;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j] == all[i]) ++j;
    if (j - i == 1) unique_once.push_back(all[i]);
    i = j;
  }
  return unique_once;
}

namespace {

std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, int>> edge_counts(
    const SurfaceMesh& mesh) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (const Tri& t : mesh.triangles) {
    auto push = [&](std::uint32_t a, std::uint32_t b) {
      edges.push_back(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
    };
    push(t.a, t.b);
    push(t.b, t.c);
    push(t.c, t.a);
  }
  std::sort(edges.begin(), edges.end());
  std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, int>> counts;
  for (std::size_t i = 0; i < edges.size();) {
    std::size_t j = i;
    while (j < edges.size() && edges[j] == edges[i]) ++j;
    counts.push_back({edges[i], int(j - i)});
    i = j;
  }
  return counts;
}

}  // namespace

bool oracle_watertight(const SurfaceMesh& mesh) {
  if (mesh.triangles.empty()) return false;
  for (const auto& [edge, n] : edge_counts(mesh))
    if (n != 2) return false;
  return true;
}

std::size_t oracle_boundary_edge_count(const SurfaceMesh& mesh) {
  std::size_t n = 0;
  for (const auto& [edge, count] : edge_counts(mesh))
    if (count == 1) ++n;
  return n;
}

armesh::Aabb oracle_union_bounds(const std::vector<SurfaceMesh>& frames) {
  armesh::Aabb box;
  for (const SurfaceMesh& m : frames)
    for (const Vec3& p : m.positions) box.expand(p);
  return box;
}

// ---------------------------------------------------------------------------
// Temp files
// ---------------------------------------------------------------------------

TempDir::TempDir() {
  auto base = std::filesystem::temp_directory_path();
  static std::atomic<unsigned> counter{0};
  for (;;) {
    auto candidate = base / ("armesh_test_" + std::to_string(::getpid()) + "_" +
                             std::to_string(counter.fetch_add(1)));
    std::error_code ec;
    if (std::filesystem::create_directory(candidate, ec)) {
      path_ = candidate;
      return;
    }
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string TempDir::write(const std::string& name, const std::string& text) const {
  auto p = path_ / name;
  std::ofstream out(p, std::ios::binary);
  out.write(text.data(), std::streamsize(text.size()));
  return p.string();
}

std::string TempDir::write(const std::string& name, const std::vector<std::uint8_t>& bytes) const {
  auto p = path_ / name;
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  return p.string();
}

}  // namespace fix
