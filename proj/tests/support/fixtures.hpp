// Shared test fixtures and independent oracles. Oracles here are written
// against the file-format/geometry definitions directly (own face tables,
// brute-force counting) so they stay independent of the library code paths
// they check.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "armesh/mesh.hpp"
#include "armesh/vtk.hpp"

namespace fix {

using Rng = std::mt19937_64;

// ---------------------------------------------------------------------------
// Handwritten VTK fixtures
// ---------------------------------------------------------------------------

// 4 points, 1 tetra (type 10), SCALARS "stress" with 4 values.
std::string tetra_vtk_ascii();

// The same grid re-encoded BINARY with big-endian 32-bit floats, built by hand.
std::vector<std::uint8_t> tetra_vtk_binary();

// Tetra grid whose cell references point index 7 of 4 points.
std::string tetra_vtk_bad_index();

// Single hexahedron (type 12), no fields.
std::string hex_vtk_ascii();

// 5.1-style CELLS layout (OFFSETS/CONNECTIVITY) of the tetra fixture.
std::string tetra_vtk_offsets_ascii();

// Curved quad-shell grid with a scalar "deflection" point field.
std::string quad_shell_vtk_ascii(int nx, int ny);

// Undulated polyline of `segments` line cells with a scalar "tension" field.
std::string fiber_line_vtk(int segments);

// Analytic bending series on a fixed nx x ny x nz hex lattice: frame f keeps
// connectivity and applies w(x) = 0.002 f x^2 to z, with "displacement"
// (vector) and "stress" (scalar) point fields. Written by a local formatter,
// not the library writer.
std::vector<std::string> beam_series_vtk(int frames, int nx = 10, int ny = 2, int nz = 2);

// ---------------------------------------------------------------------------
// Direct geometry
// ---------------------------------------------------------------------------

// Two-triangle unit quad in the z=0 plane, CCW seen from +z.
armesh::SurfaceMesh unit_quad_mesh();

// Unit cube centered at the origin, each face split along the diagonal whose
// endpoints have even vertex parity, so every corner carries equal face areas.
armesh::SurfaceMesh unit_cube_mesh(double edge = 1.0, armesh::Vec3 center = {0, 0, 0});

// Subdivided icosahedron on the unit sphere: 20 * 4^n triangles.
armesh::SurfaceMesh icosphere(int subdivisions);

// Random jittered-lattice grid of mixed hex / wedge-pair / 5-tet cells,
// capped at `max_cells` cells, with a random "stress" point field.
armesh::UnstructuredGrid random_mixed_grid(Rng& rng, std::size_t max_cells = 50);

// Random grid of arbitrary supported cells (geometry-agnostic) for
// serialization round-trips; includes scalar, vector and cell fields.
armesh::UnstructuredGrid random_any_grid(Rng& rng, std::size_t max_cells = 50);

// Random watertight hex blob on a lattice (every cell a hexahedron).
armesh::UnstructuredGrid random_hex_blob(Rng& rng);

// Random colored triangle soup with float-exact coordinates.
armesh::SurfaceMesh random_colored_mesh(Rng& rng);

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

// Brute-force multiplicity-1 face set (sorted vertex tuples, list sorted),
// using independently written per-cell face tables and O(n^2)-style counting.
std::vector<std::array<std::uint32_t, 4>> oracle_boundary_faces(const armesh::UnstructuredGrid& grid);

// Edge -> incident triangle count via a plain sorted scan.
bool oracle_watertight(const armesh::SurfaceMesh& mesh);

// Count of boundary edges (edges with exactly one incident triangle).
std::size_t oracle_boundary_edge_count(const armesh::SurfaceMesh& mesh);

// Union bounding box by direct iteration over all frame vertices.
armesh::Aabb oracle_union_bounds(const std::vector<armesh::SurfaceMesh>& frames);

// ---------------------------------------------------------------------------
// Temp files
// ---------------------------------------------------------------------------

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string write(const std::string& name, const std::string& text) const;
  std::string write(const std::string& name, const std::vector<std::uint8_t>& bytes) const;

 private:
  std::filesystem::path path_;
};

}  // namespace fix
