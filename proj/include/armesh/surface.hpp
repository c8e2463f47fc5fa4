// surface.hpp — Boundary-surface extraction from volumetric/shell cells,
// shell thickening (solidify) and swept tubes for beam elements.
#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "armesh/core.hpp"
#include "armesh/mesh.hpp"
#include "armesh/vtk.hpp"

namespace armesh {

namespace detail {

// Local-index face tables, wound so face normals point out of a cell with the
// standard VTK vertex ordering. n = 3 entries use the first three slots.
struct LocalFace {
  std::array<int, 4> idx;
  int n;
};

inline const std::array<LocalFace, 4>& tetra_faces() {
  static const std::array<LocalFace, 4> f = {{
      {{0, 1, 3, -1}, 3},
      {{1, 2, 3, -1}, 3},
      {{2, 0, 3, -1}, 3},
      {{0, 2, 1, -1}, 3},
  }};
  return f;
}

inline const std::array<LocalFace, 6>& hex_faces() {
  static const std::array<LocalFace, 6> f = {{
      {{0, 4, 7, 3}, 4},
      {{1, 2, 6, 5}, 4},
      {{0, 1, 5, 4}, 4},
      {{3, 7, 6, 2}, 4},
      {{0, 3, 2, 1}, 4},
      {{4, 5, 6, 7}, 4},
  }};
  return f;
}

inline const std::array<LocalFace, 5>& wedge_faces() {
  static const std::array<LocalFace, 5> f = {{
      {{0, 1, 2, -1}, 3},
      {{3, 5, 4, -1}, 3},
      {{0, 3, 4, 1}, 4},
      {{1, 4, 5, 2}, 4},
      {{2, 5, 3, 0}, 4},
  }};
  return f;
}

// Canonical face identity: vertex ids sorted ascending, padded with ~0u.
struct FaceKey {
  std::array<std::uint32_t, 4> v;
  bool operator==(const FaceKey& o) const { return v == o.v; }
};

struct FaceKeyHash {
  std::size_t operator()(const FaceKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint32_t x : k.v) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return std::size_t(h);
  }
};

inline FaceKey face_key(const std::uint32_t* ids, int n) {
  FaceKey k{{~0u, ~0u, ~0u, ~0u}};
  for (int i = 0; i < n; ++i) k.v[std::size_t(i)] = ids[i];
  std::sort(k.v.begin(), k.v.begin() + n);
  return k;
}

}  // namespace detail

/// A surface face selected for rendering: grid point ids in outward winding,
/// arity 3 or 4.
struct SurfaceFace {
  std::array<std::uint32_t, 4> ids;
  int n = 3;
};

/// The faces extract_boundary renders, pre-triangulation: every face of a 3D
/// cell whose multiplicity across all cells is exactly 1 (canonical key =
/// sorted vertex tuple), plus every 2D cell as-is. Deterministic first-seen
/// order.
inline std::vector<SurfaceFace> boundary_faces(const UnstructuredGrid& grid) {
  using namespace detail;

  struct PendingFace {
    SurfaceFace face;
    int multiplicity;
  };
  std::vector<PendingFace> faces;                                   // first-seen order
  std::unordered_map<FaceKey, std::size_t, FaceKeyHash> face_slot;  // key -> faces index

  auto add_face = [&](const std::uint32_t* cell_conn, const LocalFace& lf) {
    SurfaceFace face;
    face.n = lf.n;
    for (int i = 0; i < lf.n; ++i) face.ids[std::size_t(i)] = cell_conn[lf.idx[std::size_t(i)]];
    FaceKey key = face_key(face.ids.data(), lf.n);
    auto [it, inserted] = face_slot.try_emplace(key, faces.size());
    if (inserted) {
      faces.push_back(PendingFace{face, 1});
    } else {
      ++faces[it->second].multiplicity;
    }
  };

  bool any_surface_cell = false;
  std::vector<SurfaceFace> direct;  // 2D cells, kept regardless of multiplicity
  for (const Cell& cell : grid.cells) {
    const std::uint32_t* c = cell.conn.data();
    switch (cell.type) {
      case CellType::Tetra:
        for (const auto& lf : tetra_faces()) add_face(c, lf);
        any_surface_cell = true;
        break;
      case CellType::Hexahedron:
        for (const auto& lf : hex_faces()) add_face(c, lf);
        any_surface_cell = true;
        break;
      case CellType::Wedge:
        for (const auto& lf : wedge_faces()) add_face(c, lf);
        any_surface_cell = true;
        break;
      case CellType::Triangle:
        direct.push_back(SurfaceFace{{c[0], c[1], c[2], ~0u}, 3});
        any_surface_cell = true;
        break;
      case CellType::Quad:
        direct.push_back(SurfaceFace{{c[0], c[1], c[2], c[3]}, 4});
        any_surface_cell = true;
        break;
      case CellType::Line:
        break;  // beams are handled by tube()
    }
  }
  if (!any_surface_cell)
    throw Error(ErrorCode::NoSurfaceCells,
                "grid holds no 2D/3D cells; use the tube path for line elements");

  std::vector<SurfaceFace> out;
  for (const PendingFace& f : faces)
    if (f.multiplicity == 1) out.push_back(f.face);
  out.insert(out.end(), direct.begin(), direct.end());
  return out;
}

/// Extract the renderable surface of a grid: boundary_faces() triangulated
/// (quads split along the (v0,v2) diagonal) over a compacted vertex set.
/// Surviving vertices keep their per-point field values and the result
/// carries freshly computed vertex normals.
inline SurfaceMesh extract_boundary(const UnstructuredGrid& grid) {
  std::vector<SurfaceFace> faces = boundary_faces(grid);

  SurfaceMesh mesh;
  std::unordered_map<std::uint32_t, std::uint32_t> vertex_of_point;
  std::vector<std::uint32_t> point_of_vertex;
  auto vertex_for = [&](std::uint32_t point_id) {
    auto [it, inserted] = vertex_of_point.try_emplace(point_id, std::uint32_t(point_of_vertex.size()));
    if (inserted) point_of_vertex.push_back(point_id);
    return it->second;
  };
  for (const SurfaceFace& f : faces) {
    std::array<std::uint32_t, 4> v{};
    for (int i = 0; i < f.n; ++i) v[std::size_t(i)] = vertex_for(f.ids[std::size_t(i)]);
    mesh.triangles.push_back(Tri{v[0], v[1], v[2]});
    if (f.n == 4) mesh.triangles.push_back(Tri{v[0], v[2], v[3]});
  }

  mesh.positions.reserve(point_of_vertex.size());
  for (std::uint32_t pid : point_of_vertex) mesh.positions.push_back(grid.points[pid]);
  for (const auto& [name, arr] : grid.point_fields) {
    AttributeArray sub;
    sub.components = arr.components;
    sub.values.reserve(point_of_vertex.size() * std::size_t(arr.components));
    for (std::uint32_t pid : point_of_vertex)
      for (int k = 0; k < arr.components; ++k)
        sub.values.push_back(arr.values[pid * std::size_t(arr.components) + std::size_t(k)]);
    mesh.fields[name] = std::move(sub);
  }
  return compute_vertex_normals(std::move(mesh));
}

/// Thicken an open or closed surface: copies offset by ±thickness/2 along the
/// vertex normals, inner copy flipped, rim edges stitched with two triangles
/// each. Colors and fields are duplicated onto both shells.
inline SurfaceMesh solidify(const SurfaceMesh& mesh, double thickness) {
  if (thickness <= 0.0)
    throw Error(ErrorCode::BadThickness, "solidify thickness must be positive");
  if (!mesh.has_normals())
    throw Error(ErrorCode::MissingNormals, "solidify requires vertex normals");

  std::size_t n = mesh.positions.size();
  SurfaceMesh out;
  out.positions.resize(2 * n);
  double h = 0.5 * thickness;
  for (std::size_t i = 0; i < n; ++i) {
    out.positions[i] = mesh.positions[i] + mesh.normals[i] * h;
    out.positions[n + i] = mesh.positions[i] - mesh.normals[i] * h;
  }
  if (mesh.has_colors()) {
    out.colors.resize(2 * n);
    for (std::size_t i = 0; i < n; ++i) out.colors[i] = out.colors[n + i] = mesh.colors[i];
  }
  for (const auto& [name, arr] : mesh.fields) {
    AttributeArray dup;
    dup.components = arr.components;
    dup.values.reserve(arr.values.size() * 2);
    dup.values.insert(dup.values.end(), arr.values.begin(), arr.values.end());
    dup.values.insert(dup.values.end(), arr.values.begin(), arr.values.end());
    out.fields[name] = std::move(dup);
  }

  std::uint32_t off = std::uint32_t(n);
  out.triangles.reserve(mesh.triangles.size() * 2);
  for (const Tri& t : mesh.triangles) out.triangles.push_back(t);
  for (const Tri& t : mesh.triangles) out.triangles.push_back(Tri{t.a + off, t.c + off, t.b + off});

  // Rim: directed edges whose undirected multiplicity is 1, stitched so the
  // wall faces away from the surface interior.
  auto mult = edge_multiplicity(mesh);
  for (const Tri& t : mesh.triangles) {
    const std::uint32_t e[3][2] = {{t.a, t.b}, {t.b, t.c}, {t.c, t.a}};
    for (const auto& ed : e) {
      if (mult[make_edge(ed[0], ed[1])] != 1) continue;
      std::uint32_t u = ed[0], v = ed[1];
      out.triangles.push_back(Tri{v, u, u + off});
      out.triangles.push_back(Tri{v, u + off, v + off});
    }
  }
  return compute_vertex_normals(std::move(out));
}

namespace detail {

/// Chain line cells into polylines: walk unused segments from endpoints (or a
/// loop seed), visiting cells in index order for determinism.
inline std::vector<std::vector<std::uint32_t>> chain_polylines(const UnstructuredGrid& grid) {
  std::vector<std::array<std::uint32_t, 2>> segments;
  for (const Cell& c : grid.cells)
    if (c.type == CellType::Line) segments.push_back({c.conn[0], c.conn[1]});
  if (segments.empty())
    throw Error(ErrorCode::NoLineCells, "grid holds no line cells to sweep");

  std::unordered_map<std::uint32_t, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s][0]].push_back(s);
    incident[segments[s][1]].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);

  auto walk = [&](std::size_t seed, std::uint32_t from) {
    std::vector<std::uint32_t> pts{from};
    std::size_t seg = seed;
    std::uint32_t at = from;
    for (;;) {
      used[seg] = true;
      at = segments[seg][0] == at ? segments[seg][1] : segments[seg][0];
      pts.push_back(at);
      const auto& inc = incident[at];
      if (inc.size() != 2) break;  // endpoint or junction: stop the chain
      std::size_t next = inc[0] == seg ? inc[1] : inc[0];
      if (used[next]) break;  // loop closed
      seg = next;
    }
    return pts;
  };

  std::vector<std::vector<std::uint32_t>> polylines;
  // Open chains first: start from segments with an endpoint of degree != 2.
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    for (int side = 0; side < 2 && !used[s]; ++side) {
      std::uint32_t end = segments[s][std::size_t(side)];
      if (incident[end].size() != 2) polylines.push_back(walk(s, end));
    }
  }
  // Remaining segments belong to closed loops.
  for (std::size_t s = 0; s < segments.size(); ++s)
    if (!used[s]) polylines.push_back(walk(s, segments[s][0]));
  return polylines;
}

}  // namespace detail

/// Sweep a circular cross-section along chained line cells using
/// parallel-transported frames. One ring per polyline point (tangent averaged
/// at interior points, so every ring vertex sits exactly `radius` from its
/// point); open ends optionally closed with a center-vertex triangle fan.
inline SurfaceMesh tube(const UnstructuredGrid& grid, double radius, int sides, bool capped) {
  if (radius <= 0.0) throw Error(ErrorCode::BadRadius, "tube radius must be positive");
  if (sides < 3) throw Error(ErrorCode::BadSides, "tube needs at least 3 sides");

  std::vector<std::vector<std::uint32_t>> polylines = detail::chain_polylines(grid);
  SurfaceMesh mesh;
  auto add_field_values = [&](std::uint32_t point_id) {
    for (const auto& [name, arr] : grid.point_fields) {
      AttributeArray& dst = mesh.fields[name];
      dst.components = arr.components;
      for (int k = 0; k < arr.components; ++k)
        dst.values.push_back(arr.values[point_id * std::size_t(arr.components) + std::size_t(k)]);
    }
  };

  const double two_pi = 6.283185307179586476925286766559;
  for (const auto& pts : polylines) {
    std::size_t npts = pts.size();
    std::vector<Vec3> dirs(npts - 1);
    for (std::size_t i = 0; i + 1 < npts; ++i) {
      Vec3 d = grid.points[pts[i + 1]] - grid.points[pts[i]];
      double len = norm(d);
      if (len <= 0.0)
        throw Error(ErrorCode::DegenerateSegment,
                    "zero-length line between points " + std::to_string(pts[i]) + " and " +
                        std::to_string(pts[i + 1]));
      dirs[i] = d / len;
    }

    // Per-point tangents and transported frame (u,v) orthogonal to the tangent.
    std::vector<Vec3> tangents(npts);
    tangents[0] = dirs.front();
    tangents[npts - 1] = dirs.back();
    for (std::size_t i = 1; i + 1 < npts; ++i) tangents[i] = normalized(dirs[i - 1] + dirs[i], dirs[i]);

    Vec3 seed = std::abs(tangents[0].x) <= std::abs(tangents[0].y)
                    ? (std::abs(tangents[0].x) <= std::abs(tangents[0].z) ? Vec3{1, 0, 0} : Vec3{0, 0, 1})
                    : (std::abs(tangents[0].y) <= std::abs(tangents[0].z) ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
    Vec3 u = normalized(seed - tangents[0] * dot(seed, tangents[0]));
    Vec3 v = cross(tangents[0], u);

    std::uint32_t ring_base = std::uint32_t(mesh.positions.size());
    for (std::size_t i = 0; i < npts; ++i) {
      if (i > 0) {
        Vec3 projected = u - tangents[i] * dot(u, tangents[i]);
        if (norm(projected) < 1e-12) projected = v - tangents[i] * dot(v, tangents[i]);
        u = normalized(projected);
        v = cross(tangents[i], u);
      }
      const Vec3 center = grid.points[pts[i]];
      for (int k = 0; k < sides; ++k) {
        double a = two_pi * k / sides;
        mesh.positions.push_back(center + (u * std::cos(a) + v * std::sin(a)) * radius);
        add_field_values(pts[i]);
      }
    }

    auto ring_vertex = [&](std::size_t ring, int k) {
      return ring_base + std::uint32_t(ring) * std::uint32_t(sides) + std::uint32_t(k % sides);
    };
    for (std::size_t i = 0; i + 1 < npts; ++i) {
      for (int k = 0; k < sides; ++k) {
        std::uint32_t a = ring_vertex(i, k), b = ring_vertex(i + 1, k);
        std::uint32_t c = ring_vertex(i + 1, k + 1), d = ring_vertex(i, k + 1);
        mesh.triangles.push_back(Tri{a, c, b});
        mesh.triangles.push_back(Tri{a, d, c});
      }
    }

    if (capped) {
      std::uint32_t start_center = std::uint32_t(mesh.positions.size());
      mesh.positions.push_back(grid.points[pts.front()]);
      add_field_values(pts.front());
      for (int k = 0; k < sides; ++k)
        mesh.triangles.push_back(Tri{start_center, ring_vertex(0, k + 1), ring_vertex(0, k)});
      std::uint32_t end_center = std::uint32_t(mesh.positions.size());
      mesh.positions.push_back(grid.points[pts.back()]);
      add_field_values(pts.back());
      for (int k = 0; k < sides; ++k)
        mesh.triangles.push_back(Tri{end_center, ring_vertex(npts - 1, k), ring_vertex(npts - 1, k + 1)});
    }
  }
  return compute_vertex_normals(std::move(mesh));
}

}  // namespace armesh
