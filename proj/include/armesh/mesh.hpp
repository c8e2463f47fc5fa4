// mesh.hpp — Triangle surface mesh, vertex-normal generation and the
// scale/translate/rotate calibration applied before export.
#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "armesh/core.hpp"

namespace armesh {

struct Tri {
  std::uint32_t a = 0, b = 0, c = 0;
  bool operator==(const Tri& o) const { return a == o.a && b == o.b && c == o.c; }
  std::uint32_t operator[](int i) const { return i == 0 ? a : (i == 1 ? b : c); }
};

/// Indexed triangle mesh with per-vertex attributes. Normals and colors, when
/// present, run parallel to `positions`. `fields` carries named per-vertex
/// scalar/vector data from the source grid so colors can be mapped after
/// extraction.
struct SurfaceMesh {
  std::vector<Vec3> positions;
  std::vector<Vec3> normals;    // empty or one unit vector per vertex
  std::vector<Rgba8> colors;    // empty or one color per vertex
  std::vector<Tri> triangles;
  AttributeMap fields;          // per-vertex attributes, each count() == vertex count

  std::size_t vertex_count() const { return positions.size(); }
  std::size_t triangle_count() const { return triangles.size(); }
  bool has_normals() const { return normals.size() == positions.size() && !positions.empty(); }
  bool has_colors() const { return colors.size() == positions.size() && !positions.empty(); }

  bool operator==(const SurfaceMesh& o) const {
    return positions == o.positions && normals == o.normals && colors == o.colors &&
           triangles == o.triangles && fields == o.fields;
  }

  Aabb bounds() const {
    Aabb box;
    for (const Vec3& p : positions) box.expand(p);
    return box;
  }
};

/// Uniform-scale rigid placement: p' = rotation * (scale * p) + translation.
struct Transform {
  double scale = 1.0;
  Quat rotation;       // unit quaternion
  Vec3 translation;

  static Transform identity() { return {}; }

  Vec3 apply(const Vec3& p) const { return rotation.rotate(p * scale) + translation; }

  Transform inverse() const {
    Transform inv;
    inv.scale = 1.0 / scale;
    inv.rotation = rotation.conjugate();
    inv.translation = inv.rotation.rotate(translation) * -inv.scale;
    return inv;
  }
};

/// Area-weighted vertex normals: each triangle contributes its area vector
/// (half the edge cross product) to its three corners. Zero-area triangles
/// contribute nothing; vertices with no incident area get (0,0,1).
inline SurfaceMesh compute_vertex_normals(SurfaceMesh mesh) {
  std::vector<Vec3> acc(mesh.positions.size());
  for (const Tri& t : mesh.triangles) {
    const Vec3& p0 = mesh.positions[t.a];
    const Vec3& p1 = mesh.positions[t.b];
    const Vec3& p2 = mesh.positions[t.c];
    Vec3 area_vec = cross(p1 - p0, p2 - p0) * 0.5;
    acc[t.a] += area_vec;
    acc[t.b] += area_vec;
    acc[t.c] += area_vec;
  }
  mesh.normals.resize(mesh.positions.size());
  for (std::size_t i = 0; i < acc.size(); ++i) mesh.normals[i] = normalized(acc[i]);
  return mesh;
}

/// Positions transformed, normals rotated only, colors and fields untouched.
inline SurfaceMesh apply_transform(SurfaceMesh mesh, const Transform& t) {
  for (Vec3& p : mesh.positions) p = t.apply(p);
  for (Vec3& n : mesh.normals) n = t.rotation.rotate(n);
  return mesh;
}

/// Fit a union bounding box for AR placement: center x/z at the origin, rest
/// the minimum y on the ground plane y=0, scale the largest extent to
/// `target_size` (meters). Rotation is left as identity.
inline Transform auto_fit(const Aabb& bounds, double target_size = 0.5) {
  if (bounds.empty() || bounds.max_extent() <= 0.0)
    throw Error(ErrorCode::DegenerateBounds, "geometry has no spatial extent to fit");
  Transform t;
  t.scale = target_size / bounds.max_extent();
  Vec3 c = bounds.center();
  t.translation = {-t.scale * c.x, -t.scale * bounds.lo.y, -t.scale * c.z};
  return t;
}

inline Transform auto_fit(const std::vector<SurfaceMesh>& frames, double target_size = 0.5) {
  Aabb box;
  for (const SurfaceMesh& m : frames) box.expand(m.bounds());
  return auto_fit(box, target_size);
}

// ---------------------------------------------------------------------------
// Edge scans shared by solidify, decimation and the watertightness checks
// ---------------------------------------------------------------------------

struct EdgeKey {
  std::uint32_t a, b;  // a < b
  bool operator==(const EdgeKey& o) const { return a == o.a && b == o.b; }
  bool operator<(const EdgeKey& o) const { return a != o.a ? a < o.a : b < o.b; }
};

inline EdgeKey make_edge(std::uint32_t u, std::uint32_t v) {
  return u < v ? EdgeKey{u, v} : EdgeKey{v, u};
}

/// Undirected edge -> number of incident triangles.
inline std::map<EdgeKey, int> edge_multiplicity(const SurfaceMesh& mesh) {
  std::map<EdgeKey, int> mult;
  for (const Tri& t : mesh.triangles) {
    ++mult[make_edge(t.a, t.b)];
    ++mult[make_edge(t.b, t.c)];
    ++mult[make_edge(t.c, t.a)];
  }
  return mult;
}

/// Every edge bordered by exactly two triangles.
inline bool is_watertight(const SurfaceMesh& mesh) {
  if (mesh.triangles.empty()) return false;
  for (const auto& [edge, n] : edge_multiplicity(mesh))
    if (n != 2) return false;
  return true;
}

}  // namespace armesh
