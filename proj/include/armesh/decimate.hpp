// decimate.hpp — Quadric-error-metric edge collapse with a replayable collapse
// log, so every frame of a constant-connectivity series receives identical
// connectivity edits.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "armesh/core.hpp"
#include "armesh/mesh.hpp"

namespace armesh {

/// Ordered (kept, removed) collapses against the pre-decimation vertex
/// indexing, plus the connectivity certificate replay() validates against.
struct CollapseLog {
  std::size_t source_vertex_count = 0;
  std::vector<Tri> source_triangles;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> collapses;  // (kept, removed)
  std::vector<std::int64_t> vertex_remap;  // source vertex -> output vertex, -1 if removed

  bool empty() const { return collapses.empty(); }
};

struct DecimateResult {
  SurfaceMesh mesh;
  CollapseLog log;
};

namespace detail {

/// Symmetric 4x4 quadric accumulated from (area-weighted) face planes.
struct Quadric {
  double a00 = 0, a01 = 0, a02 = 0, a03 = 0;
  double a11 = 0, a12 = 0, a13 = 0;
  double a22 = 0, a23 = 0;
  double a33 = 0;

  void add_plane(const Vec3& n, double d, double w) {
    a00 += w * n.x * n.x; a01 += w * n.x * n.y; a02 += w * n.x * n.z; a03 += w * n.x * d;
    a11 += w * n.y * n.y; a12 += w * n.y * n.z; a13 += w * n.y * d;
    a22 += w * n.z * n.z; a23 += w * n.z * d;
    a33 += w * d * d;
  }

  Quadric& operator+=(const Quadric& o) {
    a00 += o.a00; a01 += o.a01; a02 += o.a02; a03 += o.a03;
    a11 += o.a11; a12 += o.a12; a13 += o.a13;
    a22 += o.a22; a23 += o.a23;
    a33 += o.a33;
    return *this;
  }

  double eval(const Vec3& p) const {
    return p.x * (a00 * p.x + 2 * (a01 * p.y + a02 * p.z + a03)) +
           p.y * (a11 * p.y + 2 * (a12 * p.z + a13)) +
           p.z * (a22 * p.z + 2 * a23) + a33;
  }

  /// Minimizer of the quadric; false when the 3x3 system is singular
  /// (|det| < 1e-12) and the caller should fall back to the edge midpoint.
  bool minimizer(Vec3& out) const {
    double det = a00 * (a11 * a22 - a12 * a12) - a01 * (a01 * a22 - a12 * a02) +
                 a02 * (a01 * a12 - a11 * a02);
    if (std::abs(det) < 1e-12) return false;
    double bx = -a03, by = -a13, bz = -a23;
    double inv = 1.0 / det;
    out.x = inv * (bx * (a11 * a22 - a12 * a12) - a01 * (by * a22 - a12 * bz) +
                   a02 * (by * a12 - a11 * bz));
    out.y = inv * (a00 * (by * a22 - a12 * bz) - bx * (a01 * a22 - a12 * a02) +
                   a02 * (a01 * bz - by * a02));
    out.z = inv * (a00 * (a11 * bz - by * a12) - a01 * (a01 * bz - by * a02) +
                   bx * (a01 * a12 - a11 * a02));
    return true;
  }
};

inline Vec3 face_area_vector(const Vec3& p0, const Vec3& p1, const Vec3& p2) {
  return cross(p1 - p0, p2 - p0) * 0.5;
}

}  // namespace detail

/// Replay a collapse log on a mesh with identical connectivity. Collapsed
/// positions land on the midpoint of the frame's own endpoints; colors and
/// fields stay with the kept endpoint. Normals are recomputed.
inline SurfaceMesh replay(const SurfaceMesh& mesh, const CollapseLog& log) {
  if (mesh.positions.size() != log.source_vertex_count)
    throw Error(ErrorCode::ConnectivityMismatch,
                "mesh has " + std::to_string(mesh.positions.size()) + " vertices, log expects " +
                    std::to_string(log.source_vertex_count));
  if (!(mesh.triangles == log.source_triangles))
    throw Error(ErrorCode::ConnectivityMismatch,
                "triangle list differs from the mesh that produced the log");

  std::vector<Vec3> pos = mesh.positions;
  std::vector<std::uint32_t> parent(pos.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = std::uint32_t(i);
  for (auto [kept, removed] : log.collapses) {
    pos[kept] = (pos[kept] + pos[removed]) * 0.5;
    parent[removed] = kept;
  }
  auto resolve = [&](std::uint32_t v) {
    while (parent[v] != v) v = parent[v];
    return v;
  };

  SurfaceMesh out;
  std::vector<std::int64_t> remap(pos.size(), -1);
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (parent[i] != std::uint32_t(i)) continue;
    remap[i] = std::int64_t(out.positions.size());
    out.positions.push_back(pos[i]);
    if (mesh.has_colors()) out.colors.push_back(mesh.colors[i]);
    for (const auto& [name, arr] : mesh.fields) {
      AttributeArray& dst = out.fields[name];
      dst.components = arr.components;
      for (int k = 0; k < arr.components; ++k)
        dst.values.push_back(arr.values[i * std::size_t(arr.components) + std::size_t(k)]);
    }
  }
  for (const Tri& t : mesh.triangles) {
    std::uint32_t a = resolve(t.a), b = resolve(t.b), c = resolve(t.c);
    if (a == b || b == c || c == a) continue;
    out.triangles.push_back(
        Tri{std::uint32_t(remap[a]), std::uint32_t(remap[b]), std::uint32_t(remap[c])});
  }
  if (log.collapses.empty()) {
    out.normals = mesh.normals;
    return out;
  }
  return compute_vertex_normals(std::move(out));
}

/// Quadric edge collapse down to ceil(ratio * triangle count) triangles (or
/// until no legal collapse remains). A collapse is rejected when it would flip
/// an incident face normal, shrink a face below 1e-12 of the mean input area,
/// violate the edge link condition, or touch a boundary vertex (rims are
/// locked). Ties in the queue break on the smaller vertex index pair, so equal
/// inputs give equal logs.
inline DecimateResult decimate(const SurfaceMesh& mesh, double ratio) {
  using detail::Quadric;
  if (!(ratio > 0.0 && ratio <= 1.0))
    throw Error(ErrorCode::BadRatio, "decimation ratio must lie in (0, 1]");

  const std::size_t nv = mesh.positions.size();
  const std::size_t nt = mesh.triangles.size();
  CollapseLog log;
  log.source_vertex_count = nv;
  log.source_triangles = mesh.triangles;

  std::size_t target = std::size_t(std::ceil(ratio * double(nt)));
  if (target >= nt || nt == 0) {
    log.vertex_remap.resize(nv);
    for (std::size_t i = 0; i < nv; ++i) log.vertex_remap[i] = std::int64_t(i);
    return {mesh, std::move(log)};
  }

  std::vector<Vec3> pos = mesh.positions;
  std::vector<Tri> tris = mesh.triangles;
  std::vector<bool> tri_alive(nt, true);
  std::vector<std::vector<std::uint32_t>> incident(nv);  // vertex -> alive triangle ids
  for (std::size_t t = 0; t < nt; ++t) {
    incident[tris[t].a].push_back(std::uint32_t(t));
    incident[tris[t].b].push_back(std::uint32_t(t));
    incident[tris[t].c].push_back(std::uint32_t(t));
  }

  double mean_area = 0.0;
  std::vector<Quadric> quadrics(nv);
  for (const Tri& t : tris) {
    Vec3 av = detail::face_area_vector(pos[t.a], pos[t.b], pos[t.c]);
    double area = norm(av);
    mean_area += area;
    if (area <= 0.0) continue;
    Vec3 n = av / area;
    double d = -dot(n, pos[t.a]);
    quadrics[t.a].add_plane(n, d, area);
    quadrics[t.b].add_plane(n, d, area);
    quadrics[t.c].add_plane(n, d, area);
  }
  mean_area /= double(nt);
  const double min_area = 1e-12 * mean_area;

  std::vector<bool> boundary(nv, false);
  for (const auto& [edge, count] : edge_multiplicity(mesh))
    if (count != 2) boundary[edge.a] = boundary[edge.b] = true;

  struct Candidate {
    double cost;
    std::uint32_t u, v;          // u < v
    std::uint32_t stamp_u, stamp_v;
  };
  struct Worse {
    bool operator()(const Candidate& a, const Candidate& b) const {
      if (a.cost != b.cost) return a.cost > b.cost;
      if (a.u != b.u) return a.u > b.u;
      return a.v > b.v;
    }
  };
  std::priority_queue<Candidate, std::vector<Candidate>, Worse> queue;
  std::vector<std::uint32_t> stamp(nv, 0);

  auto placement = [&](std::uint32_t u, std::uint32_t v, Vec3& out) {
    Quadric q = quadrics[u];
    q += quadrics[v];
    if (!q.minimizer(out)) out = (pos[u] + pos[v]) * 0.5;
    return q.eval(out);
  };

  auto push_edge = [&](std::uint32_t u, std::uint32_t v) {
    if (u > v) std::swap(u, v);
    if (boundary[u] || boundary[v]) return;
    Vec3 x;
    double cost = placement(u, v, x);
    queue.push(Candidate{cost, u, v, stamp[u], stamp[v]});
  };

  {
    std::vector<EdgeKey> edges;
    for (std::size_t t = 0; t < nt; ++t) {
      edges.push_back(make_edge(tris[t].a, tris[t].b));
      edges.push_back(make_edge(tris[t].b, tris[t].c));
      edges.push_back(make_edge(tris[t].c, tris[t].a));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (const EdgeKey& e : edges) push_edge(e.a, e.b);
  }

  auto sorted_neighbors = [&](std::uint32_t v) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t t : incident[v]) {
      out.push_back(tris[t].a);
      out.push_back(tris[t].b);
      out.push_back(tris[t].c);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    out.erase(std::remove(out.begin(), out.end(), v), out.end());
    return out;
  };

  std::size_t alive_tris = nt;
  std::vector<std::uint32_t> parent(nv);
  for (std::size_t i = 0; i < nv; ++i) parent[i] = std::uint32_t(i);

  while (alive_tris > target && !queue.empty()) {
    Candidate cand = queue.top();
    queue.pop();
    std::uint32_t u = cand.u, v = cand.v;
    if (cand.stamp_u != stamp[u] || cand.stamp_v != stamp[v]) continue;  // stale

    // The edge must still exist: triangles containing both endpoints.
    std::vector<std::uint32_t> shared;
    for (std::uint32_t t : incident[u]) {
      const Tri& tr = tris[t];
      bool has_v = tr.a == v || tr.b == v || tr.c == v;
      if (has_v) shared.push_back(t);
    }
    if (shared.empty()) continue;

    // Link condition: common neighbors must be exactly the shared triangles'
    // opposite vertices, else the collapse pinches the surface.
    std::vector<std::uint32_t> nu = sorted_neighbors(u), nv_list = sorted_neighbors(v);
    std::vector<std::uint32_t> common;
    std::set_intersection(nu.begin(), nu.end(), nv_list.begin(), nv_list.end(),
                          std::back_inserter(common));
    std::vector<std::uint32_t> opposite;
    for (std::uint32_t t : shared)
      for (std::uint32_t w : {tris[t].a, tris[t].b, tris[t].c})
        if (w != u && w != v) opposite.push_back(w);
    std::sort(opposite.begin(), opposite.end());
    opposite.erase(std::unique(opposite.begin(), opposite.end()), opposite.end());
    if (common != opposite) continue;

    Vec3 x;
    placement(u, v, x);

    // Geometric guards on every surviving incident triangle.
    bool legal = true;
    auto check_tri = [&](std::uint32_t t, std::uint32_t moved) {
      const Tri& tr = tris[t];
      bool has_u = tr.a == u || tr.b == u || tr.c == u;
      bool has_v = tr.a == v || tr.b == v || tr.c == v;
      if (has_u && has_v) return;  // removed by the collapse
      Vec3 before = detail::face_area_vector(pos[tr.a], pos[tr.b], pos[tr.c]);
      Vec3 p[3] = {pos[tr.a], pos[tr.b], pos[tr.c]};
      const std::uint32_t ids[3] = {tr.a, tr.b, tr.c};
      for (int k = 0; k < 3; ++k)
        if (ids[k] == moved) p[k] = x;
      Vec3 after = detail::face_area_vector(p[0], p[1], p[2]);
      if (dot(before, after) < 0.0 || norm(after) < min_area) legal = false;
    };
    for (std::uint32_t t : incident[u]) check_tri(t, u);
    for (std::uint32_t t : incident[v]) check_tri(t, v);
    if (!legal) continue;

    // Commit: v collapses into u.
    log.collapses.emplace_back(u, v);
    parent[v] = u;
    pos[u] = x;
    quadrics[u] += quadrics[v];

    for (std::uint32_t t : shared) {
      if (!tri_alive[t]) continue;
      tri_alive[t] = false;
      --alive_tris;
      for (std::uint32_t w : {tris[t].a, tris[t].b, tris[t].c}) {
        auto& inc = incident[w];
        inc.erase(std::remove(inc.begin(), inc.end(), t), inc.end());
      }
    }
    for (std::uint32_t t : incident[v]) {
      Tri& tr = tris[t];
      if (tr.a == v) tr.a = u;
      if (tr.b == v) tr.b = u;
      if (tr.c == v) tr.c = u;
      incident[u].push_back(t);
    }
    incident[v].clear();
    std::sort(incident[u].begin(), incident[u].end());
    incident[u].erase(std::unique(incident[u].begin(), incident[u].end()), incident[u].end());

    ++stamp[u];
    ++stamp[v];
    for (std::uint32_t n : sorted_neighbors(u)) push_edge(u, n);
  }

  // Output shares the replay path so connectivity is identical by
  // construction; positions here carry the quadric-optimal placements.
  SurfaceMesh out;
  std::vector<std::int64_t> remap(nv, -1);
  for (std::size_t i = 0; i < nv; ++i) {
    if (parent[i] != std::uint32_t(i)) continue;
    remap[i] = std::int64_t(out.positions.size());
    out.positions.push_back(pos[i]);
    if (mesh.has_colors()) out.colors.push_back(mesh.colors[i]);
    for (const auto& [name, arr] : mesh.fields) {
      AttributeArray& dst = out.fields[name];
      dst.components = arr.components;
      for (int k = 0; k < arr.components; ++k)
        dst.values.push_back(arr.values[i * std::size_t(arr.components) + std::size_t(k)]);
    }
  }
  for (std::size_t t = 0; t < nt; ++t) {
    if (!tri_alive[t]) continue;
    const Tri& tr = tris[t];
    out.triangles.push_back(
        Tri{std::uint32_t(remap[tr.a]), std::uint32_t(remap[tr.b]), std::uint32_t(remap[tr.c])});
  }
  log.vertex_remap = std::move(remap);
  return {compute_vertex_normals(std::move(out)), std::move(log)};
}

}  // namespace armesh
