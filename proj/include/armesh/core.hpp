// core.hpp — Small math/value types and the error model shared by all armesh modules.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace armesh {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class ErrorCode {
  HeaderMalformed,
  UnsupportedDataset,
  UnsupportedCellType,
  UnsupportedEncoding,
  IndexOutOfRange,
  TruncatedPayload,
  EmptySeries,
  UnknownField,
  BadComponent,
  DegenerateBounds,
  NoSurfaceCells,
  NoLineCells,
  DegenerateSegment,
  MissingNormals,
  BadThickness,
  BadRadius,
  BadSides,
  BadRatio,
  ConnectivityMismatch,
  EmptyFrames,
  BadFps,
  EmptyGeometry,
  TooManyVertices,
  BadColorMap,
  BadRange,
  UnknownFormat,
  MissingModel,
  IoError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::HeaderMalformed: return "HeaderMalformed";
    case ErrorCode::UnsupportedDataset: return "UnsupportedDataset";
    case ErrorCode::UnsupportedCellType: return "UnsupportedCellType";
    case ErrorCode::UnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::UnknownField: return "UnknownField";
    case ErrorCode::BadComponent: return "BadComponent";
    case ErrorCode::DegenerateBounds: return "DegenerateBounds";
    case ErrorCode::NoSurfaceCells: return "NoSurfaceCells";
    case ErrorCode::NoLineCells: return "NoLineCells";
    case ErrorCode::DegenerateSegment: return "DegenerateSegment";
    case ErrorCode::MissingNormals: return "MissingNormals";
    case ErrorCode::BadThickness: return "BadThickness";
    case ErrorCode::BadRadius: return "BadRadius";
    case ErrorCode::BadSides: return "BadSides";
    case ErrorCode::BadRatio: return "BadRatio";
    case ErrorCode::ConnectivityMismatch: return "ConnectivityMismatch";
    case ErrorCode::EmptyFrames: return "EmptyFrames";
    case ErrorCode::BadFps: return "BadFps";
    case ErrorCode::EmptyGeometry: return "EmptyGeometry";
    case ErrorCode::TooManyVertices: return "TooManyVertices";
    case ErrorCode::BadColorMap: return "BadColorMap";
    case ErrorCode::BadRange: return "BadRange";
    case ErrorCode::UnknownFormat: return "UnknownFormat";
    case ErrorCode::MissingModel: return "MissingModel";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Exception carrying a stable machine-readable code plus a human detail string.
/// CLI layers format these as "error: <code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

// ---------------------------------------------------------------------------
// Vectors / quaternions
// ---------------------------------------------------------------------------

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
  constexpr bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// Normalize, or return `fallback` when the vector is (numerically) zero.
inline Vec3 normalized(const Vec3& v, const Vec3& fallback = {0.0, 0.0, 1.0}) {
  double n = norm(v);
  if (n == 0.0 || !std::isfinite(n)) return fallback;
  return v / n;
}

/// Unit quaternion (w + xi + yj + zk). Identity by default.
struct Quat {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  static Quat from_axis_angle(const Vec3& axis, double radians) {
    Vec3 a = armesh::normalized(axis);
    double h = 0.5 * radians;
    double s = std::sin(h);
    return {std::cos(h), a.x * s, a.y * s, a.z * s};
  }

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  Quat normalized() const {
    double n = norm();
    return {w / n, x / n, y / n, z / n};
  }

  Quat conjugate() const { return {w, -x, -y, -z}; }

  /// Rotate a vector: q v q*.
  Vec3 rotate(const Vec3& v) const {
    Vec3 u{x, y, z};
    Vec3 t = cross(u, v) * 2.0;
    return v + t * w + cross(u, t);
  }

  bool operator==(const Quat& o) const { return w == o.w && x == o.x && y == o.y && z == o.z; }
};

struct Rgba8 {
  std::uint8_t r = 255, g = 255, b = 255, a = 255;
  bool operator==(const Rgba8& o) const { return r == o.r && g == o.g && b == o.b && a == o.a; }
};

// ---------------------------------------------------------------------------
// Bounding box
// ---------------------------------------------------------------------------

struct Aabb {
  Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity()};

  bool empty() const { return lo.x > hi.x; }

  void expand(const Vec3& p) {
    lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
    hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
  }

  void expand(const Aabb& b) {
    if (b.empty()) return;
    expand(b.lo);
    expand(b.hi);
  }

  Vec3 center() const { return (lo + hi) * 0.5; }
  Vec3 extent() const { return hi - lo; }
  double max_extent() const { Vec3 e = extent(); return std::max({e.x, e.y, e.z}); }
  double diagonal() const { return empty() ? 0.0 : norm(extent()); }
};

// ---------------------------------------------------------------------------
// Named per-element attribute arrays (1 or 3 components, stored interleaved)
// ---------------------------------------------------------------------------

struct AttributeArray {
  int components = 1;            // 1 = scalar, 3 = vector
  std::vector<double> values;    // length = components * element count

  std::size_t count() const { return components > 0 ? values.size() / components : 0; }
  bool operator==(const AttributeArray& o) const {
    return components == o.components && values == o.values;
  }
};

using AttributeMap = std::map<std::string, AttributeArray>;  // ordered for determinism

// ---------------------------------------------------------------------------
// Endian-aware scalar IO
// ---------------------------------------------------------------------------

template <typename T>
inline T load_be(const std::uint8_t* p) {
  std::array<std::uint8_t, sizeof(T)> buf;
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = p[sizeof(T) - 1 - i];
  T v;
  std::memcpy(&v, buf.data(), sizeof(T));
  return v;
}

template <typename T>
inline void store_be(std::uint8_t* p, T v) {
  std::array<std::uint8_t, sizeof(T)> buf;
  std::memcpy(buf.data(), &v, sizeof(T));
  for (std::size_t i = 0; i < sizeof(T); ++i) p[i] = buf[sizeof(T) - 1 - i];
}

template <typename T>
inline T load_le(const std::uint8_t* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));  // little-endian host assumed (checked in CMake for sanity)
  return v;
}

template <typename T>
inline void store_le(std::uint8_t* p, T v) {
  std::memcpy(p, &v, sizeof(T));
}

template <typename T>
inline void append_le(std::vector<std::uint8_t>& out, T v) {
  std::size_t n = out.size();
  out.resize(n + sizeof(T));
  store_le(out.data() + n, v);
}

// ---------------------------------------------------------------------------
// Deterministic parallel map over an index range
// ---------------------------------------------------------------------------

/// Run fn(i) for i in [0, n) on up to hardware_concurrency threads.
/// Work is split by index, so writes to per-index slots are race-free and the
/// result is independent of the worker count.
template <typename Fn>
inline void parallel_for(std::size_t n, Fn&& fn) {
  if (n == 0) return;
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  std::size_t workers = std::min<std::size_t>(hw, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex err_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace armesh
