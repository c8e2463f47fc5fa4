// ply.hpp — PLY surface-mesh interchange with embedded vertex colors.
// Writes the fixed schema x/y/z, nx/ny/nz, red/green/blue (when colored);
// reads any PLY subset that carries vertex positions, skipping unknown
// properties with a warning. Binary is little-endian only.
#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "armesh/core.hpp"
#include "armesh/mesh.hpp"

namespace armesh {

enum class PlyEncoding { Ascii, BinaryLittleEndian };

namespace ply_detail {

inline std::string fmt_g9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);  // float32 round-trip precision
  return buf;
}

inline void append_text(std::vector<std::uint8_t>& out, std::string_view s) {
  out.insert(out.end(), s.begin(), s.end());
}

enum class PropType { I8, U8, I16, U16, I32, U32, F32, F64 };

inline std::optional<PropType> prop_type(std::string_view name) {
  if (name == "char" || name == "int8") return PropType::I8;
  if (name == "uchar" || name == "uint8") return PropType::U8;
  if (name == "short" || name == "int16") return PropType::I16;
  if (name == "ushort" || name == "uint16") return PropType::U16;
  if (name == "int" || name == "int32") return PropType::I32;
  if (name == "uint" || name == "uint32") return PropType::U32;
  if (name == "float" || name == "float32") return PropType::F32;
  if (name == "double" || name == "float64") return PropType::F64;
  return std::nullopt;
}

inline std::size_t prop_size(PropType t) {
  switch (t) {
    case PropType::I8: case PropType::U8: return 1;
    case PropType::I16: case PropType::U16: return 2;
    case PropType::I32: case PropType::U32: return 4;
    case PropType::F32: return 4;
    case PropType::F64: return 8;
  }
  return 0;
}

struct Property {
  std::string name;
  bool is_list = false;
  PropType count_type = PropType::U8;  // list only
  PropType value_type = PropType::F32;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
};

class PlyCursor {
 public:
  PlyCursor(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

  std::string next_line() {
    std::string line;
    while (pos_ < size_ && data_[pos_] != '\n') line.push_back(char(data_[pos_++]));
    if (pos_ < size_) ++pos_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  double next_ascii_value() {
    while (pos_ < size_ && (data_[pos_] == ' ' || data_[pos_] == '\t' || data_[pos_] == '\n' ||
                            data_[pos_] == '\r'))
      ++pos_;
    if (pos_ >= size_)
      throw Error(ErrorCode::TruncatedPayload, "PLY payload ends before all declared elements");
    std::size_t start = pos_;
    while (pos_ < size_ && data_[pos_] != ' ' && data_[pos_] != '\t' && data_[pos_] != '\n' &&
           data_[pos_] != '\r')
      ++pos_;
    std::string tok(reinterpret_cast<const char*>(data_) + start, pos_ - start);
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size())
      throw Error(ErrorCode::HeaderMalformed, "non-numeric PLY value \"" + tok + "\"");
    return v;
  }

  const std::uint8_t* take(std::size_t n) {
    if (pos_ + n > size_)
      throw Error(ErrorCode::TruncatedPayload, "PLY binary payload ends prematurely");
    const std::uint8_t* p = data_ + pos_;
    pos_ += n;
    return p;
  }

  double next_binary_value(PropType t) {
    const std::uint8_t* p = take(prop_size(t));
    switch (t) {
      case PropType::I8: return double(static_cast<std::int8_t>(*p));
      case PropType::U8: return double(*p);
      case PropType::I16: return double(load_le<std::int16_t>(p));
      case PropType::U16: return double(load_le<std::uint16_t>(p));
      case PropType::I32: return double(load_le<std::int32_t>(p));
      case PropType::U32: return double(load_le<std::uint32_t>(p));
      case PropType::F32: return double(load_le<float>(p));
      case PropType::F64: return load_le<double>(p);
    }
    return 0.0;
  }

 private:
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

inline std::vector<std::string> words(const std::string& line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace ply_detail

/// Serialize a mesh to PLY. Normals are computed when absent (the schema
/// always declares them); color properties appear only for colored meshes.
inline std::vector<std::uint8_t> write_ply(const SurfaceMesh& input, PlyEncoding encoding) {
  using namespace ply_detail;
  const SurfaceMesh mesh = input.has_normals() ? input : compute_vertex_normals(input);
  bool binary = encoding == PlyEncoding::BinaryLittleEndian;
  bool colored = mesh.has_colors();

  std::vector<std::uint8_t> out;
  append_text(out, "ply\n");
  append_text(out, binary ? "format binary_little_endian 1.0\n" : "format ascii 1.0\n");
  append_text(out, "element vertex " + std::to_string(mesh.positions.size()) + "\n");
  for (const char* p : {"x", "y", "z", "nx", "ny", "nz"})
    append_text(out, std::string("property float ") + p + "\n");
  if (colored)
    for (const char* p : {"red", "green", "blue"})
      append_text(out, std::string("property uchar ") + p + "\n");
  append_text(out, "element face " + std::to_string(mesh.triangles.size()) + "\n");
  append_text(out, "property list uchar int vertex_indices\n");
  append_text(out, "end_header\n");

  for (std::size_t i = 0; i < mesh.positions.size(); ++i) {
    float v[6] = {float(mesh.positions[i].x), float(mesh.positions[i].y), float(mesh.positions[i].z),
                  float(mesh.normals[i].x), float(mesh.normals[i].y), float(mesh.normals[i].z)};
    if (binary) {
      for (float f : v) append_le(out, f);
      if (colored) {
        out.push_back(mesh.colors[i].r);
        out.push_back(mesh.colors[i].g);
        out.push_back(mesh.colors[i].b);
      }
    } else {
      std::string line;
      for (int k = 0; k < 6; ++k) line += (k ? " " : "") + fmt_g9(double(v[k]));
      if (colored)
        line += " " + std::to_string(mesh.colors[i].r) + " " + std::to_string(mesh.colors[i].g) + " " +
                std::to_string(mesh.colors[i].b);
      line += "\n";
      append_text(out, line);
    }
  }
  for (const Tri& t : mesh.triangles) {
    if (binary) {
      out.push_back(3);
      append_le(out, std::int32_t(t.a));
      append_le(out, std::int32_t(t.b));
      append_le(out, std::int32_t(t.c));
    } else {
      append_text(out, "3 " + std::to_string(t.a) + " " + std::to_string(t.b) + " " +
                           std::to_string(t.c) + "\n");
    }
  }
  return out;
}

/// Parse a PLY mesh. Quads and larger polygons are fan-triangulated from
/// vertex 0; missing normals are recomputed; unknown properties and non-vertex
/// /face elements are skipped with a warning.
inline SurfaceMesh read_ply(const std::vector<std::uint8_t>& bytes,
                            std::vector<std::string>* warnings = nullptr) {
  using namespace ply_detail;
  PlyCursor cur(bytes.data(), bytes.size());
  auto warn = [&](const std::string& m) {
    if (warnings) warnings->push_back(m);
  };

  if (cur.next_line() != "ply")
    throw Error(ErrorCode::HeaderMalformed, "file does not start with the \"ply\" magic line");
  bool binary = false;
  bool have_format = false;
  std::vector<Element> elements;

  for (;;) {
    std::string line = cur.next_line();
    if (line.empty() && !have_format)
      throw Error(ErrorCode::HeaderMalformed, "PLY header ends before end_header");
    if (line == "end_header") break;
    std::vector<std::string> w = words(line);
    if (w.empty()) continue;
    if (w[0] == "comment" || w[0] == "obj_info") continue;
    if (w[0] == "format") {
      if (w.size() < 2) throw Error(ErrorCode::HeaderMalformed, "bad format line");
      if (w[1] == "ascii") binary = false;
      else if (w[1] == "binary_little_endian") binary = true;
      else if (w[1] == "binary_big_endian")
        throw Error(ErrorCode::UnsupportedEncoding, "big-endian PLY is not supported");
      else
        throw Error(ErrorCode::HeaderMalformed, "unknown PLY format \"" + w[1] + "\"");
      have_format = true;
    } else if (w[0] == "element") {
      if (w.size() < 3) throw Error(ErrorCode::HeaderMalformed, "bad element line");
      Element e;
      e.name = w[1];
      e.count = std::size_t(std::strtoull(w[2].c_str(), nullptr, 10));
      elements.push_back(std::move(e));
    } else if (w[0] == "property") {
      if (elements.empty())
        throw Error(ErrorCode::HeaderMalformed, "property before any element");
      Property p;
      if (w.size() >= 5 && w[1] == "list") {
        auto ct = prop_type(w[2]);
        auto vt = prop_type(w[3]);
        if (!ct || !vt)
          throw Error(ErrorCode::HeaderMalformed, "unknown list property types in \"" + line + "\"");
        p.is_list = true;
        p.count_type = *ct;
        p.value_type = *vt;
        p.name = w[4];
      } else if (w.size() >= 3) {
        auto vt = prop_type(w[1]);
        if (!vt) throw Error(ErrorCode::HeaderMalformed, "unknown property type \"" + w[1] + "\"");
        p.value_type = *vt;
        p.name = w[2];
      } else {
        throw Error(ErrorCode::HeaderMalformed, "bad property line \"" + line + "\"");
      }
      elements.back().properties.push_back(std::move(p));
    } else {
      throw Error(ErrorCode::HeaderMalformed, "unknown PLY header keyword \"" + w[0] + "\"");
    }
  }
  if (!have_format) throw Error(ErrorCode::HeaderMalformed, "PLY header has no format line");

  auto value = [&](PropType t) { return binary ? cur.next_binary_value(t) : cur.next_ascii_value(); };

  SurfaceMesh mesh;
  bool saw_normals = false, saw_colors = false;
  for (const Element& e : elements) {
    if (e.name == "vertex") {
      int ix = -1, iy = -1, iz = -1, inx = -1, iny = -1, inz = -1, ir = -1, ig = -1, ib = -1;
      for (std::size_t p = 0; p < e.properties.size(); ++p) {
        const Property& prop = e.properties[p];
        if (prop.is_list) continue;
        if (prop.name == "x") ix = int(p);
        else if (prop.name == "y") iy = int(p);
        else if (prop.name == "z") iz = int(p);
        else if (prop.name == "nx") inx = int(p);
        else if (prop.name == "ny") iny = int(p);
        else if (prop.name == "nz") inz = int(p);
        else if (prop.name == "red" && prop.value_type == PropType::U8) ir = int(p);
        else if (prop.name == "green" && prop.value_type == PropType::U8) ig = int(p);
        else if (prop.name == "blue" && prop.value_type == PropType::U8) ib = int(p);
        else warn("skipped vertex property \"" + prop.name + "\"");
      }
      if (ix < 0 || iy < 0 || iz < 0)
        throw Error(ErrorCode::HeaderMalformed, "vertex element lacks x/y/z positions");
      saw_normals = inx >= 0 && iny >= 0 && inz >= 0;
      saw_colors = ir >= 0 && ig >= 0 && ib >= 0;
      mesh.positions.resize(e.count);
      if (saw_normals) mesh.normals.resize(e.count);
      if (saw_colors) mesh.colors.resize(e.count);
      std::vector<double> row(e.properties.size());
      for (std::size_t i = 0; i < e.count; ++i) {
        for (std::size_t p = 0; p < e.properties.size(); ++p) {
          const Property& prop = e.properties[p];
          if (prop.is_list) {
            std::size_t n = std::size_t(value(prop.count_type));
            for (std::size_t k = 0; k < n; ++k) (void)value(prop.value_type);
            row[p] = 0.0;
          } else {
            row[p] = value(prop.value_type);
          }
        }
        mesh.positions[i] = {row[std::size_t(ix)], row[std::size_t(iy)], row[std::size_t(iz)]};
        if (saw_normals)
          mesh.normals[i] = {row[std::size_t(inx)], row[std::size_t(iny)], row[std::size_t(inz)]};
        if (saw_colors)
          mesh.colors[i] = {std::uint8_t(row[std::size_t(ir)]), std::uint8_t(row[std::size_t(ig)]),
                            std::uint8_t(row[std::size_t(ib)]), 255};
      }
    } else if (e.name == "face") {
      for (const Property& prop : e.properties)
        if (!(prop.is_list && (prop.name == "vertex_indices" || prop.name == "vertex_index")))
          warn("skipped face property \"" + prop.name + "\"");
      for (std::size_t i = 0; i < e.count; ++i) {
        for (const Property& prop : e.properties) {
          if (prop.is_list && (prop.name == "vertex_indices" || prop.name == "vertex_index")) {
            std::size_t n = std::size_t(value(prop.count_type));
            std::vector<std::uint32_t> ids(n);
            for (auto& id : ids) {
              double v = value(prop.value_type);
              if (v < 0.0 || v >= double(mesh.positions.size()))
                throw Error(ErrorCode::IndexOutOfRange,
                            "face references vertex " + std::to_string(std::int64_t(v)) + " of " +
                                std::to_string(mesh.positions.size()));
              id = std::uint32_t(v);
            }
            if (n < 3) {
              warn("skipped face with fewer than 3 vertices");
              continue;
            }
            for (std::size_t k = 1; k + 1 < n; ++k)
              mesh.triangles.push_back(Tri{ids[0], ids[k], ids[k + 1]});
          } else if (prop.is_list) {
            std::size_t n = std::size_t(value(prop.count_type));
            for (std::size_t k = 0; k < n; ++k) (void)value(prop.value_type);
          } else {
            (void)value(prop.value_type);
          }
        }
      }
    } else {
      warn("skipped element \"" + e.name + "\" (" + std::to_string(e.count) + " entries)");
      for (std::size_t i = 0; i < e.count; ++i) {
        for (const Property& prop : e.properties) {
          if (prop.is_list) {
            std::size_t n = std::size_t(value(prop.count_type));
            for (std::size_t k = 0; k < n; ++k) (void)value(prop.value_type);
          } else {
            (void)value(prop.value_type);
          }
        }
      }
    }
  }

  if (!saw_normals && !mesh.positions.empty()) return compute_vertex_normals(std::move(mesh));
  return mesh;
}

}  // namespace armesh
