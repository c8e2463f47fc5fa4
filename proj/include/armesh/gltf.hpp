// gltf.hpp — Bit-exact GLB (glTF 2.0 binary) export of static meshes,
// stop-motion node animations and morph-target animations, plus an
// independent decoder and structural validator used as the test oracle.
//
// Serialization is deterministic: JSON keys are emitted sorted, numbers use
// shortest round-trip formatting, and a single export never depends on thread
// count. That keeps golden-file comparisons byte-exact.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include <json.hpp>

#include "armesh/animate.hpp"
#include "armesh/core.hpp"
#include "armesh/mesh.hpp"

namespace armesh {

enum class MaterialMode { Lit, Unlit };

namespace gltf_detail {

using nlohmann::json;

constexpr std::uint32_t kGlbMagic = 0x46546C67;   // "glTF"
constexpr std::uint32_t kChunkJson = 0x4E4F534A;  // "JSON"
constexpr std::uint32_t kChunkBin = 0x004E4942;   // "BIN\0"

constexpr int kCompFloat = 5126;
constexpr int kCompUShort = 5123;
constexpr int kCompUInt = 5125;
constexpr int kCompUByte = 5121;

constexpr int kTargetArrayBuffer = 34962;
constexpr int kTargetElementArrayBuffer = 34963;

inline std::size_t component_size(int component_type) {
  switch (component_type) {
    case 5120: case 5121: return 1;
    case 5122: case 5123: return 2;
    case 5125: case 5126: return 4;
    default: return 0;
  }
}

inline int type_components(const std::string& type) {
  if (type == "SCALAR") return 1;
  if (type == "VEC2") return 2;
  if (type == "VEC3") return 3;
  if (type == "VEC4") return 4;
  if (type == "MAT4") return 16;
  return 0;
}

/// Accumulates the binary chunk and the bufferViews/accessors JSON. Each data
/// block gets its own 4-byte-aligned view.
class BufferBuilder {
 public:
  int add_view(const std::vector<std::uint8_t>& bytes, int target = 0) {
    while (bin_.size() % 4 != 0) bin_.push_back(0);
    json view;
    view["buffer"] = 0;
    view["byteOffset"] = bin_.size();
    view["byteLength"] = bytes.size();
    if (target != 0) view["target"] = target;
    bin_.insert(bin_.end(), bytes.begin(), bytes.end());
    views_.push_back(std::move(view));
    return int(views_.size()) - 1;
  }

  int add_accessor(int view, int component_type, std::size_t count, const std::string& type,
                   bool normalized = false) {
    json acc;
    acc["bufferView"] = view;
    acc["componentType"] = component_type;
    acc["count"] = count;
    acc["type"] = type;
    if (normalized) acc["normalized"] = true;
    accessors_.push_back(std::move(acc));
    return int(accessors_.size()) - 1;
  }

  void set_min_max(int accessor, const std::vector<double>& mn, const std::vector<double>& mx) {
    accessors_[std::size_t(accessor)]["min"] = mn;
    accessors_[std::size_t(accessor)]["max"] = mx;
  }

  json views_json() const { return views_; }
  json accessors_json() const { return accessors_; }
  const std::vector<std::uint8_t>& bin() const { return bin_; }

 private:
  std::vector<std::uint8_t> bin_;
  std::vector<json> views_;
  std::vector<json> accessors_;
};

inline int add_float_vec3_accessor(BufferBuilder& b, const std::vector<Vec3>& data,
                                   bool with_min_max, int target) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(data.size() * 12);
  float mn[3] = {INFINITY, INFINITY, INFINITY};
  float mx[3] = {-INFINITY, -INFINITY, -INFINITY};
  for (const Vec3& v : data) {
    float f[3] = {float(v.x), float(v.y), float(v.z)};
    for (int k = 0; k < 3; ++k) {
      append_le(bytes, f[k]);
      mn[k] = std::min(mn[k], f[k]);
      mx[k] = std::max(mx[k], f[k]);
    }
  }
  int view = b.add_view(bytes, target);
  int acc = b.add_accessor(view, kCompFloat, data.size(), "VEC3");
  if (with_min_max && !data.empty())
    b.set_min_max(acc, {double(mn[0]), double(mn[1]), double(mn[2])},
                  {double(mx[0]), double(mx[1]), double(mx[2])});
  return acc;
}

inline int add_float_scalar_accessor(BufferBuilder& b, const std::vector<double>& data,
                                     bool with_min_max) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(data.size() * 4);
  float mn = INFINITY, mx = -INFINITY;
  for (double v : data) {
    float f = float(v);
    append_le(bytes, f);
    mn = std::min(mn, f);
    mx = std::max(mx, f);
  }
  int view = b.add_view(bytes, 0);
  int acc = b.add_accessor(view, kCompFloat, data.size(), "SCALAR");
  if (with_min_max && !data.empty()) b.set_min_max(acc, {double(mn)}, {double(mx)});
  return acc;
}

struct PrimitiveAccessors {
  int position = -1;
  int normal = -1;
  int color = -1;
  int indices = -1;
};

inline PrimitiveAccessors add_mesh_data(BufferBuilder& b, const SurfaceMesh& mesh) {
  if (mesh.positions.empty() || mesh.triangles.empty())
    throw Error(ErrorCode::EmptyGeometry, "mesh has no vertices or triangles to export");
  if (mesh.positions.size() > 0xFFFFFFFFull)
    throw Error(ErrorCode::TooManyVertices,
                std::to_string(mesh.positions.size()) + " vertices exceed the 32-bit index limit");

  PrimitiveAccessors out;
  out.position = add_float_vec3_accessor(b, mesh.positions, true, kTargetArrayBuffer);
  if (mesh.has_normals())
    out.normal = add_float_vec3_accessor(b, mesh.normals, false, kTargetArrayBuffer);
  if (mesh.has_colors()) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(mesh.colors.size() * 4);
    for (const Rgba8& c : mesh.colors) {
      bytes.push_back(c.r);
      bytes.push_back(c.g);
      bytes.push_back(c.b);
      bytes.push_back(c.a);
    }
    int view = b.add_view(bytes, kTargetArrayBuffer);
    out.color = b.add_accessor(view, kCompUByte, mesh.colors.size(), "VEC4", true);
  }

  bool wide = mesh.positions.size() > 65535;
  std::vector<std::uint8_t> ibytes;
  ibytes.reserve(mesh.triangles.size() * 3 * (wide ? 4 : 2));
  for (const Tri& t : mesh.triangles) {
    for (std::uint32_t id : {t.a, t.b, t.c}) {
      if (wide) append_le(ibytes, id);
      else append_le(ibytes, std::uint16_t(id));
    }
  }
  int iview = b.add_view(ibytes, kTargetElementArrayBuffer);
  out.indices = b.add_accessor(iview, wide ? kCompUInt : kCompUShort, mesh.triangles.size() * 3, "SCALAR");
  return out;
}

inline json primitive_json(const PrimitiveAccessors& acc, int material) {
  json prim;
  prim["attributes"]["POSITION"] = acc.position;
  if (acc.normal >= 0) prim["attributes"]["NORMAL"] = acc.normal;
  if (acc.color >= 0) prim["attributes"]["COLOR_0"] = acc.color;
  prim["indices"] = acc.indices;
  prim["material"] = material;
  prim["mode"] = 4;  // TRIANGLES
  return prim;
}

inline json material_json(MaterialMode mode) {
  json mat;
  mat["name"] = mode == MaterialMode::Unlit ? "unlit" : "lit";
  mat["doubleSided"] = true;
  mat["pbrMetallicRoughness"]["metallicFactor"] = 0.0;
  mat["pbrMetallicRoughness"]["roughnessFactor"] = 1.0;
  if (mode == MaterialMode::Unlit) mat["extensions"]["KHR_materials_unlit"] = json::object();
  return mat;
}

inline json node_trs_json(const Transform& t) {
  json node;
  node["translation"] = {t.translation.x, t.translation.y, t.translation.z};
  node["rotation"] = {t.rotation.x, t.rotation.y, t.rotation.z, t.rotation.w};
  node["scale"] = {t.scale, t.scale, t.scale};
  return node;
}

inline std::string frame_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%03zu", i);
  return buf;
}

/// Wrap the JSON document and binary chunk in the GLB container: 12-byte
/// header, JSON chunk padded with spaces, BIN chunk padded with zeros.
inline std::vector<std::uint8_t> pack_glb(const json& doc, const std::vector<std::uint8_t>& bin) {
  std::string text = doc.dump();
  std::vector<std::uint8_t> jbytes(text.begin(), text.end());
  while (jbytes.size() % 4 != 0) jbytes.push_back(0x20);
  std::vector<std::uint8_t> bbytes = bin;
  while (bbytes.size() % 4 != 0) bbytes.push_back(0x00);

  std::vector<std::uint8_t> out;
  std::size_t total = 12 + 8 + jbytes.size() + 8 + bbytes.size();
  out.reserve(total);
  append_le(out, kGlbMagic);
  append_le(out, std::uint32_t(2));
  append_le(out, std::uint32_t(total));
  append_le(out, std::uint32_t(jbytes.size()));
  append_le(out, kChunkJson);
  out.insert(out.end(), jbytes.begin(), jbytes.end());
  append_le(out, std::uint32_t(bbytes.size()));
  append_le(out, kChunkBin);
  out.insert(out.end(), bbytes.begin(), bbytes.end());
  return out;
}

}  // namespace gltf_detail

/// Serialize an animation plan (or, via the overload below, a single static
/// mesh) to GLB. The fit transform rides on the root node; stop-motion frames
/// become child nodes with step-interpolated scale tracks; morph plans become
/// one mesh with position-delta targets and a weights channel.
inline std::vector<std::uint8_t> export_glb(const AnimationPlan& plan, MaterialMode material_mode,
                                            const Transform& transform) {
  using namespace gltf_detail;
  using nlohmann::json;

  if (plan.frames.empty())
    throw Error(ErrorCode::EmptyGeometry, "animation plan holds no geometry");

  BufferBuilder buffer;
  json doc;
  doc["asset"]["generator"] = "armesh";
  doc["asset"]["version"] = "2.0";
  if (material_mode == MaterialMode::Unlit) doc["extensionsUsed"] = {"KHR_materials_unlit"};
  doc["materials"] = {material_json(material_mode)};

  json meshes = json::array();
  json nodes = json::array();
  json animations = json::array();

  switch (plan.mode) {
    case AnimationPlan::Mode::Static: {
      PrimitiveAccessors acc = add_mesh_data(buffer, plan.base());
      json mesh;
      mesh["name"] = "model";
      mesh["primitives"] = {primitive_json(acc, 0)};
      meshes.push_back(std::move(mesh));
      json root = node_trs_json(transform);
      root["mesh"] = 0;
      root["name"] = "model";
      nodes.push_back(std::move(root));
      break;
    }
    case AnimationPlan::Mode::Morph: {
      const SurfaceMesh& base = plan.base();
      PrimitiveAccessors acc = add_mesh_data(buffer, base);
      json prim = primitive_json(acc, 0);
      json targets = json::array();
      for (const auto& delta : plan.targets) {
        if (delta.size() != base.positions.size())
          throw Error(ErrorCode::ConnectivityMismatch, "morph target size differs from base mesh");
        json target;
        target["POSITION"] = add_float_vec3_accessor(buffer, delta, true, kTargetArrayBuffer);
        targets.push_back(std::move(target));
      }
      prim["targets"] = std::move(targets);
      json mesh;
      mesh["name"] = "model";
      mesh["primitives"] = {std::move(prim)};
      mesh["weights"] = std::vector<double>(plan.targets.size(), 0.0);
      meshes.push_back(std::move(mesh));

      json root = node_trs_json(transform);
      root["mesh"] = 0;
      root["name"] = "model";
      nodes.push_back(std::move(root));

      std::vector<double> flat;
      flat.reserve(plan.key_times.size() * plan.targets.size());
      for (std::size_t k = 0; k < plan.key_times.size(); ++k)
        for (std::size_t w = 0; w < plan.targets.size(); ++w)
          flat.push_back(plan.weight_tracks[w][k]);
      int input = add_float_scalar_accessor(buffer, plan.key_times, true);
      int output_view = -1;
      {
        std::vector<std::uint8_t> bytes;
        bytes.reserve(flat.size() * 4);
        for (double v : flat) append_le(bytes, float(v));
        output_view = buffer.add_view(bytes, 0);
      }
      int output = buffer.add_accessor(output_view, kCompFloat, flat.size(), "SCALAR");
      json sampler;
      sampler["input"] = input;
      sampler["interpolation"] = plan.interpolation == MorphInterpolation::Linear ? "LINEAR" : "STEP";
      sampler["output"] = output;
      json channel;
      channel["sampler"] = 0;
      channel["target"]["node"] = 0;
      channel["target"]["path"] = "weights";
      json anim;
      anim["name"] = "series";
      anim["extras"]["duration"] = plan.duration;
      anim["samplers"] = {std::move(sampler)};
      anim["channels"] = {std::move(channel)};
      animations.push_back(std::move(anim));
      break;
    }
    case AnimationPlan::Mode::StopMotion: {
      json root = node_trs_json(transform);
      root["name"] = "root";
      std::vector<int> children;
      for (std::size_t i = 0; i < plan.frames.size(); ++i) children.push_back(int(i) + 1);
      root["children"] = children;
      nodes.push_back(std::move(root));

      json anim;
      anim["name"] = "series";
      anim["extras"]["duration"] = plan.duration;
      json samplers = json::array();
      json channels = json::array();
      for (std::size_t i = 0; i < plan.frames.size(); ++i) {
        PrimitiveAccessors acc = add_mesh_data(buffer, plan.frames[i]);
        json mesh;
        mesh["name"] = frame_name(i);
        mesh["primitives"] = {primitive_json(acc, 0)};
        meshes.push_back(std::move(mesh));

        const ScaleTrack& track = plan.tracks[i];
        json node;
        node["mesh"] = int(i);
        node["name"] = frame_name(i);
        double s0 = track.scales.empty() ? 1.0 : track.scales.front();
        node["scale"] = {s0, s0, s0};
        nodes.push_back(std::move(node));

        int input = add_float_scalar_accessor(buffer, track.times, true);
        std::vector<Vec3> scale_vectors;
        scale_vectors.reserve(track.scales.size());
        for (double s : track.scales) scale_vectors.push_back({s, s, s});
        int output = add_float_vec3_accessor(buffer, scale_vectors, false, 0);
        json sampler;
        sampler["input"] = input;
        sampler["interpolation"] = "STEP";
        sampler["output"] = output;
        samplers.push_back(std::move(sampler));
        json channel;
        channel["sampler"] = int(i);
        channel["target"]["node"] = int(i) + 1;
        channel["target"]["path"] = "scale";
        channels.push_back(std::move(channel));
      }
      anim["samplers"] = std::move(samplers);
      anim["channels"] = std::move(channels);
      animations.push_back(std::move(anim));
      break;
    }
  }

  doc["meshes"] = std::move(meshes);
  doc["nodes"] = std::move(nodes);
  if (!animations.empty()) doc["animations"] = std::move(animations);
  doc["scenes"] = {json{{"nodes", {0}}}};
  doc["scene"] = 0;
  doc["bufferViews"] = buffer.views_json();
  doc["accessors"] = buffer.accessors_json();
  doc["buffers"] = {json{{"byteLength", buffer.bin().size()}}};
  return gltf_detail::pack_glb(doc, buffer.bin());
}

inline std::vector<std::uint8_t> export_glb(const SurfaceMesh& mesh, MaterialMode material_mode,
                                            const Transform& transform) {
  AnimationPlan plan;
  plan.mode = AnimationPlan::Mode::Static;
  plan.frames = {mesh};
  plan.duration = 0.0;
  return export_glb(plan, material_mode, transform);
}

// ---------------------------------------------------------------------------
// Decoding (independent of the writer above: reads raw container bytes)
// ---------------------------------------------------------------------------

struct GlbAsset {
  nlohmann::json doc;
  std::vector<std::uint8_t> bin;
  std::size_t json_offset = 0;  // file offset of the JSON chunk payload
  std::size_t bin_offset = 0;   // file offset of the BIN chunk payload
};

inline GlbAsset decode_glb(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 20) throw Error(ErrorCode::TruncatedPayload, "file too small for a GLB header");
  if (load_le<std::uint32_t>(bytes.data()) != gltf_detail::kGlbMagic)
    throw Error(ErrorCode::HeaderMalformed, "missing glTF magic");
  if (load_le<std::uint32_t>(bytes.data() + 4) != 2)
    throw Error(ErrorCode::HeaderMalformed, "unsupported glTF container version");

  GlbAsset asset;
  std::size_t pos = 12;
  bool have_json = false;
  while (pos + 8 <= bytes.size()) {
    std::uint32_t len = load_le<std::uint32_t>(bytes.data() + pos);
    std::uint32_t type = load_le<std::uint32_t>(bytes.data() + pos + 4);
    pos += 8;
    if (pos + len > bytes.size())
      throw Error(ErrorCode::TruncatedPayload, "chunk extends past end of file");
    if (type == gltf_detail::kChunkJson) {
      asset.json_offset = pos;
      asset.doc = nlohmann::json::parse(bytes.begin() + long(pos), bytes.begin() + long(pos + len));
      have_json = true;
    } else if (type == gltf_detail::kChunkBin) {
      asset.bin_offset = pos;
      asset.bin.assign(bytes.begin() + long(pos), bytes.begin() + long(pos + len));
    }
    pos += len;
  }
  if (!have_json) throw Error(ErrorCode::HeaderMalformed, "GLB has no JSON chunk");
  return asset;
}

/// Flattened accessor payload widened to double (normalized integers are NOT
/// rescaled; callers see raw stored values).
inline std::vector<double> read_accessor(const GlbAsset& asset, std::size_t index) {
  using namespace gltf_detail;
  const nlohmann::json& acc = asset.doc.at("accessors").at(index);
  const nlohmann::json& view = asset.doc.at("bufferViews").at(std::size_t(acc.at("bufferView").get<int>()));
  std::size_t comp_count = std::size_t(type_components(acc.at("type").get<std::string>()));
  int ctype = acc.at("componentType").get<int>();
  std::size_t csize = component_size(ctype);
  std::size_t count = acc.at("count").get<std::size_t>();
  std::size_t offset = view.value("byteOffset", std::size_t(0)) + acc.value("byteOffset", std::size_t(0));
  std::size_t total = count * comp_count;
  if (offset + total * csize > asset.bin.size())
    throw Error(ErrorCode::TruncatedPayload, "accessor extends past the binary chunk");

  std::vector<double> out(total);
  const std::uint8_t* p = asset.bin.data() + offset;
  for (std::size_t i = 0; i < total; ++i, p += csize) {
    switch (ctype) {
      case 5120: out[i] = double(*reinterpret_cast<const std::int8_t*>(p)); break;
      case 5121: out[i] = double(*p); break;
      case 5122: out[i] = double(load_le<std::int16_t>(p)); break;
      case 5123: out[i] = double(load_le<std::uint16_t>(p)); break;
      case 5125: out[i] = double(load_le<std::uint32_t>(p)); break;
      case 5126: out[i] = double(load_le<float>(p)); break;
      default:
        throw Error(ErrorCode::HeaderMalformed, "unknown accessor component type");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct Violation {
  std::size_t offset = 0;  // byte offset of the region concerned
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Structural validation against the container and accessor rules: header
/// fields, chunk ordering/alignment/padding, accessor ranges vs. buffer
/// extents, recomputed position min/max, index ranges, morph-target lengths.
inline ValidationReport validate_glb(const std::vector<std::uint8_t>& bytes) {
  using namespace gltf_detail;
  using nlohmann::json;
  ValidationReport report;
  auto flag = [&](std::size_t offset, const std::string& msg) {
    report.violations.push_back({offset, msg});
  };

  if (bytes.size() < 20) {
    flag(0, "file too small for a GLB header");
    return report;
  }
  if (load_le<std::uint32_t>(bytes.data()) != kGlbMagic) flag(0, "magic is not glTF");
  if (load_le<std::uint32_t>(bytes.data() + 4) != 2) flag(4, "container version is not 2");
  std::uint32_t declared = load_le<std::uint32_t>(bytes.data() + 8);
  if (declared != bytes.size())
    flag(8, "length mismatch: header declares " + std::to_string(declared) + ", file has " +
                std::to_string(bytes.size()) + " bytes");
  if (bytes.size() % 4 != 0) flag(0, "file length is not a multiple of 4");

  // Chunk walk: JSON first, BIN second.
  std::size_t pos = 12;
  int chunk_index = 0;
  std::size_t json_off = 0, json_len = 0, bin_off = 0, bin_len = 0;
  while (pos + 8 <= bytes.size()) {
    std::uint32_t len = load_le<std::uint32_t>(bytes.data() + pos);
    std::uint32_t type = load_le<std::uint32_t>(bytes.data() + pos + 4);
    if (len % 4 != 0) flag(pos, "chunk length is not a multiple of 4");
    if (pos + 8 + len > bytes.size()) {
      flag(pos, "chunk extends past end of file");
      break;
    }
    if (chunk_index == 0 && type != kChunkJson) flag(pos + 4, "first chunk is not JSON");
    if (chunk_index == 1 && type != kChunkBin) flag(pos + 4, "second chunk is not BIN");
    if (type == kChunkJson) {
      json_off = pos + 8;
      json_len = len;
    } else if (type == kChunkBin) {
      bin_off = pos + 8;
      bin_len = len;
    }
    pos += 8 + len;
    ++chunk_index;
  }
  if (pos != bytes.size()) flag(pos, "trailing bytes after the last chunk");
  if (json_len == 0) {
    flag(12, "no JSON chunk found");
    return report;
  }

  // JSON padding must be spaces.
  {
    std::size_t end = json_off + json_len;
    while (end > json_off && bytes[end - 1] == 0x20) --end;
    if (end == json_off || bytes[end - 1] != '}')
      flag(json_off, "JSON chunk does not end with '}' plus space padding");
  }

  json doc;
  try {
    doc = json::parse(bytes.begin() + long(json_off), bytes.begin() + long(json_off + json_len));
  } catch (const std::exception& e) {
    flag(json_off, std::string("JSON parse failure: ") + e.what());
    return report;
  }

  GlbAsset asset;
  asset.doc = doc;
  asset.bin.assign(bytes.begin() + long(bin_off), bytes.begin() + long(bin_off + bin_len));
  asset.json_offset = json_off;
  asset.bin_offset = bin_off;

  std::size_t buffer_len = 0;
  if (doc.contains("buffers") && !doc["buffers"].empty()) {
    buffer_len = doc["buffers"][0].value("byteLength", std::size_t(0));
    if (buffer_len > bin_len)
      flag(bin_off, "buffer byteLength " + std::to_string(buffer_len) + " exceeds BIN chunk of " +
                        std::to_string(bin_len) + " bytes");
    else
      for (std::size_t i = buffer_len; i < bin_len; ++i)
        if (bytes[bin_off + i] != 0) {
          flag(bin_off + i, "BIN chunk padding is not zero");
          break;
        }
  }

  const json views = doc.value("bufferViews", json::array());
  const json accessors = doc.value("accessors", json::array());
  for (std::size_t v = 0; v < views.size(); ++v) {
    std::size_t off = views[v].value("byteOffset", std::size_t(0));
    std::size_t len = views[v].value("byteLength", std::size_t(0));
    if (off + len > buffer_len)
      flag(bin_off + off, "bufferView " + std::to_string(v) + " exceeds the buffer");
  }

  auto accessor_region = [&](std::size_t a) -> std::size_t {
    const json& acc = accessors[a];
    std::size_t view = acc.value("bufferView", std::size_t(0));
    std::size_t off = views[view].value("byteOffset", std::size_t(0)) + acc.value("byteOffset", std::size_t(0));
    return bin_off + off;
  };

  for (std::size_t a = 0; a < accessors.size(); ++a) {
    const json& acc = accessors[a];
    if (!acc.contains("bufferView")) continue;
    std::size_t view_index = acc["bufferView"].get<std::size_t>();
    if (view_index >= views.size()) {
      flag(json_off, "accessor " + std::to_string(a) + " references missing bufferView");
      continue;
    }
    const json& view = views[view_index];
    std::size_t csize = component_size(acc.value("componentType", 0));
    int comps = type_components(acc.value("type", std::string()));
    if (csize == 0 || comps == 0) {
      flag(json_off, "accessor " + std::to_string(a) + " has unknown component/element type");
      continue;
    }
    std::size_t count = acc.value("count", std::size_t(0));
    std::size_t acc_off = acc.value("byteOffset", std::size_t(0));
    std::size_t need = acc_off + count * std::size_t(comps) * csize;
    if (need > view.value("byteLength", std::size_t(0)))
      flag(accessor_region(a), "accessor " + std::to_string(a) + " exceeds its bufferView");
    std::size_t absolute = view.value("byteOffset", std::size_t(0)) + acc_off;
    if (absolute % csize != 0)
      flag(bin_off + absolute, "accessor " + std::to_string(a) + " is not aligned to its component size");

    // Recompute min/max whenever declared.
    if (acc.contains("min") && acc.contains("max") && count > 0 &&
        need <= view.value("byteLength", std::size_t(0)) &&
        view.value("byteOffset", std::size_t(0)) + view.value("byteLength", std::size_t(0)) <= asset.bin.size()) {
      std::vector<double> values = read_accessor(asset, a);
      std::vector<double> mn(std::size_t(comps), INFINITY), mx(std::size_t(comps), -INFINITY);
      for (std::size_t i = 0; i < values.size(); ++i) {
        std::size_t k = i % std::size_t(comps);
        mn[k] = std::min(mn[k], values[i]);
        mx[k] = std::max(mx[k], values[i]);
      }
      std::vector<double> dmn = acc["min"].get<std::vector<double>>();
      std::vector<double> dmx = acc["max"].get<std::vector<double>>();
      if (dmn != mn || dmx != mx)
        flag(accessor_region(a), "accessor " + std::to_string(a) + " min/max mismatch with payload");
    }
  }

  // Per-primitive checks: index ranges and morph-target consistency.
  const json meshes = doc.value("meshes", json::array());
  for (std::size_t m = 0; m < meshes.size(); ++m) {
    for (const json& prim : meshes[m].value("primitives", json::array())) {
      if (!prim.contains("attributes") || !prim["attributes"].contains("POSITION")) {
        flag(json_off, "mesh " + std::to_string(m) + " primitive lacks POSITION");
        continue;
      }
      std::size_t pos_acc = prim["attributes"]["POSITION"].get<std::size_t>();
      if (pos_acc >= accessors.size()) continue;
      std::size_t vertex_count = accessors[pos_acc].value("count", std::size_t(0));
      if (!accessors[pos_acc].contains("min") || !accessors[pos_acc].contains("max"))
        flag(json_off, "POSITION accessor " + std::to_string(pos_acc) + " lacks min/max");
      if (prim.contains("indices")) {
        std::size_t idx_acc = prim["indices"].get<std::size_t>();
        if (idx_acc < accessors.size()) {
          std::vector<double> idx = read_accessor(asset, idx_acc);
          for (double v : idx)
            if (v >= double(vertex_count)) {
              flag(accessor_region(idx_acc), "index " + std::to_string(std::size_t(v)) +
                                                 " out of range for " + std::to_string(vertex_count) +
                                                 " vertices");
              break;
            }
        }
      }
      for (const json& target : prim.value("targets", json::array())) {
        if (!target.contains("POSITION")) continue;
        std::size_t t_acc = target["POSITION"].get<std::size_t>();
        if (t_acc < accessors.size() && accessors[t_acc].value("count", std::size_t(0)) != vertex_count)
          flag(accessor_region(t_acc), "morph target length differs from base vertex count");
      }
    }
  }

  // Animation samplers: inputs need min/max; outputs must match the channel path.
  for (const json& anim : doc.value("animations", json::array())) {
    const json samplers = anim.value("samplers", json::array());
    for (const json& sampler : samplers) {
      std::size_t input = sampler.value("input", std::size_t(0));
      if (input < accessors.size() && (!accessors[input].contains("min") || !accessors[input].contains("max")))
        flag(json_off, "animation sampler input accessor lacks min/max");
    }
    for (const json& channel : anim.value("channels", json::array())) {
      std::size_t s = channel.value("sampler", std::size_t(0));
      if (s >= samplers.size()) {
        flag(json_off, "animation channel references missing sampler");
        continue;
      }
      std::size_t input = samplers[s].value("input", std::size_t(0));
      std::size_t output = samplers[s].value("output", std::size_t(0));
      if (input >= accessors.size() || output >= accessors.size()) continue;
      std::size_t keys = accessors[input].value("count", std::size_t(0));
      std::size_t out_count = accessors[output].value("count", std::size_t(0));
      std::string path = channel.contains("target") ? channel["target"].value("path", std::string()) : "";
      if (path == "scale" && out_count != keys)
        flag(json_off, "scale sampler output count does not match keyframe count");
      if (path == "weights" && keys != 0 && out_count % keys != 0)
        flag(json_off, "weights sampler output count is not a multiple of keyframe count");
    }
  }

  return report;
}

// ---------------------------------------------------------------------------
// Summary (used by the inspect command)
// ---------------------------------------------------------------------------

struct GlbInfo {
  std::size_t mesh_count = 0;
  std::size_t vertex_count = 0;    // first primitive of the first mesh
  std::size_t triangle_count = 0;
  std::size_t morph_targets = 0;
  bool has_colors = false;
  bool animated = false;
  std::string mode = "static";     // static | stop-motion | morph
  double duration = 0.0;
};

inline GlbInfo summarize_glb(const GlbAsset& asset) {
  using nlohmann::json;
  GlbInfo info;
  const json& doc = asset.doc;
  const json meshes = doc.value("meshes", json::array());
  const json accessors = doc.value("accessors", json::array());
  info.mesh_count = meshes.size();
  if (!meshes.empty()) {
    const json prims = meshes[0].value("primitives", json::array());
    if (!prims.empty()) {
      const json& prim = prims[0];
      if (prim.contains("attributes") && prim["attributes"].contains("POSITION")) {
        std::size_t a = prim["attributes"]["POSITION"].get<std::size_t>();
        if (a < accessors.size()) info.vertex_count = accessors[a].value("count", std::size_t(0));
      }
      info.has_colors = prim.contains("attributes") && prim["attributes"].contains("COLOR_0");
      if (prim.contains("indices")) {
        std::size_t a = prim["indices"].get<std::size_t>();
        if (a < accessors.size()) info.triangle_count = accessors[a].value("count", std::size_t(0)) / 3;
      }
      info.morph_targets = prim.value("targets", json::array()).size();
    }
  }
  for (const json& anim : doc.value("animations", json::array())) {
    info.animated = true;
    for (const json& channel : anim.value("channels", json::array())) {
      std::string path = channel.contains("target") ? channel["target"].value("path", std::string()) : "";
      if (path == "weights") info.mode = "morph";
      if (path == "scale" && info.mode != "morph") info.mode = "stop-motion";
    }
    if (anim.contains("extras") && anim["extras"].contains("duration")) {
      info.duration = std::max(info.duration, anim["extras"]["duration"].get<double>());
      continue;
    }
    for (const json& sampler : anim.value("samplers", json::array())) {
      std::size_t input = sampler.value("input", std::size_t(0));
      if (input < accessors.size() && accessors[input].contains("max")) {
        const json& mx = accessors[input]["max"];
        if (mx.is_array() && !mx.empty()) info.duration = std::max(info.duration, mx[0].get<double>());
      }
    }
  }
  return info;
}

}  // namespace armesh
