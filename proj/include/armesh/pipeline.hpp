// pipeline.hpp — End-to-end conversion driver behind the CLI: ingest, surface
// extraction, coloring, decimation, animation and GLB export, plus the
// inspect report and file plumbing (globs, atomic writes).
#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fnmatch.h>
#include <fstream>
#include <string>
#include <vector>

#include "armesh/animate.hpp"
#include "armesh/colormap.hpp"
#include "armesh/core.hpp"
#include "armesh/decimate.hpp"
#include "armesh/gltf.hpp"
#include "armesh/mesh.hpp"
#include "armesh/page.hpp"
#include "armesh/ply.hpp"
#include "armesh/surface.hpp"
#include "armesh/vtk.hpp"

namespace armesh {

// ---------------------------------------------------------------------------
// File plumbing
// ---------------------------------------------------------------------------

inline std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open \"" + path + "\"");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

/// Write to "<path>.tmp" and rename into place, so failures never leave a
/// partial output file.
inline void write_file_atomic(const std::string& path, const std::uint8_t* data, std::size_t size) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot create \"" + tmp + "\"");
    out.write(reinterpret_cast<const char*>(data), std::streamsize(size));
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error(ErrorCode::IoError, "failed writing \"" + tmp + "\"");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "failed renaming temporary file onto \"" + path + "\"");
  }
}

inline void write_file_atomic(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  write_file_atomic(path, bytes.data(), bytes.size());
}

inline void write_file_atomic(const std::string& path, const std::string& text) {
  write_file_atomic(path, reinterpret_cast<const std::uint8_t*>(text.data()), text.size());
}

/// Numeric-aware string order: digit runs compare by value, text by bytes.
inline bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      std::size_t i0 = i, j0 = j;
      while (i < a.size() && std::isdigit(static_cast<unsigned char>(a[i]))) ++i;
      while (j < b.size() && std::isdigit(static_cast<unsigned char>(b[j]))) ++j;
      std::string na = a.substr(i0, i - i0), nb = b.substr(j0, j - j0);
      std::string ta = na.substr(std::min(na.find_first_not_of('0'), na.size()));
      std::string tb = nb.substr(std::min(nb.find_first_not_of('0'), nb.size()));
      if (ta.size() != tb.size()) return ta.size() < tb.size();
      if (ta != tb) return ta < tb;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() < b.size();
}

/// Expand glob patterns (for shells that pass them through quoted). Matches
/// within one pattern are sorted lexicographically, or numerically with
/// `sort_natural`; plain paths pass through in the order given.
inline std::vector<std::string> expand_inputs(const std::vector<std::string>& patterns,
                                              bool sort_natural) {
  namespace fs = std::filesystem;
  std::vector<std::string> out;
  for (const std::string& pattern : patterns) {
    if (pattern.find_first_of("*?[") == std::string::npos) {
      out.push_back(pattern);
      continue;
    }
    fs::path p(pattern);
    fs::path dir = p.parent_path().empty() ? fs::path(".") : p.parent_path();
    std::string leaf = p.filename().string();
    std::vector<std::string> matches;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
      std::string name = entry.path().filename().string();
      if (fnmatch(leaf.c_str(), name.c_str(), 0) == 0)
        matches.push_back((p.parent_path() / name).string());
    }
    if (sort_natural)
      std::sort(matches.begin(), matches.end(), natural_less);
    else
      std::sort(matches.begin(), matches.end());
    if (matches.empty())
      throw Error(ErrorCode::IoError, "pattern \"" + pattern + "\" matched no files");
    out.insert(out.end(), matches.begin(), matches.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Conversion
// ---------------------------------------------------------------------------

struct ConvertOptions {
  std::vector<std::string> inputs;  // already expanded paths
  std::string field;                // "NAME" or "NAME:x|y|z|mag"; empty = uncolored
  std::string colormap = "coolwarm";  // built-in name or stops file path
  std::string range = "global";       // global | perframe | MIN:MAX
  double decimate_ratio = 1.0;
  bool solidify_on = false;
  double solidify_thickness = 0.0;  // 0 = auto (1% of bounding-box diagonal)
  double beam_radius = 0.0;         // 0 = auto (2% of bounding-box diagonal)
  int beam_sides = 12;
  bool beam_caps = true;
  std::string animate;              // "" (auto) | "stop" | "morph"
  std::string interp = "step";      // step | linear (morph)
  double fps = 12.0;
  double fit_size = 0.5;            // meters
  bool unlit = false;
  std::string ply_out;
  std::string out;                  // GLB path; empty = in-memory only (tests)
};

struct ConvertResult {
  std::vector<std::string> stages;    // "stage: ..." summary lines
  std::vector<std::string> warnings;
  std::vector<std::uint8_t> glb;
  AnimationPlan::Mode mode = AnimationPlan::Mode::Static;
};

namespace pipeline_detail {

inline std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline std::pair<std::string, FieldComponent> split_field_selector(const std::string& spec) {
  std::size_t colon = spec.rfind(':');
  if (colon == std::string::npos) return {spec, FieldComponent::Default};
  return {spec.substr(0, colon), parse_component(spec.substr(colon + 1))};
}

inline RangeSpec parse_range(const std::string& text) {
  if (text == "global") return RangeSpec::global();
  if (text == "perframe") return RangeSpec::per_frame();
  std::size_t colon = text.find(':');
  if (colon == std::string::npos)
    throw Error(ErrorCode::BadRange, "range must be global, perframe or MIN:MAX");
  char* end = nullptr;
  double lo = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + colon)
    throw Error(ErrorCode::BadRange, "cannot parse range minimum in \"" + text + "\"");
  double hi = std::strtod(text.c_str() + colon + 1, &end);
  if (end != text.c_str() + text.size())
    throw Error(ErrorCode::BadRange, "cannot parse range maximum in \"" + text + "\"");
  return RangeSpec::explicit_range(lo, hi);
}

inline ColorMap resolve_colormap(const std::string& name_or_path) {
  if (std::filesystem::exists(name_or_path)) {
    std::vector<std::uint8_t> bytes = read_file(name_or_path);
    return parse_colormap_text(std::string(bytes.begin(), bytes.end()),
                               std::filesystem::path(name_or_path).filename().string());
  }
  return builtin_colormap(name_or_path);
}

inline bool grid_has_surface_cells(const UnstructuredGrid& grid) {
  for (const Cell& c : grid.cells)
    if (c.type != CellType::Line) return true;
  return false;
}

inline Aabb series_point_bounds(const TimeSeries& series) {
  Aabb box;
  for (const auto& frame : series.frames)
    for (const Vec3& p : frame.points) box.expand(p);
  return box;
}

}  // namespace pipeline_detail

/// Run the full conversion. Stage lines mirror the module contracts (counts
/// per stage) and are stable enough to script against.
inline ConvertResult run_convert(const ConvertOptions& opt) {
  using namespace pipeline_detail;
  ConvertResult result;
  auto stage = [&](const std::string& line) { result.stages.push_back("stage: " + line); };

  // Ingest.
  if (opt.inputs.empty()) throw Error(ErrorCode::EmptySeries, "no input files given");
  std::vector<std::vector<std::uint8_t>> files(opt.inputs.size());
  parallel_for(opt.inputs.size(), [&](std::size_t i) { files[i] = read_file(opt.inputs[i]); });
  TimeSeries series = assemble_series(files, opt.inputs, &result.warnings);
  files.clear();
  std::size_t n = series.frames.size();
  stage("parse frames=" + std::to_string(n) + " points=" + std::to_string(series.frames[0].points.size()) +
        " cells=" + std::to_string(series.frames[0].cells.size()) +
        " constant_connectivity=" + (series.constant_connectivity ? "true" : "false"));

  // Animation mode.
  std::string animate = opt.animate;
  if (animate.empty() && n > 1) {
    animate = "stop";
    result.warnings.push_back("multiple frames without --animate; defaulting to stop-motion");
  }
  if (animate == "morph" && !series.constant_connectivity) {
    std::size_t bad = 1;
    for (std::size_t i = 1; i < n; ++i)
      if (!series.frames[i].same_connectivity(series.frames[0])) {
        bad = i;
        break;
      }
    throw Error(ErrorCode::ConnectivityMismatch,
                opt.inputs[bad] + ": connectivity differs from frame 0 (morph needs a constant mesh)");
  }

  // Field selection: reduce to one scalar per point on each grid up front so
  // extraction carries it (vector selectors and cell averaging included).
  std::string field_name;
  FieldComponent component = FieldComponent::Default;
  if (!opt.field.empty()) {
    auto [name, comp] = split_field_selector(opt.field);
    field_name = name;
    component = comp;
    for (auto& frame : series.frames) {
      AttributeArray scalar;
      scalar.components = 1;
      scalar.values = select_field(frame, field_name, component, &result.warnings);
      frame.point_fields[field_name] = std::move(scalar);
    }
  }

  // Ranges over the series (after scalar reduction, selector is moot).
  std::vector<ScalarRange> ranges;
  ColorMap cmap;
  if (!field_name.empty()) {
    cmap = resolve_colormap(opt.colormap);
    ranges = compute_range(series, field_name, FieldComponent::Default, parse_range(opt.range));
    for (std::size_t i = 0; i < ranges.size(); ++i)
      if (ranges[i].degenerate) {
        result.warnings.push_back("field \"" + field_name + "\" has a constant value in frame " +
                                  std::to_string(i) + "; widened range to [" + fmt_num(ranges[i].min) +
                                  ", " + fmt_num(ranges[i].max) + "]");
        break;
      }
  }

  // Per-frame surface: boundary extraction or beam sweep.
  bool beam_path = !grid_has_surface_cells(series.frames[0]);
  Aabb grid_bounds = series_point_bounds(series);
  double beam_radius = opt.beam_radius > 0.0 ? opt.beam_radius : 0.02 * grid_bounds.diagonal();
  std::vector<SurfaceMesh> surfaces(n);
  parallel_for(n, [&](std::size_t i) {
    surfaces[i] = beam_path ? tube(series.frames[i], beam_radius, opt.beam_sides, opt.beam_caps)
                            : extract_boundary(series.frames[i]);
  });
  if (beam_path)
    stage("tube radius=" + fmt_num(beam_radius) + " sides=" + std::to_string(opt.beam_sides) +
          " vertices=" + std::to_string(surfaces[0].vertex_count()) +
          " triangles=" + std::to_string(surfaces[0].triangle_count()));
  else
    stage("extract vertices=" + std::to_string(surfaces[0].vertex_count()) +
          " triangles=" + std::to_string(surfaces[0].triangle_count()));

  // Colors, before solidify/decimation so duplicated shells inherit them.
  if (!field_name.empty()) {
    parallel_for(n, [&](std::size_t i) {
      const AttributeArray& arr = surfaces[i].fields.at(field_name);
      surfaces[i].colors = map_scalars(arr.values, cmap, ranges[i]);
    });
    stage("color field=" + opt.field + " map=" + cmap.name + " range=[" + fmt_num(ranges[0].min) +
          ", " + fmt_num(ranges[0].max) + "]");
  }

  // Interchange PLY: the colored surface as it leaves extraction (frame 0).
  if (!opt.ply_out.empty()) {
    write_file_atomic(opt.ply_out, write_ply(surfaces[0], PlyEncoding::BinaryLittleEndian));
    stage("ply-out path=" + opt.ply_out);
  }

  if (opt.solidify_on) {
    double thickness =
        opt.solidify_thickness > 0.0 ? opt.solidify_thickness : 0.01 * grid_bounds.diagonal();
    parallel_for(n, [&](std::size_t i) { surfaces[i] = solidify(surfaces[i], thickness); });
    stage("solidify thickness=" + fmt_num(thickness) +
          " triangles=" + std::to_string(surfaces[0].triangle_count()));
  }

  // Decimation: one collapse log, replayed on every frame so connectivity
  // stays shared; frames with differing connectivity decimate independently.
  if (opt.decimate_ratio < 1.0) {
    std::size_t before = surfaces[0].triangle_count();
    bool shared = true;
    for (std::size_t i = 1; i < n; ++i)
      if (!(surfaces[i].triangles == surfaces[0].triangles) ||
          surfaces[i].positions.size() != surfaces[0].positions.size())
        shared = false;
    if (n == 1) {
      surfaces[0] = decimate(surfaces[0], opt.decimate_ratio).mesh;
    } else if (shared) {
      CollapseLog log = decimate(surfaces[0], opt.decimate_ratio).log;
      parallel_for(n, [&](std::size_t i) { surfaces[i] = replay(surfaces[i], log); });
    } else {
      parallel_for(n, [&](std::size_t i) {
        surfaces[i] = decimate(surfaces[i], opt.decimate_ratio).mesh;
      });
    }
    stage("decimate ratio=" + fmt_num(opt.decimate_ratio) + " triangles=" + std::to_string(before) +
          "->" + std::to_string(surfaces[0].triangle_count()));
  }

  // Fit over the union of all frames, applied on the root node at export.
  Transform fit = auto_fit(surfaces, opt.fit_size);
  stage("fit size=" + fmt_num(opt.fit_size) + " scale=" + fmt_num(fit.scale));

  // Animation plan and export.
  AnimationPlan plan;
  if (animate == "morph") {
    MorphInterpolation interp =
        opt.interp == "linear" ? MorphInterpolation::Linear : MorphInterpolation::Step;
    plan = build_morph(std::move(surfaces), opt.fps, interp, series.frame_times);
    if (plan.targets.size() > 8)
      result.warnings.push_back(std::to_string(plan.targets.size()) +
                                " morph targets; some viewers cap simultaneously active targets at 8");
  } else if (animate == "stop") {
    plan = build_stop_motion(std::move(surfaces), opt.fps, series.frame_times);
  } else {
    plan = build_stop_motion(std::move(surfaces), opt.fps);  // single frame: static plan
  }
  result.mode = plan.mode;

  result.glb = export_glb(plan, opt.unlit ? MaterialMode::Unlit : MaterialMode::Lit, fit);
  std::string mode_name = plan.mode == AnimationPlan::Mode::Static ? "static"
                          : plan.mode == AnimationPlan::Mode::StopMotion ? "stop-motion"
                                                                         : "morph";
  stage("export mode=" + mode_name + " bytes=" + std::to_string(result.glb.size()) +
        (plan.mode == AnimationPlan::Mode::Morph
             ? " targets=" + std::to_string(plan.targets.size())
             : "") +
        (plan.mode != AnimationPlan::Mode::Static ? " duration=" + fmt_num(plan.duration) + "s" : ""));
  if (result.glb.size() > 25u * 1024 * 1024 && opt.decimate_ratio >= 1.0)
    result.warnings.push_back("output exceeds 25 MB; consider --decimate to shrink the asset");

  if (!opt.out.empty()) write_file_atomic(opt.out, result.glb);
  return result;
}

// ---------------------------------------------------------------------------
// Inspect
// ---------------------------------------------------------------------------

namespace pipeline_detail {

inline std::string count_noun(std::size_t n, const char* noun) {
  return std::to_string(n) + " " + noun + (n == 1 ? "" : "s");
}

inline std::string fmt_seconds(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  std::string s = buf;
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

}  // namespace pipeline_detail

/// One-line report for a VTK, PLY or GLB file.
inline std::string inspect_file(const std::string& path) {
  using namespace pipeline_detail;
  std::vector<std::uint8_t> bytes = read_file(path);

  if (bytes.size() >= 5 && std::memcmp(bytes.data(), "# vtk", 5) == 0) {
    UnstructuredGrid grid = parse_vtk(bytes);
    std::map<std::string, std::size_t> type_counts;
    for (const Cell& c : grid.cells) ++type_counts[cell_type_name(c.type)];
    std::string breakdown;
    for (const auto& [name, count] : type_counts) {
      if (!breakdown.empty()) breakdown += ", ";
      breakdown += count == 1 ? name : std::to_string(count) + " " + name;
    }
    std::string fields;
    for (const auto& [name, arr] : grid.point_fields) {
      if (!fields.empty()) fields += ", ";
      fields += name + "[" + std::to_string(arr.count()) + "]";
      if (arr.components == 3) fields += ":vec3";
    }
    for (const auto& [name, arr] : grid.cell_fields) {
      if (!fields.empty()) fields += ", ";
      fields += name + "[" + std::to_string(arr.count()) + "]:cell";
    }
    if (fields.empty()) fields = "none";
    return count_noun(grid.points.size(), "point") + ", " + count_noun(grid.cells.size(), "cell") +
           " (" + breakdown + "), fields: " + fields;
  }

  if (bytes.size() >= 4 && std::memcmp(bytes.data(), "ply\n", 4) == 0) {
    SurfaceMesh mesh = read_ply(bytes);
    return "PLY, " + count_noun(mesh.vertex_count(), "vertex") + ", " +
           count_noun(mesh.triangle_count(), "triangle") +
           (mesh.has_colors() ? ", vertex colors" : ", no colors");
  }

  if (bytes.size() >= 4 && load_le<std::uint32_t>(bytes.data()) == 0x46546C67u) {
    GlbAsset asset = decode_glb(bytes);
    GlbInfo info = summarize_glb(asset);
    ValidationReport report = validate_glb(bytes);
    std::string line = "GLB " + info.mode + ", " + count_noun(info.mesh_count, "mesh") + ", " +
                       count_noun(info.vertex_count, "vertex") + ", " +
                       count_noun(info.triangle_count, "triangle");
    if (info.morph_targets > 0) line += ", morph targets: " + std::to_string(info.morph_targets);
    if (info.animated) line += ", duration " + fmt_seconds(info.duration) + " s";
    line += info.has_colors ? ", vertex colors" : ", no colors";
    line += report.ok() ? ", valid" : ", " + count_noun(report.violations.size(), "violation");
    return line;
  }

  throw Error(ErrorCode::UnknownFormat, "\"" + path + "\" is not a VTK, PLY or GLB file");
}

// ---------------------------------------------------------------------------
// Viewer page
// ---------------------------------------------------------------------------

struct PageResult {
  std::string page_path;
  std::string url_hint;  // what a deployer should QR-encode once hosted
};

/// Emit <out_dir>/index.html referencing the model by relative path.
inline PageResult emit_viewer_page(const std::string& model_path, const std::string& title,
                                   const std::string& out_dir) {
  namespace fs = std::filesystem;
  if (!fs::exists(model_path))
    throw Error(ErrorCode::MissingModel, "model file \"" + model_path + "\" does not exist");
  fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  fs::path model_abs = fs::absolute(model_path);
  fs::path rel = fs::relative(model_abs, fs::absolute(dir), ec);
  std::string model_ref = ec || rel.empty() ? fs::path(model_path).filename().string()
                                            : rel.generic_string();
  std::string html = viewer_page_html(title, model_ref);
  fs::path page = dir / "index.html";
  write_file_atomic(page.string(), html);
  return {page.string(), page.generic_string()};
}

}  // namespace armesh
