// colormap.hpp — Scalar-field to vertex-color mapping: built-in control-point
// tables, range policies over a time series, and 8-bit quantization.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "armesh/core.hpp"
#include "armesh/vtk.hpp"

namespace armesh {

struct ColorStop {
  double t;        // position in [0,1], strictly increasing, endpoints 0 and 1
  double r, g, b;  // linear RGB in [0,1]
};

struct ColorMap {
  std::string name;
  std::vector<ColorStop> stops;
};

namespace detail {

inline void validate_stops(const ColorMap& map) {
  if (map.stops.size() < 2 || map.stops.front().t != 0.0 || map.stops.back().t != 1.0)
    throw Error(ErrorCode::BadColorMap,
                "colormap \"" + map.name + "\" must span t=0..1 with at least two stops");
  for (std::size_t i = 1; i < map.stops.size(); ++i)
    if (map.stops[i].t <= map.stops[i - 1].t)
      throw Error(ErrorCode::BadColorMap, "colormap \"" + map.name + "\" stops must be strictly increasing");
}

}  // namespace detail

/// Built-in maps, sampled as fixed control-point tables. "coolwarm" is the
/// default; "grayscale" is exact black-to-white and useful for monotonicity
/// checks.
inline ColorMap builtin_colormap(std::string_view name) {
  if (name == "grayscale")
    return {"grayscale", {{0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}}};
  if (name == "viridis")
    return {"viridis",
            {{0.0000, 0.267004, 0.004874, 0.329415}, {0.0625, 0.282327, 0.094955, 0.417331},
             {0.1250, 0.278826, 0.175490, 0.483397}, {0.1875, 0.258965, 0.251537, 0.524736},
             {0.2500, 0.229739, 0.322361, 0.545706}, {0.3125, 0.199430, 0.387607, 0.554642},
             {0.3750, 0.172719, 0.448791, 0.557885}, {0.4375, 0.149039, 0.508051, 0.557250},
             {0.5000, 0.127568, 0.566949, 0.550556}, {0.5625, 0.120638, 0.625828, 0.533488},
             {0.6250, 0.157851, 0.683765, 0.501686}, {0.6875, 0.246070, 0.738910, 0.452024},
             {0.7500, 0.369214, 0.788888, 0.382914}, {0.8125, 0.515992, 0.831158, 0.294279},
             {0.8750, 0.678489, 0.863742, 0.189503}, {0.9375, 0.845561, 0.887322, 0.099702},
             {1.0000, 0.993248, 0.906157, 0.143936}}};
  if (name == "plasma")
    return {"plasma",
            {{0.0000, 0.050383, 0.029803, 0.527975}, {0.0625, 0.193374, 0.018354, 0.590330},
             {0.1250, 0.299855, 0.009561, 0.631624}, {0.1875, 0.399411, 0.000859, 0.656133},
             {0.2500, 0.494877, 0.011990, 0.657865}, {0.3125, 0.584391, 0.068579, 0.632812},
             {0.3750, 0.665129, 0.138566, 0.585582}, {0.4375, 0.736019, 0.209439, 0.527908},
             {0.5000, 0.798216, 0.280197, 0.469538}, {0.5625, 0.853319, 0.351553, 0.413734},
             {0.6250, 0.901807, 0.425087, 0.359688}, {0.6875, 0.942598, 0.502639, 0.305816},
             {0.7500, 0.973416, 0.585761, 0.251540}, {0.8125, 0.991365, 0.675355, 0.198453},
             {0.8750, 0.993033, 0.771720, 0.154808}, {0.9375, 0.974443, 0.874622, 0.144061},
             {1.0000, 0.940015, 0.975158, 0.131326}}};
  if (name == "coolwarm")
    return {"coolwarm",
            {{0.0000, 0.229806, 0.298718, 0.753683}, {0.0625, 0.304174, 0.406945, 0.845263},
             {0.1250, 0.383662, 0.510183, 0.917831}, {0.1875, 0.467678, 0.605591, 0.968546},
             {0.2500, 0.554312, 0.690097, 0.995516}, {0.3125, 0.640828, 0.760752, 0.997846},
             {0.3750, 0.724041, 0.814910, 0.975651}, {0.4375, 0.800601, 0.850358, 0.930008},
             {0.5000, 0.867428, 0.864377, 0.862602}, {0.5625, 0.925563, 0.825517, 0.771136},
             {0.6250, 0.959518, 0.766973, 0.674145}, {0.6875, 0.969683, 0.690484, 0.575138},
             {0.7500, 0.956653, 0.598034, 0.477302}, {0.8125, 0.921406, 0.491420, 0.383408},
             {0.8750, 0.865391, 0.371128, 0.295769}, {0.9375, 0.790562, 0.231397, 0.216242},
             {1.0000, 0.705673, 0.015556, 0.150233}}};
  if (name == "jet")
    return {"jet",
            {{0.0000, 0.000000, 0.000000, 0.500000}, {0.0312, 0.000000, 0.000000, 0.642602},
             {0.0625, 0.000000, 0.000000, 0.785205}, {0.0938, 0.000000, 0.000000, 0.927807},
             {0.1250, 0.000000, 0.001961, 1.000000}, {0.1562, 0.000000, 0.127451, 1.000000},
             {0.1875, 0.000000, 0.252941, 1.000000}, {0.2188, 0.000000, 0.378431, 1.000000},
             {0.2500, 0.000000, 0.503922, 1.000000}, {0.2812, 0.000000, 0.629412, 1.000000},
             {0.3125, 0.000000, 0.754902, 1.000000}, {0.3438, 0.000000, 0.880392, 0.983555},
             {0.3750, 0.085389, 1.000000, 0.882353}, {0.4062, 0.186591, 1.000000, 0.781151},
             {0.4375, 0.287793, 1.000000, 0.679949}, {0.4688, 0.388994, 1.000000, 0.578748},
             {0.5000, 0.490196, 1.000000, 0.477546}, {0.5312, 0.591398, 1.000000, 0.376344},
             {0.5625, 0.692600, 1.000000, 0.275142}, {0.5938, 0.793801, 1.000000, 0.173941},
             {0.6250, 0.895003, 1.000000, 0.072739}, {0.6562, 0.996205, 0.930283, 0.000000},
             {0.6875, 1.000000, 0.814089, 0.000000}, {0.7188, 1.000000, 0.697894, 0.000000},
             {0.7500, 1.000000, 0.581699, 0.000000}, {0.7812, 1.000000, 0.465505, 0.000000},
             {0.8125, 1.000000, 0.349310, 0.000000}, {0.8438, 1.000000, 0.233115, 0.000000},
             {0.8750, 1.000000, 0.116921, 0.000000}, {0.9062, 0.909982, 0.000726, 0.000000},
             {0.9375, 0.767380, 0.000000, 0.000000}, {0.9688, 0.624777, 0.000000, 0.000000},
             {1.0000, 0.500000, 0.000000, 0.000000}}};
  throw Error(ErrorCode::BadColorMap,
              "unknown colormap \"" + std::string(name) +
                  "\"; built-ins: coolwarm, viridis, plasma, grayscale, jet");
}

inline const char* default_colormap_name() { return "coolwarm"; }

/// Parse a user colormap: one "t r g b" line per stop, t ascending over [0,1],
/// channels in [0,1]. '#' starts a comment; blank lines are ignored.
inline ColorMap parse_colormap_text(const std::string& text, const std::string& name) {
  ColorMap map;
  map.name = name;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    double v[4];
    int got = std::sscanf(line.c_str(), "%lf %lf %lf %lf", &v[0], &v[1], &v[2], &v[3]);
    if (got <= 0) continue;  // blank / comment
    if (got != 4)
      throw Error(ErrorCode::BadColorMap,
                  "line " + std::to_string(line_no) + " of colormap \"" + name + "\" needs 4 numbers");
    for (double x : v)
      if (x < 0.0 || x > 1.0)
        throw Error(ErrorCode::BadColorMap,
                    "line " + std::to_string(line_no) + " of colormap \"" + name + "\" out of [0,1]");
    map.stops.push_back({v[0], v[1], v[2], v[3]});
  }
  detail::validate_stops(map);
  return map;
}

// ---------------------------------------------------------------------------
// Range policies
// ---------------------------------------------------------------------------

struct RangeSpec {
  enum class Mode { Global, PerFrame, Explicit } mode = Mode::Global;
  double min = 0.0, max = 1.0;  // Explicit only

  static RangeSpec global() { return {}; }
  static RangeSpec per_frame() { return {Mode::PerFrame, 0.0, 1.0}; }
  static RangeSpec explicit_range(double lo, double hi) {
    if (!(lo < hi)) throw Error(ErrorCode::BadRange, "explicit range needs min < max");
    return {Mode::Explicit, lo, hi};
  }
};

struct ScalarRange {
  double min = 0.0, max = 1.0;
  bool degenerate = false;  // min == max was widened to (min, min+1)
};

/// One (min,max) per frame under the given policy. A collapsed range widens to
/// (min, min+1) and is flagged so callers can warn.
inline std::vector<ScalarRange> compute_range(const TimeSeries& series, const std::string& field,
                                              FieldComponent comp, const RangeSpec& spec) {
  std::vector<ScalarRange> out(series.frames.size());
  if (spec.mode == RangeSpec::Mode::Explicit) {
    for (auto& r : out) r = {spec.min, spec.max, false};
    return out;
  }
  std::vector<std::pair<double, double>> frame_minmax(series.frames.size());
  for (std::size_t i = 0; i < series.frames.size(); ++i) {
    std::vector<double> values = select_field(series.frames[i], field, comp);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (values.empty()) lo = hi = 0.0;
    frame_minmax[i] = {lo, hi};
  }
  auto widen = [](double lo, double hi) {
    return lo == hi ? ScalarRange{lo, lo + 1.0, true} : ScalarRange{lo, hi, false};
  };
  if (spec.mode == RangeSpec::Mode::Global) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (auto [l, h] : frame_minmax) {
      lo = std::min(lo, l);
      hi = std::max(hi, h);
    }
    for (auto& r : out) r = widen(lo, hi);
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = widen(frame_minmax[i].first, frame_minmax[i].second);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mapping
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint8_t quantize_channel(double c) {
  // round half away from zero onto 0..255
  double scaled = std::clamp(c, 0.0, 1.0) * 255.0;
  return std::uint8_t(std::lround(scaled));
}

}  // namespace detail

/// Normalize each value into [0,1] against the range (clamping), interpolate
/// the bracketing control points per channel, quantize to 8 bits
/// (round-half-away-from-zero). Alpha is always 255. Empty input yields empty
/// output.
inline std::vector<Rgba8> map_scalars(const std::vector<double>& values, const ColorMap& map,
                                      const ScalarRange& range) {
  detail::validate_stops(map);
  if (!(range.max > range.min)) throw Error(ErrorCode::BadRange, "scalar range needs max > min");
  std::vector<Rgba8> out(values.size());
  double inv = 1.0 / (range.max - range.min);
  for (std::size_t i = 0; i < values.size(); ++i) {
    double t = std::clamp((values[i] - range.min) * inv, 0.0, 1.0);
    std::size_t hi = 1;
    while (hi + 1 < map.stops.size() && map.stops[hi].t < t) ++hi;
    const ColorStop& s0 = map.stops[hi - 1];
    const ColorStop& s1 = map.stops[hi];
    double f = (t - s0.t) / (s1.t - s0.t);
    f = std::clamp(f, 0.0, 1.0);
    out[i] = Rgba8{detail::quantize_channel(s0.r + (s1.r - s0.r) * f),
                   detail::quantize_channel(s0.g + (s1.g - s0.g) * f),
                   detail::quantize_channel(s0.b + (s1.b - s0.b) * f), 255};
  }
  return out;
}

}  // namespace armesh
