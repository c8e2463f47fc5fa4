// animate.hpp — Time-series motion encoded two ways: stop-motion visibility
// switching (one node per frame, step-interpolated 0/1 scale tracks) and
// morph targets (base mesh + per-vertex deltas with one-hot weight tracks).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "armesh/core.hpp"
#include "armesh/mesh.hpp"

namespace armesh {

/// Step-interpolated uniform-scale keyframes for one stop-motion node.
struct ScaleTrack {
  std::vector<double> times;
  std::vector<double> scales;  // 0 = hidden, 1 = visible

  /// Step sampling: value of the last key at or before t (clamped to ends).
  double sample(double t) const {
    if (times.empty()) return 1.0;
    double value = scales.front();
    for (std::size_t k = 0; k < times.size(); ++k) {
      if (times[k] <= t) value = scales[k];
      else break;
    }
    return value;
  }
};

enum class MorphInterpolation { Step, Linear };

struct AnimationPlan {
  enum class Mode { Static, StopMotion, Morph } mode = Mode::Static;
  double fps = 1.0;
  double duration = 0.0;

  // Static and stop-motion geometry: one entry per frame (exactly one for Static).
  std::vector<SurfaceMesh> frames;
  std::vector<ScaleTrack> tracks;  // stop-motion only, parallel to frames

  // Morph data: base geometry lives in frames[0].
  std::vector<std::vector<Vec3>> targets;        // per target: one delta per base vertex
  std::vector<double> key_times;                 // N keyframe times
  std::vector<std::vector<double>> weight_tracks;  // per target: one weight per keyframe
  MorphInterpolation interpolation = MorphInterpolation::Step;

  const SurfaceMesh& base() const { return frames.front(); }
};

namespace detail {

/// Keyframe times: uniform i/fps, or the series' own times shifted to start
/// at zero. Duration extends one final interval past the last key, which for
/// uniform timing is exactly N/fps.
inline std::vector<double> plan_key_times(std::size_t n, double fps,
                                          const std::vector<double>& explicit_times) {
  std::vector<double> keys(n);
  if (explicit_times.size() == n && n > 1) {
    for (std::size_t i = 0; i < n; ++i) keys[i] = explicit_times[i] - explicit_times[0];
  } else {
    for (std::size_t i = 0; i < n; ++i) keys[i] = double(i) / fps;
  }
  return keys;
}

inline double plan_duration(const std::vector<double>& keys, double fps) {
  if (keys.size() < 2) return 1.0 / fps;
  return keys.back() + (keys.back() - keys[keys.size() - 2]);
}

}  // namespace detail

/// Stop-motion: node i is scaled to 1 on [t_i, t_{i+1}) and 0 elsewhere, with
/// the last frame holding until the plan duration. Step sampling clamps to the
/// first key, so every track leads with its t=0 state and exactly one node is
/// visible at any time.
inline AnimationPlan build_stop_motion(std::vector<SurfaceMesh> frames, double fps,
                                       const std::vector<double>& frame_times = {}) {
  if (frames.empty()) throw Error(ErrorCode::EmptyFrames, "stop-motion needs at least one frame");
  if (!(fps > 0.0)) throw Error(ErrorCode::BadFps, "fps must be positive");

  AnimationPlan plan;
  plan.fps = fps;
  std::size_t n = frames.size();
  std::vector<double> keys = detail::plan_key_times(n, fps, frame_times);
  plan.duration = detail::plan_duration(keys, fps);
  plan.frames = std::move(frames);
  if (n == 1) {
    plan.mode = AnimationPlan::Mode::Static;
    return plan;
  }

  plan.mode = AnimationPlan::Mode::StopMotion;
  plan.tracks.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ScaleTrack& track = plan.tracks[i];
    if (i == 0) {
      track.times = {keys[0], keys[1]};
      track.scales = {1.0, 0.0};
    } else if (i + 1 == n) {
      track.times = {keys[0], keys[i]};
      track.scales = {0.0, 1.0};
    } else {
      track.times = {keys[0], keys[i], keys[i + 1]};
      track.scales = {0.0, 1.0, 0.0};
    }
  }
  return plan;
}

/// Morph targets: base = frame 0, target i-1 = frame i positions minus base,
/// one-hot weight tracks over the keyframes. Requires identical connectivity
/// in every frame. Colors come from frame 0.
inline AnimationPlan build_morph(std::vector<SurfaceMesh> frames, double fps,
                                 MorphInterpolation interpolation,
                                 const std::vector<double>& frame_times = {}) {
  if (frames.empty()) throw Error(ErrorCode::EmptyFrames, "morph animation needs at least one frame");
  if (!(fps > 0.0)) throw Error(ErrorCode::BadFps, "fps must be positive");
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i].positions.size() != frames[0].positions.size() ||
        !(frames[i].triangles == frames[0].triangles))
      throw Error(ErrorCode::ConnectivityMismatch,
                  "frame " + std::to_string(i) + " connectivity differs from frame 0");
  }

  AnimationPlan plan;
  plan.fps = fps;
  plan.interpolation = interpolation;
  std::size_t n = frames.size();
  std::vector<double> keys = detail::plan_key_times(n, fps, frame_times);
  plan.duration = detail::plan_duration(keys, fps);
  plan.key_times = std::move(keys);

  std::size_t nv = frames[0].positions.size();
  plan.targets.reserve(n > 0 ? n - 1 : 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<Vec3> delta(nv);
    for (std::size_t v = 0; v < nv; ++v) delta[v] = frames[i].positions[v] - frames[0].positions[v];
    plan.targets.push_back(std::move(delta));
  }
  plan.weight_tracks.assign(plan.targets.size(), std::vector<double>(n, 0.0));
  for (std::size_t i = 1; i < n; ++i) plan.weight_tracks[i - 1][i] = 1.0;

  plan.frames = {std::move(frames[0])};
  plan.mode = plan.targets.empty() ? AnimationPlan::Mode::Static : AnimationPlan::Mode::Morph;
  return plan;
}

/// Evaluate every morph weight track at time t under the plan interpolation.
inline std::vector<double> morph_weights_at(const AnimationPlan& plan, double t) {
  const std::vector<double>& keys = plan.key_times;
  std::vector<double> weights(plan.weight_tracks.size(), 0.0);
  if (keys.empty()) return weights;
  std::size_t hi = 0;
  while (hi + 1 < keys.size() && keys[hi + 1] <= t) ++hi;
  for (std::size_t w = 0; w < weights.size(); ++w) {
    const std::vector<double>& track = plan.weight_tracks[w];
    if (plan.interpolation == MorphInterpolation::Step || hi + 1 >= keys.size() || t <= keys[hi]) {
      weights[w] = track[hi];
    } else {
      double f = (t - keys[hi]) / (keys[hi + 1] - keys[hi]);
      weights[w] = track[hi] + (track[hi + 1] - track[hi]) * f;
    }
  }
  return weights;
}

/// Base positions plus the weighted sum of target deltas at time t.
inline std::vector<Vec3> morph_positions_at(const AnimationPlan& plan, double t) {
  std::vector<Vec3> pos = plan.base().positions;
  std::vector<double> weights = morph_weights_at(plan, t);
  for (std::size_t w = 0; w < weights.size(); ++w) {
    if (weights[w] == 0.0) continue;
    for (std::size_t v = 0; v < pos.size(); ++v) pos[v] += plan.targets[w][v] * weights[w];
  }
  return pos;
}

/// Number of stop-motion nodes visible at time t (the exclusivity invariant
/// says this is exactly 1 for any t in [0, duration)).
inline int visible_count_at(const AnimationPlan& plan, double t) {
  int count = 0;
  for (const ScaleTrack& track : plan.tracks)
    if (track.sample(t) > 0.5) ++count;
  return count;
}

/// Index of the first visible stop-motion node at time t.
inline std::size_t visible_frame_at(const AnimationPlan& plan, double t) {
  for (std::size_t i = 0; i < plan.tracks.size(); ++i)
    if (plan.tracks[i].sample(t) > 0.5) return i;
  return 0;
}

}  // namespace armesh
