#pragma once

#include "sasm/assignment.hpp"
#include "sasm/geometry.hpp"
#include "sasm/memory.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace sasm {

struct Detection {
  Box2d box;
  Eigen::VectorXd embedding;
  double score = 1.0;
};

struct TrackerConfig {
  MemoryConfigd memory;
  double match_threshold = 0.4;
  double iou_gate = 0.0; // 0 disables the gate
  double min_score = 0.5;
  int max_misses = 30;
  double cost_blend = 0.7; // weight of appearance vs. spatial cost

  void validate() const;
};

struct TrackState {
  long track_id = 0;
  Eigen::VectorXd query;
  TrackMemoryd memory;
  Box2d last_box;
  int misses = 0;
  int age = 1;
};

struct TrackerState {
  std::vector<TrackState> tracks; // ascending track_id
  long next_id = 1;
  long last_frame = 0;
};

struct TrackedBox {
  long id = 0;
  Box2d box;
  bool operator==(const TrackedBox &) const = default;
};

struct FrameResult {
  long frame = 0;
  std::vector<TrackedBox> boxes; // ascending id
};

/// 1 - cos(a, b), in [0, 2]. Throws on dimension mismatch or zero norm.
double cosineDistance(const Eigen::Ref<const Eigen::VectorXd> &a,
                      const Eigen::Ref<const Eigen::VectorXd> &b);

/// T x N blended appearance/spatial cost. Inadmissible cells hold kForbidden<double>.
Eigen::MatrixXd buildCostMatrix(std::span<const TrackState> tracks,
                                std::span<const Detection> dets,
                                const TrackerConfig &cfg);

/// Advances the tracker by one frame. Frames must strictly increase.
FrameResult step(TrackerState &state, std::span<const Detection> dets, long frame,
                 const TrackerConfig &cfg);

/// Runs a fresh tracker over frames numbered 1..detections.size().
std::vector<FrameResult> runTracker(const std::vector<std::vector<Detection>> &detections,
                                    const TrackerConfig &cfg);

} // namespace sasm
