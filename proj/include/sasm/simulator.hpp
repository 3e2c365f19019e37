#pragma once

#include "sasm/geometry.hpp"
#include "sasm/tracker.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace sasm {

/// Synthetic scenario parameters. Appearance lives on the unit sphere and
/// rotates inside a fixed per-object plane by `drift_rate` radians per unit
/// of centroid displacement.
struct ScenarioConfig {
  int n_objects = 8;
  int n_frames = 500;
  int embedding_dim = 32;

  double drift_rate = 1.0;           // radians per unit displacement
  double rotation_event_prob = 0.01; // per object-frame
  double rotation_magnitude = 0.5;   // radians
  double occlusion_blend = 0.6;      // contamination at full overlap
  double noise_sigma = 0.05;         // per embedding component
  double miss_prob_base = 0.02;
  double miss_prob_occluded = 0.5; // applies when overlap > 0.5
  // Share of each object's appearance plane drawn from a common plane, so
  // objects look alike (uniform costumes) while drift stays a pure rotation.
  double appearance_similarity = 0.0;

  // constant velocity with random turns, reflecting at the borders
  double speed_min = 0.002;
  double speed_max = 0.012;
  double turn_prob = 0.02;
  double turn_sigma = 0.8;
  double width_min = 0.06;
  double width_max = 0.12;
  double aspect_min = 1.8; // h / w
  double aspect_max = 2.6;
  double box_jitter = 0.02; // relative to box size

  std::uint64_t seed = 0;

  void validate() const;
};

struct GtObject {
  long id = 0;
  Box2d box;
};

struct Scenario {
  std::vector<std::vector<GtObject>> gt;              // per frame, ascending id
  std::vector<std::vector<Detection>> detections;     // per frame
  std::vector<std::vector<long>> detection_source;    // gt id behind each detection
  std::vector<std::vector<Eigen::VectorXd>> true_appearance; // per frame, per object
};

Scenario generateScenario(const ScenarioConfig &cfg);

} // namespace sasm
