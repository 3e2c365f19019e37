#include "sasm/simulator.hpp"

#include "sasm/prng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sasm {

void ScenarioConfig::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (n_objects < 1 || n_frames < 1 || embedding_dim < 2)
    throw std::invalid_argument("scenario needs n_objects >= 1, n_frames >= 1, embedding_dim >= 2");
  if (!(drift_rate >= 0.0) || !(noise_sigma >= 0.0) || !std::isfinite(rotation_magnitude))
    throw std::invalid_argument("scenario drift_rate and noise_sigma must be >= 0");
  if (!prob(rotation_event_prob) || !prob(occlusion_blend) || !prob(miss_prob_base) ||
      !prob(miss_prob_occluded) || !prob(turn_prob) ||
      !(appearance_similarity >= 0.0 && appearance_similarity < 1.0))
    throw std::invalid_argument(
        "scenario probabilities and occlusion_blend must lie in [0, 1], appearance_similarity in [0, 1)");
  if (!(speed_min >= 0.0 && speed_max >= speed_min))
    throw std::invalid_argument("scenario speed range is invalid");
  if (!(width_min > 0.0 && width_max >= width_min && aspect_min > 0.0 &&
        aspect_max >= aspect_min && width_max * aspect_max < 1.0 && width_max < 1.0))
    throw std::invalid_argument("scenario box size range must fit inside the unit square");
  if (!(box_jitter >= 0.0) || !(turn_sigma >= 0.0))
    throw std::invalid_argument("scenario box_jitter and turn_sigma must be >= 0");
}

namespace {

struct Mover {
  Box2d box;
  double heading = 0.0;
  double speed = 0.0;
  Eigen::VectorXd basis_u;
  Eigen::VectorXd basis_v;
  double phase = 0.0;
  bool turned = false; // a rotation event turns away; the next one turns back

  Eigen::VectorXd appearance() const {
    return std::cos(phase) * basis_u + std::sin(phase) * basis_v;
  }
};

Eigen::VectorXd gaussianVector(SplitMix64 &rng, int dim) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i)
    v[i] = rng.gaussian();
  return v;
}

// Folds a coordinate back into [lo, hi]; returns true when it bounced.
bool reflect(double &x, double lo, double hi) {
  bool bounced = false;
  for (int guard = 0; guard < 8 && (x < lo || x > hi); ++guard) {
    x = x < lo ? 2.0 * lo - x : 2.0 * hi - x;
    bounced = true;
  }
  x = std::clamp(x, lo, hi);
  return bounced;
}

} // namespace

Scenario generateScenario(const ScenarioConfig &cfg) {
  cfg.validate();
  SplitMix64 rng(cfg.seed);
  const int D = cfg.embedding_dim;

  const double shared = std::sqrt(cfg.appearance_similarity);
  const double own = std::sqrt(1.0 - cfg.appearance_similarity);
  const Eigen::VectorXd common_u = gaussianVector(rng, D).normalized();
  const Eigen::VectorXd common_v = gaussianVector(rng, D).normalized();

  std::vector<Mover> movers(cfg.n_objects);
  for (auto &m : movers) {
    m.box.w = rng.uniform(cfg.width_min, cfg.width_max);
    m.box.h = m.box.w * rng.uniform(cfg.aspect_min, cfg.aspect_max);
    m.box.cx = rng.uniform(m.box.w / 2.0, 1.0 - m.box.w / 2.0);
    m.box.cy = rng.uniform(m.box.h / 2.0, 1.0 - m.box.h / 2.0);
    m.heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
    m.speed = rng.uniform(cfg.speed_min, cfg.speed_max);
    m.basis_u = (shared * common_u + own * gaussianVector(rng, D).normalized()).normalized();
    Eigen::VectorXd g = shared * common_v + own * gaussianVector(rng, D).normalized();
    g -= g.dot(m.basis_u) * m.basis_u;
    m.basis_v = g.normalized();
  }

  Scenario sc;
  sc.gt.resize(cfg.n_frames);
  sc.detections.resize(cfg.n_frames);
  sc.detection_source.resize(cfg.n_frames);
  sc.true_appearance.resize(cfg.n_frames);

  std::vector<Box2d> boxes(cfg.n_objects);
  std::vector<Eigen::VectorXd> appearance(cfg.n_objects);
  const double beta = cfg.occlusion_blend;

  for (int t = 0; t < cfg.n_frames; ++t) {
    if (t > 0) {
      for (auto &m : movers) {
        // Fixed draw count per object-frame keeps the stream aligned.
        const double turnDraw = rng.uniform();
        const double turnAngle = rng.gaussian();
        const double eventDraw = rng.uniform();
        if (turnDraw < cfg.turn_prob)
          m.heading += cfg.turn_sigma * turnAngle;

        const Point2d before = center(m.box);
        double x = m.box.cx + m.speed * std::cos(m.heading);
        double y = m.box.cy + m.speed * std::sin(m.heading);
        if (reflect(x, m.box.w / 2.0, 1.0 - m.box.w / 2.0))
          m.heading = std::numbers::pi - m.heading;
        if (reflect(y, m.box.h / 2.0, 1.0 - m.box.h / 2.0))
          m.heading = -m.heading;
        m.box.cx = x;
        m.box.cy = y;

        // Pose follows the horizontal facing direction, so walking back
        // undoes the drift of walking out.
        const double facing = std::cos(m.heading) < 0.0 ? -1.0 : 1.0;
        m.phase += facing * cfg.drift_rate * euclideanDistance(center(m.box), before);
        if (eventDraw < cfg.rotation_event_prob) {
          m.phase += m.turned ? -cfg.rotation_magnitude : cfg.rotation_magnitude;
          m.turned = !m.turned;
        }
      }
    }

    for (int i = 0; i < cfg.n_objects; ++i) {
      boxes[i] = movers[i].box;
      appearance[i] = movers[i].appearance();
      sc.gt[t].push_back({i + 1, boxes[i]});
    }
    sc.true_appearance[t] = appearance;

    for (int i = 0; i < cfg.n_objects; ++i) {
      const double missDraw = rng.uniform();
      double jitter[4];
      for (double &j : jitter)
        j = rng.gaussian();
      const Eigen::VectorXd noise = gaussianVector(rng, D);
      const double scoreNoise = rng.gaussian();

      const double ov = maxIouVsOthers<double>(i, boxes);
      const double missProb = ov > 0.5 ? cfg.miss_prob_occluded : cfg.miss_prob_base;
      if (missDraw < missProb)
        continue;

      Eigen::VectorXd mixed = (1.0 - beta * ov) * appearance[i];
      const long occluder = argmaxIouVsOthers<double>(i, boxes);
      if (occluder >= 0)
        mixed += beta * ov * appearance[occluder];
      mixed += cfg.noise_sigma * noise;

      Detection det;
      const Box2d &b = boxes[i];
      det.box.cx = b.cx + cfg.box_jitter * b.w * jitter[0];
      det.box.cy = b.cy + cfg.box_jitter * b.h * jitter[1];
      det.box.w = b.w * std::exp(cfg.box_jitter * jitter[2]);
      det.box.h = b.h * std::exp(cfg.box_jitter * jitter[3]);
      det.embedding = mixed.normalized();
      det.score = std::clamp(0.9 - 0.3 * ov + 0.05 * scoreNoise, 0.0, 1.0);
      sc.detections[t].push_back(std::move(det));
      sc.detection_source[t].push_back(i + 1);
    }
  }
  return sc;
}

} // namespace sasm
