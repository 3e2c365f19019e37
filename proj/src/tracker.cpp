#include "sasm/tracker.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace sasm {

void TrackerConfig::validate() const {
  memory.validate();
  if (!(match_threshold >= 0.0))
    throw std::invalid_argument("tracker.match_threshold must be >= 0");
  if (!(iou_gate >= 0.0 && iou_gate <= 1.0))
    throw std::invalid_argument("tracker.iou_gate must lie in [0, 1]");
  if (!(min_score >= 0.0 && min_score <= 1.0))
    throw std::invalid_argument("tracker.min_score must lie in [0, 1]");
  if (max_misses < 0)
    throw std::invalid_argument("tracker.max_misses must be >= 0");
  if (!(cost_blend >= 0.0 && cost_blend <= 1.0))
    throw std::invalid_argument("tracker.cost_blend must lie in [0, 1]");
}

double cosineDistance(const Eigen::Ref<const Eigen::VectorXd> &a,
                      const Eigen::Ref<const Eigen::VectorXd> &b) {
  if (a.size() != b.size())
    throw std::invalid_argument("cosineDistance: dimension mismatch");
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0))
    throw std::invalid_argument("cosineDistance: zero-norm embedding");
  return std::clamp(1.0 - a.dot(b) / (na * nb), 0.0, 2.0);
}

Eigen::MatrixXd buildCostMatrix(std::span<const TrackState> tracks,
                                std::span<const Detection> dets,
                                const TrackerConfig &cfg) {
  const auto T = static_cast<Eigen::Index>(tracks.size());
  const auto N = static_cast<Eigen::Index>(dets.size());
  Eigen::MatrixXd cost(T, N);
  const double lambda = cfg.cost_blend;
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index n = 0; n < N; ++n) {
      const double overlap = iou(tracks[t].last_box, dets[n].box);
      const double c = lambda * cosineDistance(tracks[t].query, dets[n].embedding) / 2.0 +
                       (1.0 - lambda) * (1.0 - overlap);
      const bool gated = cfg.iou_gate > 0.0 && overlap < cfg.iou_gate;
      cost(t, n) = (gated || c > cfg.match_threshold) ? kForbidden<double> : c;
    }
  }
  return cost;
}

FrameResult step(TrackerState &state, std::span<const Detection> dets, long frame,
                 const TrackerConfig &cfg) {
  if (frame <= state.last_frame)
    throw std::invalid_argument("tracker step: frame " + std::to_string(frame) +
                                " is not after " + std::to_string(state.last_frame));
  state.last_frame = frame;

  std::vector<Detection> accepted;
  accepted.reserve(dets.size());
  for (const auto &d : dets) {
    checkBox(d.box);
    detail::checkEmbedding(d.embedding, cfg.memory.embedding_dim);
    if (d.score >= cfg.min_score)
      accepted.push_back(d);
  }
  std::vector<Box2d> boxes;
  boxes.reserve(accepted.size());
  for (const auto &d : accepted)
    boxes.push_back(d.box);

  const Eigen::MatrixXd cost = buildCostMatrix(state.tracks, accepted, cfg);
  const Assignment pairs = hungarianAssign(cost);

  std::vector<char> trackMatched(state.tracks.size(), 0);
  std::vector<char> detMatched(accepted.size(), 0);
  for (const auto &[t, n] : pairs) {
    trackMatched[t] = 1;
    detMatched[n] = 1;
  }
  // Tracks missed this frame still occlude: their last boxes join the overlap set.
  for (std::size_t t = 0; t < state.tracks.size(); ++t)
    if (!trackMatched[t])
      boxes.push_back(state.tracks[t].last_box);

  FrameResult out;
  out.frame = frame;

  for (const auto &[t, n] : pairs) {
    TrackState &track = state.tracks[t];
    const Detection &det = accepted[n];
    const double overlap = maxIouVsOthers<double>(static_cast<std::size_t>(n), boxes);
    track.last_box = det.box;
    observe(track.memory, det.box, det.embedding, overlap, frame, cfg.memory);
    track.query = fusedQuery(track.memory, det.embedding, cfg.memory);
    track.misses = 0;
    ++track.age;
    out.boxes.push_back({track.track_id, det.box});
  }

  std::vector<TrackState> survivors;
  survivors.reserve(state.tracks.size() + accepted.size());
  for (std::size_t t = 0; t < state.tracks.size(); ++t) {
    TrackState &track = state.tracks[t];
    if (!trackMatched[t]) {
      ++track.misses;
      ++track.age;
      if (track.misses > cfg.max_misses)
        continue;
    }
    survivors.push_back(std::move(track));
  }

  for (std::size_t n = 0; n < accepted.size(); ++n) {
    if (detMatched[n])
      continue;
    const Detection &det = accepted[n];
    TrackState track;
    track.track_id = state.next_id++;
    track.query = det.embedding;
    track.last_box = det.box;
    observe(track.memory, det.box, det.embedding, maxIouVsOthers<double>(n, boxes), frame,
            cfg.memory);
    out.boxes.push_back({track.track_id, det.box});
    survivors.push_back(std::move(track));
  }
  state.tracks = std::move(survivors);

  std::sort(out.boxes.begin(), out.boxes.end(),
            [](const TrackedBox &a, const TrackedBox &b) { return a.id < b.id; });
  return out;
}

std::vector<FrameResult> runTracker(const std::vector<std::vector<Detection>> &detections,
                                    const TrackerConfig &cfg) {
  cfg.validate();
  TrackerState state;
  std::vector<FrameResult> results;
  results.reserve(detections.size());
  for (std::size_t f = 0; f < detections.size(); ++f)
    results.push_back(step(state, detections[f], static_cast<long>(f) + 1, cfg));
  return results;
}

} // namespace sasm
