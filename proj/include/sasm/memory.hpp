#pragma once

#include "sasm/geometry.hpp"

#include <Eigen/Core>

#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sasm {

/// How a track decides which embeddings enter its memory.
enum class MemoryPolicy {
  None,           // never store; fused query is always the current embedding
  Sparse,         // store the current embedding once accumulated motion > epsilon
  SparseWithOFS,  // as Sparse, but store the least-overlapped embedding since the last store
  Dense,          // store every frame
  SparseDelaying, // as Sparse, but wait for a frame with low overlap before storing
};

std::string_view toString(MemoryPolicy p);
MemoryPolicy parseMemoryPolicy(std::string_view name);

template <typename Scalar>
struct MemoryConfig {
  Scalar epsilon = Scalar(0.1);
  int max_entries = 10;
  Scalar alpha = Scalar(0.5);
  int embedding_dim = 32;
  Scalar delay_overlap_threshold = Scalar(0.2);
  MemoryPolicy policy = MemoryPolicy::SparseWithOFS;

  void validate() const {
    if (!(epsilon >= Scalar(0)))
      throw std::invalid_argument("memory.epsilon must be >= 0");
    if (max_entries < 1)
      throw std::invalid_argument("memory.max_entries must be >= 1");
    if (!(alpha >= Scalar(0) && alpha <= Scalar(1)))
      throw std::invalid_argument("memory.alpha must lie in [0, 1]");
    if (embedding_dim < 1)
      throw std::invalid_argument("memory.embedding_dim must be >= 1");
    if (!(delay_overlap_threshold >= Scalar(0) && delay_overlap_threshold <= Scalar(1)))
      throw std::invalid_argument("memory.delay_overlap must lie in [0, 1]");
  }
};

template <typename Scalar>
struct MemoryEntry {
  Eigen::VectorX<Scalar> embedding;
  long frame_idx = 0;
  Scalar overlap = Scalar(0);
};

/// Pending embedding to be stored at the next commit.
template <typename Scalar>
struct OfsCandidate {
  Eigen::VectorX<Scalar> embedding;
  long frame_idx = 0;
  Scalar overlap = Scalar(0);
};

/// Per-track sparse memory state.
///
/// `accumulator` holds centroid displacement summed since the last store.
/// Entries are kept oldest first and never exceed the configured capacity.
template <typename Scalar>
struct TrackMemory {
  std::deque<MemoryEntry<Scalar>> entries;
  Scalar accumulator = Scalar(0);
  std::optional<Point2<Scalar>> last_center;
  std::optional<OfsCandidate<Scalar>> candidate;
  long last_frame = -1;
  long commits = 0;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

using MemoryConfigd = MemoryConfig<double>;
using TrackMemoryd = TrackMemory<double>;

namespace detail {
template <typename Derived>
void checkEmbedding(const Eigen::MatrixBase<Derived> &e, int dim) {
  if (e.size() != dim)
    throw std::invalid_argument("embedding dimension " + std::to_string(e.size()) +
                                " does not match configured " + std::to_string(dim));
  if (!e.allFinite())
    throw std::invalid_argument("embedding contains non-finite values");
}
} // namespace detail

/// Pushes the pending candidate, evicting the oldest entry past capacity.
template <typename Scalar>
void commitStore(TrackMemory<Scalar> &mem, const MemoryConfig<Scalar> &cfg) {
  if (!mem.candidate)
    throw std::logic_error("commitStore: no candidate to store");
  if (!mem.entries.empty() && mem.candidate->frame_idx <= mem.entries.back().frame_idx)
    throw std::logic_error("commitStore: candidate frame is not newer than memory");
  mem.entries.push_back({std::move(mem.candidate->embedding), mem.candidate->frame_idx,
                         mem.candidate->overlap});
  while (static_cast<int>(mem.entries.size()) > cfg.max_entries)
    mem.entries.pop_front();
  mem.accumulator = Scalar(0);
  mem.candidate.reset();
  ++mem.commits;
}

/// Feeds one matched observation into the memory. Returns true when an
/// embedding was stored this frame.
template <typename Scalar, typename Derived>
bool observe(TrackMemory<Scalar> &mem, const Box2D<Scalar> &box,
             const Eigen::MatrixBase<Derived> &embedding, Scalar overlap,
             long frame_idx, const MemoryConfig<Scalar> &cfg) {
  detail::checkEmbedding(embedding, cfg.embedding_dim);
  if (!(overlap >= Scalar(0) && overlap <= Scalar(1)))
    throw std::invalid_argument("observe: overlap must lie in [0, 1]");
  if (frame_idx <= mem.last_frame)
    throw std::invalid_argument("observe: frame " + std::to_string(frame_idx) +
                                " is not after " + std::to_string(mem.last_frame));
  mem.last_frame = frame_idx;

  if (cfg.policy == MemoryPolicy::None)
    return false;

  const Point2<Scalar> c = center(box);
  if (mem.last_center)
    mem.accumulator += euclideanDistance(c, *mem.last_center);
  mem.last_center = c;

  const bool keep_previous = cfg.policy == MemoryPolicy::SparseWithOFS && mem.candidate &&
                             !(overlap < mem.candidate->overlap);
  if (!keep_previous)
    mem.candidate = OfsCandidate<Scalar>{embedding, frame_idx, overlap};

  bool store = false;
  switch (cfg.policy) {
  case MemoryPolicy::Dense:
    store = true;
    break;
  case MemoryPolicy::Sparse:
  case MemoryPolicy::SparseWithOFS:
    store = mem.accumulator > cfg.epsilon;
    break;
  case MemoryPolicy::SparseDelaying:
    store = mem.accumulator > cfg.epsilon && overlap <= cfg.delay_overlap_threshold;
    break;
  case MemoryPolicy::None:
    break;
  }
  if (store)
    commitStore(mem, cfg);
  return store;
}

/// alpha * current + (1 - alpha) * mean(memory); the current embedding when
/// the memory is empty.
template <typename Scalar, typename Derived>
Eigen::VectorX<Scalar> fusedQuery(const TrackMemory<Scalar> &mem,
                                  const Eigen::MatrixBase<Derived> &current,
                                  const MemoryConfig<Scalar> &cfg) {
  if (current.size() != cfg.embedding_dim)
    throw std::invalid_argument("fusedQuery: embedding dimension mismatch");
  if (mem.entries.empty())
    return current;
  Eigen::VectorX<Scalar> sum = Eigen::VectorX<Scalar>::Zero(current.size());
  for (const auto &e : mem.entries)
    sum += e.embedding;
  const Scalar m = static_cast<Scalar>(mem.entries.size());
  return cfg.alpha * current + ((Scalar(1) - cfg.alpha) / m) * sum;
}

} // namespace sasm
