#pragma once

#include "sasm/geometry.hpp"
#include "sasm/tracker.hpp"

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sasm {

using FrameBoxes = std::vector<TrackedBox>;
using Sequence = std::vector<FrameBoxes>; // index = frame - 1

/// Ground truth and predictions over the same frames.
struct SequencePair {
  Sequence gt;
  Sequence pred;
};

struct FrameMatch {
  std::vector<std::pair<int, int>> pairs; // (gt index, pred index)
  std::vector<int> unmatched_gt;
  std::vector<int> unmatched_pred;
};

struct ClearResult {
  double mota = 0.0;
  long idsw = 0;
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long gt_total = 0;
};

struct IdResult {
  double idf1 = 0.0;
  long idtp = 0;
  long idfp = 0;
  long idfn = 0;
};

inline constexpr int kHotaThresholds = 19;

struct HotaResult {
  double hota = 0.0;
  double deta = 0.0;
  double assa = 0.0;
  std::array<double, kHotaThresholds> hota_at{};
  std::array<double, kHotaThresholds> deta_at{};
  std::array<double, kHotaThresholds> assa_at{};
};

struct MetricsReport {
  double hota = 0.0;
  double deta = 0.0;
  double assa = 0.0;
  double mota = 0.0;
  double idf1 = 0.0;
  long idsw = 0;
  long tp = 0;
  long fp = 0;
  long fn = 0;
};

/// The HOTA localization thresholds k / 20 for k = 1..19.
double hotaThreshold(int k);

/// One-to-one matching with IoU >= threshold: most pairs first, then largest
/// IoU sum.
FrameMatch matchFrame(std::span<const Box2d> gt, std::span<const Box2d> pred,
                      double iouThreshold);

/// CLEAR-MOT at IoU 0.5 with carry-over of each GT id's last matched pred id.
ClearResult clearMota(const SequencePair &pair);

/// Identity metrics from the optimal GT/pred trajectory bijection at IoU 0.5.
IdResult idMetrics(const SequencePair &pair);
double idf1(const SequencePair &pair);

/// HOTA with pure IoU-maximal matching at every threshold.
HotaResult hota(const SequencePair &pair);

MetricsReport evaluate(const SequencePair &pair);

/// Pads the shorter of gt/pred with empty frames.
SequencePair alignSequences(Sequence gt, Sequence pred);

std::string reportCsvHeader();
std::string reportCsvRow(const std::string &label, const MetricsReport &r);

/// Aligned markdown table, one row per labelled report.
std::string reportMarkdown(std::span<const std::pair<std::string, MetricsReport>> rows);

} // namespace sasm
