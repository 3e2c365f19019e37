#include "sasm/metrics.hpp"

#include "sasm/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace sasm {

namespace {

constexpr double kClearThreshold = 0.5;

std::vector<Box2d> boxesOf(const FrameBoxes &frame) {
  std::vector<Box2d> out;
  out.reserve(frame.size());
  for (const auto &b : frame)
    out.push_back(b.box);
  return out;
}

Eigen::MatrixXd iouMatrix(std::span<const Box2d> gt, std::span<const Box2d> pred) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(gt.size()),
                    static_cast<Eigen::Index>(pred.size()));
  for (std::size_t g = 0; g < gt.size(); ++g)
    for (std::size_t p = 0; p < pred.size(); ++p)
      m(g, p) = iou(gt[g], pred[p]);
  return m;
}

FrameMatch matchFromIou(const Eigen::MatrixXd &ious, double threshold) {
  const Eigen::MatrixXd cost =
      (ious.array() >= threshold).select(1.0 - ious.array(), kForbidden<double>);
  FrameMatch fm;
  fm.pairs = hungarianAssign(cost);
  std::vector<char> gUsed(ious.rows(), 0), pUsed(ious.cols(), 0);
  for (const auto &[g, p] : fm.pairs) {
    gUsed[g] = 1;
    pUsed[p] = 1;
  }
  for (int g = 0; g < ious.rows(); ++g)
    if (!gUsed[g])
      fm.unmatched_gt.push_back(g);
  for (int p = 0; p < ious.cols(); ++p)
    if (!pUsed[p])
      fm.unmatched_pred.push_back(p);
  return fm;
}

long countBoxes(const Sequence &seq) {
  long n = 0;
  for (const auto &f : seq)
    n += static_cast<long>(f.size());
  return n;
}

std::map<long, long> countPerId(const Sequence &seq) {
  std::map<long, long> counts;
  for (const auto &f : seq)
    for (const auto &b : f)
      ++counts[b.id];
  return counts;
}

} // namespace

double hotaThreshold(int k) { return static_cast<double>(k) / 20.0; }

FrameMatch matchFrame(std::span<const Box2d> gt, std::span<const Box2d> pred,
                      double iouThreshold) {
  if (!(iouThreshold > 0.0 && iouThreshold < 1.0))
    throw std::invalid_argument("matchFrame: threshold must lie in (0, 1)");
  return matchFromIou(iouMatrix(gt, pred), iouThreshold);
}

SequencePair alignSequences(Sequence gt, Sequence pred) {
  const std::size_t n = std::max(gt.size(), pred.size());
  gt.resize(n);
  pred.resize(n);
  return {std::move(gt), std::move(pred)};
}

ClearResult clearMota(const SequencePair &pair) {
  ClearResult r;
  r.gt_total = countBoxes(pair.gt);
  if (r.gt_total == 0)
    throw std::invalid_argument("clearMota: no ground truth boxes");

  std::map<long, long> lastMatch; // gt id -> pred id
  const std::size_t frames = std::max(pair.gt.size(), pair.pred.size());
  for (std::size_t f = 0; f < frames; ++f) {
    static const FrameBoxes kEmpty;
    const FrameBoxes &gt = f < pair.gt.size() ? pair.gt[f] : kEmpty;
    const FrameBoxes &pr = f < pair.pred.size() ? pair.pred[f] : kEmpty;
    const Eigen::MatrixXd ious = iouMatrix(boxesOf(gt), boxesOf(pr));

    std::vector<char> gUsed(gt.size(), 0), pUsed(pr.size(), 0);
    std::vector<std::pair<int, int>> matched;
    for (std::size_t g = 0; g < gt.size(); ++g) {
      const auto it = lastMatch.find(gt[g].id);
      if (it == lastMatch.end())
        continue;
      for (std::size_t p = 0; p < pr.size(); ++p) {
        if (!pUsed[p] && pr[p].id == it->second && ious(g, p) >= kClearThreshold) {
          gUsed[g] = pUsed[p] = 1;
          matched.emplace_back(static_cast<int>(g), static_cast<int>(p));
          break;
        }
      }
    }

    Eigen::MatrixXd cost(static_cast<Eigen::Index>(gt.size()),
                         static_cast<Eigen::Index>(pr.size()));
    for (std::size_t g = 0; g < gt.size(); ++g)
      for (std::size_t p = 0; p < pr.size(); ++p)
        cost(g, p) = (!gUsed[g] && !pUsed[p] && ious(g, p) >= kClearThreshold)
                         ? 1.0 - ious(g, p)
                         : kForbidden<double>;
    for (const auto &pr_ : hungarianAssign(cost))
      matched.push_back(pr_);

    for (const auto &[g, p] : matched) {
      auto [it, fresh] = lastMatch.try_emplace(gt[g].id, pr[p].id);
      if (!fresh && it->second != pr[p].id) {
        ++r.idsw;
        it->second = pr[p].id;
      }
    }
    r.tp += static_cast<long>(matched.size());
    r.fn += static_cast<long>(gt.size() - matched.size());
    r.fp += static_cast<long>(pr.size() - matched.size());
  }
  r.mota = 1.0 - static_cast<double>(r.fn + r.fp + r.idsw) / static_cast<double>(r.gt_total);
  return r;
}

IdResult idMetrics(const SequencePair &pair) {
  const auto gtCounts = countPerId(pair.gt);
  const auto predCounts = countPerId(pair.pred);
  IdResult r;
  long gtTotal = 0, predTotal = 0;
  for (const auto &[id, n] : gtCounts)
    gtTotal += n;
  for (const auto &[id, n] : predCounts)
    predTotal += n;
  if (gtTotal == 0 && predTotal == 0) {
    r.idf1 = 1.0;
    return r;
  }

  std::map<long, int> gIndex, pIndex;
  std::vector<long> gN, pN;
  for (const auto &[id, n] : gtCounts) {
    gIndex[id] = static_cast<int>(gN.size());
    gN.push_back(n);
  }
  for (const auto &[id, n] : predCounts) {
    pIndex[id] = static_cast<int>(pN.size());
    pN.push_back(n);
  }
  const int G = static_cast<int>(gN.size());
  const int P = static_cast<int>(pN.size());

  Eigen::MatrixXd overlap = Eigen::MatrixXd::Zero(G, P);
  const std::size_t frames = std::min(pair.gt.size(), pair.pred.size());
  for (std::size_t f = 0; f < frames; ++f)
    for (const auto &g : pair.gt[f])
      for (const auto &p : pair.pred[f])
        if (iou(g.box, p.box) >= kClearThreshold)
          overlap(gIndex[g.id], pIndex[p.id]) += 1.0;

  // Rows: real gt then one dummy per pred. Cols: real pred then one dummy per gt.
  const int n = G + P;
  Eigen::MatrixXd cost = Eigen::MatrixXd::Constant(n, n, kForbidden<double>);
  for (int g = 0; g < G; ++g) {
    for (int p = 0; p < P; ++p)
      cost(g, p) = static_cast<double>(gN[g] + pN[p]) - 2.0 * overlap(g, p);
    cost(g, P + g) = static_cast<double>(gN[g]);
  }
  for (int p = 0; p < P; ++p) {
    cost(G + p, p) = static_cast<double>(pN[p]);
    for (int g = 0; g < G; ++g)
      cost(G + p, P + g) = 0.0;
  }

  double idtp = 0.0;
  for (const auto &[row, col] : hungarianAssign(cost))
    if (row < G && col < P)
      idtp += overlap(row, col);
  r.idtp = std::lround(idtp);
  r.idfn = gtTotal - r.idtp;
  r.idfp = predTotal - r.idtp;
  r.idf1 = 2.0 * static_cast<double>(r.idtp) / static_cast<double>(gtTotal + predTotal);
  return r;
}

double idf1(const SequencePair &pair) { return idMetrics(pair).idf1; }

HotaResult hota(const SequencePair &pair) {
  if (countBoxes(pair.gt) == 0)
    throw std::invalid_argument("hota: no ground truth boxes");
  const auto gtCounts = countPerId(pair.gt);
  const auto predCounts = countPerId(pair.pred);

  const std::size_t frames = std::max(pair.gt.size(), pair.pred.size());
  std::vector<Eigen::MatrixXd> ious(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::vector<Box2d> g = f < pair.gt.size() ? boxesOf(pair.gt[f]) : std::vector<Box2d>{};
    const std::vector<Box2d> p =
        f < pair.pred.size() ? boxesOf(pair.pred[f]) : std::vector<Box2d>{};
    ious[f] = iouMatrix(g, p);
  }

  HotaResult r;
  for (int k = 0; k < kHotaThresholds; ++k) {
    const double alpha = hotaThreshold(k + 1);
    long tp = 0, fn = 0, fp = 0;
    std::map<std::pair<long, long>, long> pairCounts;
    for (std::size_t f = 0; f < frames; ++f) {
      const FrameMatch fm = matchFromIou(ious[f], alpha);
      tp += static_cast<long>(fm.pairs.size());
      fn += static_cast<long>(fm.unmatched_gt.size());
      fp += static_cast<long>(fm.unmatched_pred.size());
      for (const auto &[g, p] : fm.pairs)
        ++pairCounts[{pair.gt[f][g].id, pair.pred[f][p].id}];
    }
    const double deta = static_cast<double>(tp) / static_cast<double>(tp + fn + fp);
    double assSum = 0.0;
    for (const auto &[ids, tpa] : pairCounts) {
      const long denom = gtCounts.at(ids.first) + predCounts.at(ids.second) - tpa;
      assSum += static_cast<double>(tpa) * static_cast<double>(tpa) / static_cast<double>(denom);
    }
    const double assa = tp > 0 ? assSum / static_cast<double>(tp) : 0.0;
    r.deta_at[k] = deta;
    r.assa_at[k] = assa;
    r.hota_at[k] = std::sqrt(deta * assa);
  }
  for (int k = 0; k < kHotaThresholds; ++k) {
    r.hota += r.hota_at[k];
    r.deta += r.deta_at[k];
    r.assa += r.assa_at[k];
  }
  r.hota /= kHotaThresholds;
  r.deta /= kHotaThresholds;
  r.assa /= kHotaThresholds;
  return r;
}

MetricsReport evaluate(const SequencePair &pair) {
  const ClearResult clear = clearMota(pair);
  const HotaResult h = hota(pair);
  MetricsReport r;
  r.hota = h.hota;
  r.deta = h.deta;
  r.assa = h.assa;
  r.mota = clear.mota;
  r.idf1 = idf1(pair);
  r.idsw = clear.idsw;
  r.tp = clear.tp;
  r.fp = clear.fp;
  r.fn = clear.fn;
  return r;
}

std::string reportCsvHeader() { return "label,HOTA,DetA,AssA,MOTA,IDF1,IDSW,TP,FP,FN\n"; }

std::string reportCsvRow(const std::string &label, const MetricsReport &r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%.6f,%.6f,%ld,%ld,%ld,%ld\n",
                label.c_str(), r.hota, r.deta, r.assa, r.mota, r.idf1, r.idsw, r.tp, r.fp,
                r.fn);
  return buf;
}

std::string reportMarkdown(std::span<const std::pair<std::string, MetricsReport>> rows) {
  std::size_t width = 6;
  for (const auto &[label, r] : rows)
    width = std::max(width, label.size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "| %-*s | %8s | %8s | %8s | %9s | %8s | %6s |\n",
                static_cast<int>(width), "Method", "HOTA", "DetA", "AssA", "MOTA", "IDF1",
                "IDSW");
  out += buf;
  out += "|" + std::string(width + 2, '-') + "|----------|----------|----------|-----------|"
         "----------|--------|\n";
  for (const auto &[label, r] : rows) {
    std::snprintf(buf, sizeof buf, "| %-*s | %8.6f | %8.6f | %8.6f | %9.6f | %8.6f | %6ld |\n",
                  static_cast<int>(width), label.c_str(), r.hota, r.deta, r.assa, r.mota,
                  r.idf1, r.idsw);
    out += buf;
  }
  return out;
}

} // namespace sasm
