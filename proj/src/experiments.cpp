#include "sasm/experiments.hpp"

#include "sasm/mot_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace sasm {

int threadCount() {
  if (const char *env = std::getenv("SASM_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1)
      return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

VariantResults runVariants(const ScenarioConfig &base, std::span<const Variant> variants,
                           int n_seeds, int threads) {
  for (const auto &v : variants)
    v.tracker.validate();
  VariantResults results(variants.size(), std::vector<MetricsReport>(n_seeds));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failureMutex;
  auto worker = [&] {
    for (int s = next++; s < n_seeds; s = next++) {
      try {
        ScenarioConfig cfg = base;
        cfg.seed = base.seed + static_cast<std::uint64_t>(s);
        const Scenario sc = generateScenario(cfg);
        const Sequence gt = toSequence(sc.gt);
        for (std::size_t v = 0; v < variants.size(); ++v) {
          const auto out = runTracker(sc.detections, variants[v].tracker);
          results[v][s] = evaluate(alignSequences(gt, toSequence(out)));
        }
      } catch (...) {
        std::lock_guard lock(failureMutex);
        if (!failure)
          failure = std::current_exception();
      }
    }
  };
  const int n = std::clamp(threads, 1, std::max(1, n_seeds));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i)
    pool.emplace_back(worker);
  worker();
  for (auto &t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);
  return results;
}

MetricsReport meanReport(std::span<const MetricsReport> reports) {
  MetricsReport m;
  if (reports.empty())
    return m;
  for (const auto &r : reports) {
    m.hota += r.hota;
    m.deta += r.deta;
    m.assa += r.assa;
    m.mota += r.mota;
    m.idf1 += r.idf1;
    m.idsw += r.idsw;
    m.tp += r.tp;
    m.fp += r.fp;
    m.fn += r.fn;
  }
  const double n = static_cast<double>(reports.size());
  m.hota /= n;
  m.deta /= n;
  m.assa /= n;
  m.mota /= n;
  m.idf1 /= n;
  // counts stay as totals
  return m;
}

double binomialUpperTail(int wins, int n) {
  if (wins <= 0)
    return 1.0;
  if (wins > n)
    return 0.0;
  double p = 0.0;
  for (int k = wins; k <= n; ++k)
    p += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) -
                  n * std::log(2.0));
  return std::min(1.0, p);
}

SignTest signTest(std::span<const double> treatment, std::span<const double> control) {
  SignTest t;
  const std::size_t n = std::min(treatment.size(), control.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (treatment[i] > control[i])
      ++t.wins;
    else if (treatment[i] < control[i])
      ++t.losses;
    else
      ++t.ties;
  }
  t.p_value = binomialUpperTail(t.wins, t.wins + t.losses);
  return t;
}

std::string_view toString(Metric m) {
  switch (m) {
  case Metric::Hota:
    return "HOTA";
  case Metric::DetA:
    return "DetA";
  case Metric::AssA:
    return "AssA";
  case Metric::Mota:
    return "MOTA";
  case Metric::Idf1:
    return "IDF1";
  }
  return "?";
}

std::vector<double> column(std::span<const MetricsReport> reports, Metric m) {
  std::vector<double> out;
  out.reserve(reports.size());
  for (const auto &r : reports) {
    switch (m) {
    case Metric::Hota:
      out.push_back(r.hota);
      break;
    case Metric::DetA:
      out.push_back(r.deta);
      break;
    case Metric::AssA:
      out.push_back(r.assa);
      break;
    case Metric::Mota:
      out.push_back(r.mota);
      break;
    case Metric::Idf1:
      out.push_back(r.idf1);
      break;
    }
  }
  return out;
}

namespace {
Variant withPolicy(std::string label, TrackerConfig cfg, MemoryPolicy p) {
  cfg.memory.policy = p;
  return {std::move(label), std::move(cfg)};
}
} // namespace

std::vector<Variant> ablationVariants(const TrackerConfig &base) {
  return {withPolicy("Baseline", base, MemoryPolicy::None),
          withPolicy("+ SASM", base, MemoryPolicy::Sparse),
          withPolicy("+ OFS", base, MemoryPolicy::SparseWithOFS)};
}

std::vector<Variant> designVariants(const TrackerConfig &base) {
  return {withPolicy("Dense", base, MemoryPolicy::Dense),
          withPolicy("Sparse", base, MemoryPolicy::Sparse),
          withPolicy("Delaying", base, MemoryPolicy::SparseDelaying),
          withPolicy("OFS", base, MemoryPolicy::SparseWithOFS)};
}

std::vector<Variant> sweepVariants(const TrackerConfig &base) {
  std::vector<Variant> out;
  char buf[64];
  for (double eps : kSweepEpsilons) {
    TrackerConfig cfg = base;
    cfg.memory.epsilon = eps;
    std::snprintf(buf, sizeof buf, "epsilon=%g", eps);
    out.push_back(withPolicy(buf, cfg, MemoryPolicy::SparseWithOFS));
  }
  for (int m : kSweepMemoryLengths) {
    TrackerConfig cfg = base;
    cfg.memory.max_entries = m;
    std::snprintf(buf, sizeof buf, "memory=%d", m);
    out.push_back(withPolicy(buf, cfg, MemoryPolicy::SparseWithOFS));
  }
  return out;
}

std::string comparisonTable(std::span<const Variant> variants, const VariantResults &results,
                            std::span<const int> reference) {
  std::size_t width = 6;
  for (const auto &v : variants)
    width = std::max(width, v.label.size());
  std::string out;
  char buf[512];
  std::snprintf(buf, sizeof buf, "| %-*s | %-20s | %-20s | %-20s | %-20s | %-20s | %8s |\n",
                static_cast<int>(width), "Method", "HOTA", "DetA", "AssA", "MOTA", "IDF1", "IDSW");
  out += buf;
  out += "|" + std::string(width + 2, '-');
  for (int i = 0; i < 5; ++i)
    out += "|----------------------";
  out += "|----------|\n";

  std::vector<MetricsReport> means;
  for (const auto &r : results)
    means.push_back(meanReport(r));
  auto cell = [&](double v, double ref, bool hasRef) {
    char c[64];
    if (hasRef)
      std::snprintf(c, sizeof c, "%.6f (%+.6f)", v, v - ref);
    else
      std::snprintf(c, sizeof c, "%.6f", v);
    return std::string(c);
  };
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const int ref = i < reference.size() ? reference[i] : -1;
    const bool has = ref >= 0;
    const MetricsReport &m = means[i];
    const MetricsReport &r = has ? means[ref] : m;
    std::snprintf(buf, sizeof buf, "| %-*s | %-20s | %-20s | %-20s | %-20s | %-20s | %8ld |\n",
                  static_cast<int>(width), variants[i].label.c_str(),
                  cell(m.hota, r.hota, has).c_str(), cell(m.deta, r.deta, has).c_str(),
                  cell(m.assa, r.assa, has).c_str(), cell(m.mota, r.mota, has).c_str(),
                  cell(m.idf1, r.idf1, has).c_str(), m.idsw);
    out += buf;
  }
  return out;
}

std::string signTestLines(std::span<const Variant> variants, const VariantResults &results,
                          int treatment, int control, std::span<const Metric> metrics) {
  std::string out;
  char buf[256];
  for (Metric m : metrics) {
    const auto a = column(results[treatment], m);
    const auto b = column(results[control], m);
    const SignTest t = signTest(a, b);
    std::snprintf(buf, sizeof buf, "sign test %s > %s on %s: wins=%d losses=%d ties=%d p=%.6f\n",
                  variants[treatment].label.c_str(), variants[control].label.c_str(),
                  std::string(toString(m)).c_str(), t.wins, t.losses, t.ties, t.p_value);
    out += buf;
  }
  return out;
}

std::string resultsCsv(std::span<const Variant> variants, const VariantResults &results,
                       std::uint64_t base_seed) {
  std::string out = "seed," + reportCsvHeader();
  for (std::size_t v = 0; v < variants.size(); ++v)
    for (std::size_t s = 0; s < results[v].size(); ++s)
      out += std::to_string(base_seed + s) + "," + reportCsvRow(variants[v].label, results[v][s]);
  return out;
}

} // namespace sasm
