#pragma once

#include "sasm/metrics.hpp"
#include "sasm/simulator.hpp"
#include "sasm/tracker.hpp"

#include <span>
#include <string>
#include <vector>

namespace sasm {

struct Variant {
  std::string label;
  TrackerConfig tracker;
};

/// Per-variant, per-seed reports: results[variant][seed].
using VariantResults = std::vector<std::vector<MetricsReport>>;

/// Worker count from SASM_THREADS, else hardware concurrency; at least 1.
int threadCount();

/// Generates one scenario per seed (base.seed + i) and runs every variant
/// on it. Results do not depend on the thread count.
VariantResults runVariants(const ScenarioConfig &base, std::span<const Variant> variants,
                           int n_seeds, int threads);

MetricsReport meanReport(std::span<const MetricsReport> reports);

/// Exact one-sided sign test on paired samples, ties dropped.
struct SignTest {
  int wins = 0;
  int losses = 0;
  int ties = 0;
  double p_value = 1.0;
};

SignTest signTest(std::span<const double> treatment, std::span<const double> control);

/// P(X >= wins) for X ~ Binomial(n, 1/2).
double binomialUpperTail(int wins, int n);

enum class Metric { Hota, DetA, AssA, Mota, Idf1 };
std::string_view toString(Metric m);
std::vector<double> column(std::span<const MetricsReport> reports, Metric m);

/// {Baseline, +SASM, +OFS}: no memory, sparse memory, sparse memory with OFS.
std::vector<Variant> ablationVariants(const TrackerConfig &base);

/// {Dense, Sparse, Delaying, OFS}.
std::vector<Variant> designVariants(const TrackerConfig &base);

inline constexpr double kSweepEpsilons[] = {0.05, 0.1, 0.2, 0.3, 0.4};
inline constexpr int kSweepMemoryLengths[] = {5, 10, 15, 20};

/// Moving-threshold rows followed by memory-length rows, all with OFS.
std::vector<Variant> sweepVariants(const TrackerConfig &base);

/// Mean table with per-row deltas against `reference` rows (index, or -1 for none).
std::string comparisonTable(std::span<const Variant> variants, const VariantResults &results,
                            std::span<const int> reference);

std::string signTestLines(std::span<const Variant> variants, const VariantResults &results,
                          int treatment, int control, std::span<const Metric> metrics);

std::string resultsCsv(std::span<const Variant> variants, const VariantResults &results,
                       std::uint64_t base_seed);

} // namespace sasm
