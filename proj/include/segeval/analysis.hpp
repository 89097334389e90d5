#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "segeval/metrics.hpp"
#include "segeval/scoring.hpp"
#include "segeval/selection.hpp"

namespace segeval {

struct SweepGrid {
  double tau_min = 0.05;
  double tau_max = 0.95;
  double tau_step = 0.05;
  int gap = 3;
};

// Grid points tau_min, tau_min + step, ... computed by index so float
// accumulation cannot drop or duplicate an operating point.
std::vector<double> grid_taus(const SweepGrid& grid);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct SweepPoint {
  double tau = 0.0;
  Bor bor;
  double wf1 = 0.0;
  double f1 = 0.0;
  double purity = 0.0;
  double coverage = 0.0;
  std::optional<Interval> wf1_ci;
  std::optional<Interval> coverage_ci;
  long long pred_count = 0;
  long long gold_count = 0;
  int candidate_count = 0;  // pre-suppression threshold crossers
  Regime regime = Regime::Undefined;
};

struct BootstrapSpec {
  int replicates = 1000;
  std::uint64_t seed = 0;
};

// Percentile [2.5%, 97.5%] interval of `statistic` over `replicates`
// dialogue-level resamples with replacement. The statistic sees the resampled
// dialogue indices, so micro statistics can rebuild numerator/denominator
// sums per replicate. Needs >= 2 dialogues and >= 100 replicates.
Interval bootstrap_ci(std::size_t num_dialogues,
                      const std::function<double(std::span<const std::size_t>)>& statistic,
                      const BootstrapSpec& spec);

// Convenience form for macro statistics: the mean of per-dialogue values.
Interval bootstrap_ci_mean(std::span<const double> per_dialogue_values, const BootstrapSpec& spec);

struct SweepOptions {
  SweepGrid grid;
  EvalOptions eval;
  std::optional<BootstrapSpec> bootstrap;  // nullopt disables CIs
  int threads = 1;
};

// One operating point per grid tau: select_static(tau, grid.gap) on every
// dialogue, full metrics, optional bootstrap CIs for macro W-F1 and coverage.
// Scores must be probability-kind and aligned with the corpus.
std::vector<SweepPoint> sweep(std::span<const Dialogue> dialogues,
                              std::span<const ScoreVector> scores, const SweepOptions& opts);

struct Delta {
  std::string metric;
  double value = 0.0;
  Interval ci;
  long skipped_replicates = 0;  // replicates where the metric was undefined
};

struct Comparison {
  std::vector<Delta> deltas;  // f1, wf1, bor
  Regime regime_a = Regime::Undefined;
  Regime regime_b = Regime::Undefined;
  MetricsReport report_a;
  MetricsReport report_b;
};

// Paired dialogue-level bootstrap: both methods are resampled with identical
// replicate indices. Positive deltas favour method A. Replicates whose
// resample carries zero gold boundaries have no BOR; they are dropped from
// the BOR delta's interval and counted in skipped_replicates.
Comparison compare_methods(std::span<const Dialogue> dialogues,
                           std::span<const BoundarySet> preds_a,
                           std::span<const BoundarySet> preds_b, const EvalOptions& eval,
                           const BootstrapSpec& bootstrap);

// Predicted boundaries per candidate position on a corpus whose dialogues all
// have empty gold (single-segment negative controls).
double negative_control_rate(std::span<const Dialogue> dialogues,
                             std::span<const BoundarySet> preds);

// Mean |s_i| over every position of every vector; score-collapse diagnostic.
double mean_abs_score(std::span<const ScoreVector> scores);

}  // namespace segeval
