#include "segeval/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "segeval/parallel.hpp"
#include "segeval/rand.hpp"

namespace segeval {

namespace {

double percentile(std::vector<double>& sorted_values, double q) {
  std::sort(sorted_values.begin(), sorted_values.end());
  const std::size_t n = sorted_values.size();
  double rank = q * static_cast<double>(n - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(rank));
  std::size_t hi = std::min(lo + 1, n - 1);
  double frac = rank - static_cast<double>(lo);
  return sorted_values[lo] * (1.0 - frac) + sorted_values[hi] * frac;
}

std::vector<std::size_t> resample_indices(std::size_t n, std::uint64_t replicate_seed) {
  SplitMix rng(replicate_seed);
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<std::size_t>(rng.next_below(n));
  return idx;
}

void validate_bootstrap(std::size_t num_dialogues, const BootstrapSpec& spec) {
  if (num_dialogues < 2)
    throw InputError("bootstrap: need at least 2 dialogues to resample");
  if (spec.replicates < 100)
    throw InputError("bootstrap: need at least 100 replicates");
}

}  // namespace

std::vector<double> grid_taus(const SweepGrid& grid) {
  if (!(grid.tau_min < grid.tau_max)) throw InputError("sweep grid: tau_min must be below tau_max");
  if (!(grid.tau_step > 0.0)) throw InputError("sweep grid: tau_step must be positive");
  int count = static_cast<int>(std::floor((grid.tau_max - grid.tau_min) / grid.tau_step + 0.5)) + 1;
  std::vector<double> taus;
  taus.reserve(count);
  for (int k = 0; k < count; ++k) taus.push_back(grid.tau_min + k * grid.tau_step);
  return taus;
}

Interval bootstrap_ci(std::size_t num_dialogues,
                      const std::function<double(std::span<const std::size_t>)>& statistic,
                      const BootstrapSpec& spec) {
  validate_bootstrap(num_dialogues, spec);
  std::vector<double> stats(static_cast<std::size_t>(spec.replicates));
  for (int r = 0; r < spec.replicates; ++r) {
    auto idx = resample_indices(num_dialogues,
                                derive_seed(spec.seed, "", "bootstrap", static_cast<std::uint64_t>(r)));
    stats[static_cast<std::size_t>(r)] = statistic(idx);
  }
  Interval ci;
  ci.lo = percentile(stats, 0.025);
  ci.hi = percentile(stats, 0.975);
  return ci;
}

Interval bootstrap_ci_mean(std::span<const double> values, const BootstrapSpec& spec) {
  return bootstrap_ci(values.size(), [&](std::span<const std::size_t> idx) {
    double sum = 0.0;
    for (std::size_t i : idx) sum += values[i];
    return sum / static_cast<double>(idx.size());
  }, spec);
}

std::vector<SweepPoint> sweep(std::span<const Dialogue> dialogues,
                              std::span<const ScoreVector> scores, const SweepOptions& opts) {
  if (dialogues.size() != scores.size())
    throw InputError("sweep: score vectors do not align with the corpus");
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].kind != ScoreKind::Probability)
      throw InputError("sweep: score vector '" + scores[i].dialogue_id +
                       "' is not probability-kind; calibrate first");
    if (scores[i].dialogue_id != dialogues[i].id)
      throw InputError("sweep: score vector order does not match the corpus");
  }
  if (opts.bootstrap) validate_bootstrap(dialogues.size(), *opts.bootstrap);

  auto taus = grid_taus(opts.grid);
  std::vector<SweepPoint> points(taus.size());
  parallel_for(taus.size(), opts.threads, [&](std::size_t pi) {
    const double tau = taus[pi];
    StaticRule rule{tau, opts.grid.gap};
    std::vector<BoundarySet> preds(dialogues.size());
    int candidates = 0;
    for (std::size_t d = 0; d < dialogues.size(); ++d) {
      preds[d] = select_static(scores[d], rule);
      candidates += count_candidates(scores[d], tau);
    }
    MetricsReport report = evaluate_corpus(dialogues, preds, opts.eval);

    SweepPoint p;
    p.tau = tau;
    p.bor = report.bor;
    p.wf1 = report.wf1_macro;
    p.f1 = report.f1_micro;
    p.purity = report.purity_macro;
    p.coverage = report.coverage_macro;
    p.pred_count = report.pred_count;
    p.gold_count = report.gold_count;
    p.candidate_count = candidates;
    p.regime = report.regime;

    if (opts.bootstrap) {
      std::vector<double> wf1s, coverages;
      wf1s.reserve(report.per_dialogue.size());
      coverages.reserve(report.per_dialogue.size());
      for (const auto& ds : report.per_dialogue) {
        wf1s.push_back(ds.wf1);
        coverages.push_back(ds.coverage);
      }
      BootstrapSpec spec = *opts.bootstrap;
      spec.seed = derive_seed(spec.seed, "sweep", "point", static_cast<std::uint64_t>(pi));
      p.wf1_ci = bootstrap_ci_mean(wf1s, spec);
      p.coverage_ci = bootstrap_ci_mean(coverages, spec);
    }
    points[pi] = std::move(p);
  });
  return points;
}

Comparison compare_methods(std::span<const Dialogue> dialogues,
                           std::span<const BoundarySet> preds_a,
                           std::span<const BoundarySet> preds_b, const EvalOptions& eval,
                           const BootstrapSpec& bootstrap) {
  if (dialogues.size() != preds_a.size() || dialogues.size() != preds_b.size())
    throw InputError("compare_methods: prediction lists do not align with the corpus");
  validate_bootstrap(dialogues.size(), bootstrap);

  Comparison cmp;
  cmp.report_a = evaluate_corpus(dialogues, preds_a, eval);
  cmp.report_b = evaluate_corpus(dialogues, preds_b, eval);
  cmp.regime_a = cmp.report_a.regime;
  cmp.regime_b = cmp.report_b.regime;

  const auto& da = cmp.report_a.per_dialogue;
  const auto& db = cmp.report_b.per_dialogue;
  const std::size_t n = dialogues.size();

  // Point deltas.
  double delta_f1 = cmp.report_a.f1_micro - cmp.report_b.f1_micro;
  double delta_wf1 = cmp.report_a.wf1_macro - cmp.report_b.wf1_macro;
  bool bor_defined = cmp.report_a.bor.defined && cmp.report_b.bor.defined;
  double delta_bor = bor_defined ? cmp.report_a.bor.value - cmp.report_b.bor.value : 0.0;

  // Paired replicates: identical resample indices for both methods.
  std::vector<double> f1_deltas, wf1_deltas, bor_deltas;
  long bor_skipped = 0;
  f1_deltas.reserve(static_cast<std::size_t>(bootstrap.replicates));
  wf1_deltas.reserve(static_cast<std::size_t>(bootstrap.replicates));
  bor_deltas.reserve(static_cast<std::size_t>(bootstrap.replicates));
  for (int r = 0; r < bootstrap.replicates; ++r) {
    auto idx = resample_indices(n, derive_seed(bootstrap.seed, "", "bootstrap",
                                               static_cast<std::uint64_t>(r)));
    long long hits_a = 0, hits_b = 0, np_a = 0, np_b = 0, ng = 0;
    double wf1_a = 0.0, wf1_b = 0.0;
    for (std::size_t i : idx) {
      hits_a += da[i].exact_hits;
      hits_b += db[i].exact_hits;
      np_a += da[i].pred_count;
      np_b += db[i].pred_count;
      ng += da[i].gold_count;
      wf1_a += da[i].wf1;
      wf1_b += db[i].wf1;
    }
    auto micro_f1 = [](long long hits, long long np, long long ng_) {
      return (np + ng_ == 0) ? 1.0 : 2.0 * static_cast<double>(hits) / static_cast<double>(np + ng_);
    };
    f1_deltas.push_back(micro_f1(hits_a, np_a, ng) - micro_f1(hits_b, np_b, ng));
    wf1_deltas.push_back((wf1_a - wf1_b) / static_cast<double>(n));
    if (ng > 0) {
      bor_deltas.push_back(static_cast<double>(np_a - np_b) / static_cast<double>(ng));
    } else if (np_a == 0 && np_b == 0) {
      bor_deltas.push_back(0.0);
    } else {
      ++bor_skipped;
    }
  }

  auto make_delta = [](std::string name, double value, std::vector<double>& reps,
                       long skipped) {
    Delta d;
    d.metric = std::move(name);
    d.value = value;
    if (!reps.empty()) {
      d.ci.lo = percentile(reps, 0.025);
      d.ci.hi = percentile(reps, 0.975);
    }
    d.skipped_replicates = skipped;
    return d;
  };
  cmp.deltas.push_back(make_delta("f1", delta_f1, f1_deltas, 0));
  cmp.deltas.push_back(make_delta("wf1", delta_wf1, wf1_deltas, 0));
  cmp.deltas.push_back(make_delta("bor", delta_bor, bor_deltas, bor_skipped));
  return cmp;
}

double negative_control_rate(std::span<const Dialogue> dialogues,
                             std::span<const BoundarySet> preds) {
  if (dialogues.size() != preds.size())
    throw InputError("negative_control_rate: prediction list does not align with the corpus");
  long long positions = 0, predicted = 0;
  for (std::size_t i = 0; i < dialogues.size(); ++i) {
    if (!dialogues[i].gold.empty())
      throw InputError("negative_control_rate: dialogue '" + dialogues[i].id +
                       "' has gold boundaries; the control corpus must be single-segment");
    positions += dialogues[i].num_messages() - 1;
    predicted += static_cast<long long>(preds[i].size());
  }
  if (positions == 0) return 0.0;
  return static_cast<double>(predicted) / static_cast<double>(positions);
}

double mean_abs_score(std::span<const ScoreVector> scores) {
  double sum = 0.0;
  long long n = 0;
  for (const auto& v : scores)
    for (double s : v.scores) {
      sum += std::abs(s);
      ++n;
    }
  if (n == 0) throw InputError("mean_abs_score: no scores");
  return sum / static_cast<double>(n);
}

}  // namespace segeval
