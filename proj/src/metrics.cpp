#include "segeval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "segeval/matching.hpp"

namespace segeval {

namespace {

double harmonic(double p, double r) { return (p + r > 0.0) ? 2.0 * p * r / (p + r) : 0.0; }

WindowScore finish_score(int tp, int mg, std::size_t np, std::size_t ng) {
  WindowScore s;
  s.tp = tp;
  s.mg = mg;
  if (np > 0)
    s.precision = static_cast<double>(tp) / static_cast<double>(np);
  else
    s.precision = (ng == 0) ? 1.0 : 0.0;
  if (ng > 0)
    s.recall = static_cast<double>(mg) / static_cast<double>(ng);
  else
    s.recall = (np == 0) ? 1.0 : 0.0;
  s.wf1 = harmonic(s.precision, s.recall);
  return s;
}

int span_overlap(const Span& a, const Span& b) {
  return std::max(0, std::min(a.last, b.last) - std::max(a.first, b.first) + 1);
}

}  // namespace

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::Conservative: return "conservative";
    case Regime::Balanced: return "balanced";
    case Regime::Aggressive: return "aggressive";
    case Regime::Undefined: return "undefined";
  }
  return "undefined";
}

WindowScore wf1_dialogue(const BoundarySet& pred, const BoundarySet& gold, int window) {
  int tp = 0;
  for (int p : pred.indices)
    for (int g : gold.indices)
      if (std::abs(p - g) <= window) {
        ++tp;
        break;
      }
  int mg = 0;
  for (int g : gold.indices)
    for (int p : pred.indices)
      if (std::abs(p - g) <= window) {
        ++mg;
        break;
      }
  return finish_score(tp, mg, pred.size(), gold.size());
}

WindowScore wf1_one_to_one(const BoundarySet& pred, const BoundarySet& gold, int window) {
  BipartiteMatcher matcher(static_cast<int>(pred.size()), static_cast<int>(gold.size()));
  for (std::size_t i = 0; i < pred.size(); ++i)
    for (std::size_t j = 0; j < gold.size(); ++j)
      if (std::abs(pred.indices[i] - gold.indices[j]) <= window)
        matcher.add_edge(static_cast<int>(i), static_cast<int>(j));
  int matched = matcher.solve();
  return finish_score(matched, matched, pred.size(), gold.size());
}

double f1_micro(std::span<const BoundarySet> preds, std::span<const BoundarySet> golds) {
  long long hits = 0, np = 0, ng = 0;
  for (std::size_t d = 0; d < preds.size(); ++d) {
    np += static_cast<long long>(preds[d].size());
    ng += static_cast<long long>(golds[d].size());
    for (int p : preds[d].indices)
      if (std::binary_search(golds[d].indices.begin(), golds[d].indices.end(), p)) ++hits;
  }
  if (np + ng == 0) return 1.0;
  return 2.0 * static_cast<double>(hits) / static_cast<double>(np + ng);
}

Bor bor(std::span<const BoundarySet> preds, std::span<const BoundarySet> golds) {
  if (preds.empty()) throw InputError("bor: empty corpus");
  long long np = 0, ng = 0;
  for (const auto& p : preds) np += static_cast<long long>(p.size());
  for (const auto& g : golds) ng += static_cast<long long>(g.size());
  if (ng > 0) return Bor{static_cast<double>(np) / static_cast<double>(ng), true};
  if (np == 0) return Bor{0.0, true};
  return Bor::undefined();
}

std::pair<double, double> purity_coverage(int num_messages, const BoundarySet& gold,
                                          const BoundarySet& pred) {
  auto pred_segs = segments_of(num_messages, pred);
  auto gold_segs = segments_of(num_messages, gold);

  long long purity_sum = 0;
  for (const auto& p : pred_segs) {
    int best = 0;
    for (const auto& g : gold_segs) best = std::max(best, span_overlap(p, g));
    purity_sum += best;
  }
  long long coverage_sum = 0;
  for (const auto& g : gold_segs) {
    int best = 0;
    for (const auto& p : pred_segs) best = std::max(best, span_overlap(p, g));
    coverage_sum += best;
  }
  double t = static_cast<double>(num_messages);
  return {static_cast<double>(purity_sum) / t, static_cast<double>(coverage_sum) / t};
}

Regime classify_regime(const Bor& b, const RegimeCutoffs& cutoffs) {
  if (!b.defined) return Regime::Undefined;
  if (b.value < cutoffs.conservative_below) return Regime::Conservative;
  if (b.value <= cutoffs.aggressive_above) return Regime::Balanced;
  return Regime::Aggressive;
}

MetricsReport evaluate_corpus(std::span<const Dialogue> dialogues,
                              std::span<const BoundarySet> preds,
                              const EvalOptions& opts) {
  if (dialogues.empty()) throw InputError("evaluate_corpus: empty corpus");
  if (dialogues.size() != preds.size())
    throw InputError("evaluate_corpus: prediction count does not match corpus");

  MetricsReport report;
  report.per_dialogue.reserve(dialogues.size());
  double wf1_sum = 0.0, purity_sum = 0.0, coverage_sum = 0.0;
  for (std::size_t i = 0; i < dialogues.size(); ++i) {
    const Dialogue& d = dialogues[i];
    const BoundarySet& p = preds[i];
    WindowScore ws = (opts.matching == Matching::WindowCoverage)
                         ? wf1_dialogue(p, d.gold, opts.window)
                         : wf1_one_to_one(p, d.gold, opts.window);
    auto [purity, coverage] = purity_coverage(d.num_messages(), d.gold, p);

    DialogueScore ds;
    ds.id = d.id;
    ds.precision = ws.precision;
    ds.recall = ws.recall;
    ds.wf1 = ws.wf1;
    ds.tp = ws.tp;
    ds.mg = ws.mg;
    ds.purity = purity;
    ds.coverage = coverage;
    ds.pred_count = static_cast<int>(p.size());
    ds.gold_count = static_cast<int>(d.gold.size());
    for (int b : p.indices)
      if (std::binary_search(d.gold.indices.begin(), d.gold.indices.end(), b)) ++ds.exact_hits;

    wf1_sum += ds.wf1;
    purity_sum += ds.purity;
    coverage_sum += ds.coverage;
    report.pred_count += ds.pred_count;
    report.gold_count += ds.gold_count;
    report.per_dialogue.push_back(std::move(ds));
  }

  double n = static_cast<double>(dialogues.size());
  report.wf1_macro = wf1_sum / n;
  report.purity_macro = purity_sum / n;
  report.coverage_macro = coverage_sum / n;

  long long hits = 0;
  for (const auto& ds : report.per_dialogue) hits += ds.exact_hits;
  report.f1_micro = (report.pred_count + report.gold_count == 0)
                        ? 1.0
                        : 2.0 * static_cast<double>(hits) /
                              static_cast<double>(report.pred_count + report.gold_count);
  if (report.gold_count > 0)
    report.bor = Bor{static_cast<double>(report.pred_count) / static_cast<double>(report.gold_count), true};
  else
    report.bor = (report.pred_count == 0) ? Bor{0.0, true} : Bor::undefined();
  report.regime = classify_regime(report.bor, opts.cutoffs);
  return report;
}

}  // namespace segeval
