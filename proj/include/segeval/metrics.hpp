#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "segeval/corpus.hpp"

namespace segeval {

enum class Matching { WindowCoverage, OneToOne };

// BOR density bands. The split points are a reporting choice (the qualitative
// bands are "< 1", "~ 1", ">> 1"); they are configurable at the CLI.
struct RegimeCutoffs {
  double conservative_below = 0.80;
  double aggressive_above = 1.25;
};

enum class Regime { Conservative, Balanced, Aggressive, Undefined };

std::string regime_name(Regime r);

// Corpus-level boundary density ratio, sum|P| / sum|G|. Undefined when the
// corpus has predictions but zero gold boundaries; a corpus with neither
// reports 0. Undefined is a first-class state, never a NaN.
struct Bor {
  double value = 0.0;
  bool defined = true;

  static Bor undefined() { return Bor{0.0, false}; }
};

// Window-tolerant score of one dialogue.
//   tp = #{p in P : some g in G with |p-g| <= w}   (window-coverage)
//        or |maximum matching|                     (one-to-one; mg == tp)
//   mg = #{g in G : some p in P with |p-g| <= w}
// Empty-set handling: P and G both empty scores 1/1/1; one side empty scores
// zero on the informative components.
struct WindowScore {
  double precision = 0.0;
  double recall = 0.0;
  double wf1 = 0.0;
  int tp = 0;
  int mg = 0;
};

WindowScore wf1_dialogue(const BoundarySet& pred, const BoundarySet& gold, int window);
WindowScore wf1_one_to_one(const BoundarySet& pred, const BoundarySet& gold, int window);

// Micro-averaged exact-match boundary F1 over the whole corpus:
// 2*sum|P∩G| / (sum|P| + sum|G|); 1.0 when there are no predictions and no
// gold anywhere.
double f1_micro(std::span<const BoundarySet> preds, std::span<const BoundarySet> golds);

Bor bor(std::span<const BoundarySet> preds, std::span<const BoundarySet> golds);

// Turn-weighted segment alignment for one dialogue:
//   purity   = (1/T) * sum over predicted segments of max gold overlap
//   coverage = (1/T) * sum over gold segments of max predicted overlap
// An empty boundary set on either side means one segment spanning the
// dialogue.
std::pair<double, double> purity_coverage(int num_messages, const BoundarySet& gold,
                                          const BoundarySet& pred);
inline std::pair<double, double> purity_coverage(const Dialogue& d, const BoundarySet& pred) {
  return purity_coverage(d.num_messages(), d.gold, pred);
}

Regime classify_regime(const Bor& b, const RegimeCutoffs& cutoffs = {});

struct DialogueScore {
  std::string id;
  double precision = 0.0;
  double recall = 0.0;
  double wf1 = 0.0;
  int tp = 0;
  int mg = 0;
  double purity = 0.0;
  double coverage = 0.0;
  int pred_count = 0;
  int gold_count = 0;
  int exact_hits = 0;  // |P ∩ G|, feeds micro F1 resampling
};

// Aggregation is fixed: W-F1, purity, and coverage are macro averages over
// dialogues; F1 and BOR are micro over boundary totals.
struct MetricsReport {
  double wf1_macro = 0.0;
  double f1_micro = 0.0;
  Bor bor;
  double purity_macro = 0.0;
  double coverage_macro = 0.0;
  long long pred_count = 0;
  long long gold_count = 0;
  Regime regime = Regime::Undefined;
  std::vector<DialogueScore> per_dialogue;
};

struct EvalOptions {
  int window = 1;
  Matching matching = Matching::WindowCoverage;
  RegimeCutoffs cutoffs;
};

// Scores every dialogue against its prediction (parallel index) and reduces
// in corpus order. Empty corpus is an error.
MetricsReport evaluate_corpus(std::span<const Dialogue> dialogues,
                              std::span<const BoundarySet> preds,
                              const EvalOptions& opts = {});

}  // namespace segeval
