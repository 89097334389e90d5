#include <algorithm>
#include <cmath>

#include "doctest.h"

#include "segeval/selection.hpp"
#include "test_util.hpp"

using namespace segeval;
using segtest::TempDir;

namespace {

ScoreVector vec(std::vector<double> scores) {
  return ScoreVector{"v", std::move(scores), ScoreKind::Probability};
}

ScoreVector random_vec(SplitMix& rng, int len) {
  ScoreVector v{"v", {}, ScoreKind::Probability};
  for (int i = 0; i < len; ++i) v.scores.push_back(rng.next_unit());
  return v;
}

}  // namespace

TEST_SUITE_BEGIN("selection");

TEST_CASE("greedy suppression follows descending score order") {
  // Accept position 1 (0.9); position 3 is within g; position 4 survives.
  CHECK(select_static(vec({0.9, 0.2, 0.8, 0.7}), {0.5, 3}).indices == std::vector<int>{1, 4});
  CHECK(select_static(vec({0.3, 0.2}), {0.9, 3}).empty());
  CHECK(select_static(vec({0.9, 0.8, 0.7}), {0.5, 1}).indices == std::vector<int>{1, 2, 3});
}

TEST_CASE("score ties break toward the smaller index") {
  CHECK(select_static(vec({0.7, 0.7, 0.7}), {0.5, 2}).indices == std::vector<int>{1, 3});
}

TEST_CASE("selected boundaries always honour the spacing") {
  SplitMix rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    int len = 1 + static_cast<int>(rng.next_below(40));
    int gap = 1 + static_cast<int>(rng.next_below(5));
    double tau = rng.next_unit();
    auto b = select_static(random_vec(rng, len), {tau, gap});
    for (std::size_t i = 1; i < b.indices.size(); ++i)
      CHECK(b.indices[i] - b.indices[i - 1] >= gap);
  }
}

TEST_CASE("raising tau never adds a candidate") {
  SplitMix rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    auto v = random_vec(rng, 30);
    double lo = rng.next_unit() * 0.5;
    double hi = lo + rng.next_unit() * 0.5;
    CHECK(count_candidates(v, hi) <= count_candidates(v, lo));
    // With g = 1 the committed set is the candidate set.
    CHECK(select_static(v, {hi, 1}).size() <= select_static(v, {lo, 1}).size());
  }
}

TEST_CASE("adaptive threshold update follows the controller rule") {
  // One evaluation with a commit: rho_hat = 1, tau moves by eta*(1 - rho).
  AdaptiveConfig cfg;
  cfg.rho = 0.2;
  cfg.eta = 0.1;
  cfg.window = 10;
  cfg.tau0 = 0.5;
  cfg.gap = 1;
  AdaptiveSelector sel(cfg);
  AdaptiveCandidate c{1, 0.9};
  sel.step(std::span<const AdaptiveCandidate>(&c, 1));
  CHECK(sel.tau() == doctest::Approx(0.5 + 0.1 * (1.0 - 0.2)));

  // rho_hat 0.3 against target 0.2 with eta 0.1 shifts tau by +0.01.
  AdaptiveConfig cfg2;
  cfg2.rho = 0.2;
  cfg2.eta = 0.1;
  cfg2.window = 10;
  cfg2.tau0 = 0.5;
  cfg2.gap = 1;
  cfg2.max_age = 1;
  AdaptiveSelector sel2(cfg2);
  // Ten candidates, three of which commit: rho_hat = 0.3 after the batch.
  std::vector<AdaptiveCandidate> batch;
  for (int i = 1; i <= 10; ++i) batch.push_back({i * 5, (i <= 3) ? 0.9 : 0.1});
  sel2.step(batch);
  CHECK(sel2.tau() == doctest::Approx(0.51));
}

TEST_CASE("constant scores with a frozen threshold commit every g-th position") {
  AdaptiveConfig cfg;
  cfg.rho = 0.5;
  cfg.eta = 0.0;  // threshold frozen
  cfg.tau0 = 0.4;
  cfg.gap = 3;
  cfg.window = 8;
  ScoreVector v{"v", std::vector<double>(20, 0.6), ScoreKind::Probability};
  SelectionTrace trace = select_adaptive(v, cfg);
  CHECK(trace.committed.indices == std::vector<int>{1, 4, 7, 10, 13, 16, 19});
  CHECK(trace.commit_count == 7);
  CHECK_FALSE(trace.steps.empty());
}

TEST_CASE("evidence accumulation commits weak candidates after enough steps") {
  AdaptiveConfig cfg;
  cfg.rho = 0.5;
  cfg.eta = 0.0;
  cfg.tau0 = 1.0;
  cfg.gap = 1;
  cfg.window = 8;
  // Score 0.4: needs ceil(1.0/0.4) = 3 evaluations to reach the threshold.
  ScoreVector v{"v", {0.4, 0.0, 0.0, 0.0}, ScoreKind::Probability};
  SelectionTrace trace = select_adaptive(v, cfg);
  CHECK(trace.committed.indices == std::vector<int>{1});
  // Committed at step 3, after three evaluations of candidate 1.
  CHECK(trace.steps[2].committed == 1);
  CHECK(trace.steps[1].committed == 0);
}

TEST_CASE("max_age retires candidates that never commit") {
  AdaptiveConfig cfg;
  cfg.rho = 0.5;
  cfg.eta = 0.0;
  cfg.tau0 = 1.0;
  cfg.gap = 1;
  cfg.window = 8;
  cfg.max_age = 2;
  ScoreVector v{"v", {0.4, 0.0, 0.0, 0.0}, ScoreKind::Probability};
  // Candidate 1 is retired after 2 evaluations (evidence 0.8 < 1.0).
  CHECK(select_adaptive(v, cfg).committed.empty());
}

TEST_CASE("offline adaptive run with eta 0 equals static selection") {
  SplitMix rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    int len = 1 + static_cast<int>(rng.next_below(40));
    auto v = random_vec(rng, len);
    double tau = rng.next_unit();
    int gap = 1 + static_cast<int>(rng.next_below(4));

    AdaptiveConfig cfg;
    cfg.rho = 0.5;
    cfg.eta = 0.0;
    cfg.tau0 = tau;
    cfg.gap = gap;
    cfg.window = 16;
    cfg.max_age = 1;  // single evaluation per candidate
    CHECK(select_adaptive_offline(v, cfg).committed == select_static(v, {tau, gap}));
  }
}

TEST_CASE("adaptive selector validates its configuration") {
  AdaptiveConfig bad;
  bad.rho = 1.5;
  CHECK_THROWS_AS(AdaptiveSelector{bad}, InputError);
  AdaptiveConfig bad2;
  bad2.eta = -0.1;
  CHECK_THROWS_AS(AdaptiveSelector{bad2}, InputError);
  AdaptiveConfig bad3;
  bad3.gap = 0;
  CHECK_THROWS_AS(AdaptiveSelector{bad3}, InputError);
  AdaptiveConfig needs_age;
  CHECK_THROWS_AS(select_adaptive_offline(vec({0.5}), needs_age), InputError);
}

TEST_CASE("baselines produce exact structural densities") {
  Dialogue d = segtest::make_dialogue("d", 10);
  d.gold = BoundarySet{{2, 6}};

  CHECK(baseline_no_boundary(d).empty());
  CHECK(baseline_periodic(d, 4).indices == std::vector<int>{4, 8});
  CHECK(baseline_periodic(d, 10).empty());
  CHECK(baseline_periodic(d, 1).indices == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9});

  auto oracle = baseline_oracle_random(d, 5);
  CHECK(oracle.size() == d.gold.size());
  CHECK(oracle == baseline_oracle_random(d, 5));
  for (int i : oracle.indices) {
    CHECK(i >= 1);
    CHECK(i <= 9);
  }

  Dialogue empty_gold = segtest::make_dialogue("e", 6);
  CHECK(baseline_oracle_random(empty_gold, 5).empty());
  CHECK(baseline_oracle_periodic(empty_gold).empty());
}

TEST_CASE("oracle-periodic spaces boundaries evenly with exact count") {
  Dialogue d = segtest::make_dialogue("d", 12);
  d.gold = BoundarySet{{5, 9}};
  CHECK(baseline_oracle_periodic(d).indices == std::vector<int>{4, 8});

  // Dense gold forces collision shifts but the count stays exact.
  SplitMix rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    int t = 2 + static_cast<int>(rng.next_below(15));
    Dialogue dd = segtest::make_dialogue("d", t);
    dd.gold = segtest::random_boundaries(rng, t, t - 1);
    auto b = baseline_oracle_periodic(dd);
    CHECK(b.size() == dd.gold.size());
    for (std::size_t i = 1; i < b.indices.size(); ++i) CHECK(b.indices[i] > b.indices[i - 1]);
    if (!b.empty()) {
      CHECK(b.indices.front() >= 1);
      CHECK(b.indices.back() <= t - 1);
    }
  }
}

TEST_CASE("predictions round-trip through the export format") {
  TempDir dir("preds");
  std::vector<Dialogue> corpus{segtest::make_dialogue("a", 6), segtest::make_dialogue("b", 4)};
  std::vector<BoundarySet> preds{BoundarySet{{2, 5}}, BoundarySet{}};
  std::vector<std::string> headers{"config: {}"};
  write_predictions(dir.file("p.jsonl"), corpus, preds, headers);
  auto loaded = read_predictions(dir.file("p.jsonl"), corpus);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0] == preds[0]);
  CHECK(loaded[1] == preds[1]);

  std::vector<Dialogue> missing{segtest::make_dialogue("c", 4)};
  CHECK_THROWS_AS(read_predictions(dir.file("p.jsonl"), missing), InputError);
}

TEST_SUITE_END();
