#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "segeval/corpus.hpp"
#include "segeval/scoring.hpp"

namespace segeval {

// Static selection: threshold then greedy non-maximum suppression.
struct StaticRule {
  double tau = 0.50;
  int gap = 3;  // minimum spacing g between committed boundaries
};

// Candidates with score >= tau are visited in descending score order (ties
// broken toward the smaller index) and accepted when at least `gap` away from
// every previously accepted boundary.
BoundarySet select_static(const ScoreVector& v, const StaticRule& rule);

// Candidate positions that pass the threshold, before suppression.
int count_candidates(const ScoreVector& v, double tau);

struct AdaptiveConfig {
  double rho = 0.167;   // target selection rate per processed candidate
  int gap = 3;          // minimum spacing g
  int window = 200;     // W: recent processed candidates feeding rho_hat
  double eta = 0.05;    // controller step size (0 freezes the threshold)
  double tau0 = 0.5;    // initial threshold
  int max_age = 0;      // retire a candidate after this many evaluations; 0 = never
};

struct TraceStep {
  long t = 0;             // time step, 1-based
  double tau = 0.0;       // threshold in effect during this step
  long candidates_seen = 0;  // cumulative evaluations C(t)
  long committed = 0;        // cumulative commits S(t)
};

struct SelectionTrace {
  BoundarySet committed;
  std::vector<TraceStep> steps;
  long candidate_count = 0;  // total evaluations C
  long commit_count = 0;     // total commits S
};

struct AdaptiveCandidate {
  int position = 0;
  double score = 0.0;
};

// Online evidence-accumulating selector. Each step absorbs the candidates
// that just became available (frozen score, zero evidence), then evaluates
// every active candidate: evidence grows by its frozen score and the
// candidate commits once evidence reaches the current threshold and spacing
// holds. Within a step, candidates are evaluated in descending accumulated
// evidence (ties toward the smaller index), so simultaneous threshold
// crossings resolve exactly like the static rule's greedy suppression.
// Candidates that violate spacing against a committed boundary are retired,
// as are candidates older than max_age evaluations. After the evaluations the
// threshold moves by eta * (rho_hat - rho), where rho_hat is the commit rate
// over the last `window` evaluations.
class AdaptiveSelector {
 public:
  explicit AdaptiveSelector(const AdaptiveConfig& cfg);

  void step(std::span<const AdaptiveCandidate> newly_available);
  SelectionTrace finish();

  double tau() const { return tau_; }
  std::size_t pending() const { return active_.size(); }
  long commits() const { return trace_.commit_count; }
  long evaluations() const { return trace_.candidate_count; }

 private:
  struct Active {
    int position;
    double score;
    double evidence;
    int age;
  };

  void record_outcome(bool committed);
  double rho_hat() const;

  AdaptiveConfig cfg_;
  double tau_;
  long t_ = 0;
  std::vector<Active> active_;
  std::vector<int> committed_;
  std::vector<char> recent_;  // ring buffer of last W evaluation outcomes
  std::size_t recent_next_ = 0;
  std::size_t recent_filled_ = 0;
  long recent_commits_ = 0;
  SelectionTrace trace_;
};

// Streaming session over one dialogue: candidate i arrives at step i.
SelectionTrace select_adaptive(const ScoreVector& v, const AdaptiveConfig& cfg);

// Offline session: every candidate is available at the first step. With
// eta = 0 and max_age = 1 this is exactly select_static at tau0.
SelectionTrace select_adaptive_offline(const ScoreVector& v, const AdaptiveConfig& cfg);

// Predicted-boundary files: one JSON record per line, {"id", "boundaries":
// [...]}. Reading validates ids and index ranges against the corpus and
// returns sets aligned with corpus order.
void write_predictions(const std::filesystem::path& file, std::span<const Dialogue> dialogues,
                       std::span<const BoundarySet> preds,
                       std::span<const std::string> header_lines);
std::vector<BoundarySet> read_predictions(const std::filesystem::path& file,
                                          std::span<const Dialogue> corpus);

// Non-semantic baselines.
BoundarySet baseline_no_boundary(const Dialogue& d);
BoundarySet baseline_periodic(const Dialogue& d, int every_n);
// |gold| positions sampled uniformly without replacement, seeded per dialogue.
BoundarySet baseline_oracle_random(const Dialogue& d, std::uint64_t seed);
// |gold| evenly spaced positions round(j*T/(k+1)); collisions shift to the
// nearest free slot so the count is always exact.
BoundarySet baseline_oracle_periodic(const Dialogue& d);

}  // namespace segeval
