#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "segeval/corpus.hpp"

namespace segeval {

enum class ScoreKind { Logit, Probability };

// Per-candidate-position boundary scores for one dialogue: scores[i-1] is the
// score of between-message position i, so the vector has length T-1.
struct ScoreVector {
  std::string dialogue_id;
  std::vector<double> scores;
  ScoreKind kind = ScoreKind::Probability;
};

struct Temperature {
  double t = 1.0;
};

struct ContextWindow {
  int k = 4;  // messages per side
};

// 1 - cosine similarity between the term-frequency vectors of the message
// windows on each side of every candidate position. Windows take up to k
// messages and are truncated at dialogue edges. Tokenization: lowercase,
// split on non-alphanumeric runs, no stemming. Scores land in [0, 1]; high
// means lexically dissimilar sides.
ScoreVector score_lexical_cohesion(const Dialogue& d, const ContextWindow& ctx = {});

// Uniform [0,1) scores, deterministic per (seed, dialogue id, position) and
// independent of corpus order.
ScoreVector score_random(const Dialogue& d, std::uint64_t seed);

ScoreVector score_constant(const Dialogue& d, double value);

// Score file: one JSON record per line, {"id", "kind": "logit"|"probability",
// "scores": [...]}. Each record must name a corpus dialogue and carry exactly
// T-1 scores; probability scores must lie in [0, 1].
std::vector<ScoreVector> load_scores(const std::filesystem::path& file,
                                     std::span<const Dialogue> corpus);

void write_scores(const std::filesystem::path& file, std::span<const ScoreVector> scores,
                  std::span<const std::string> header_lines);

// logistic(logit / t); requires logit-kind input.
ScoreVector apply_temperature(const ScoreVector& v, const Temperature& temp);

// Mean binary negative log-likelihood of logistic(logit / t) against the
// boundary labels implied by the gold sets (position i is positive iff i is
// a gold boundary).
double calibration_nll(std::span<const ScoreVector> logits, std::span<const BoundarySet> golds,
                       double t);

// Minimizes the NLL above by golden-section search on log t over
// [0.05, 20] (relative tolerance 1e-4). Requires at least one positive and
// one negative position; on separable data the minimum sits at the lower
// search bound.
Temperature fit_temperature(std::span<const ScoreVector> logits,
                            std::span<const BoundarySet> golds);

constexpr double kTemperatureSearchLo = 0.05;
constexpr double kTemperatureSearchHi = 20.0;

// Scorer factory for CLI specs: lexical | random | constant:<v> | file:<path>.
// The returned callable yields probability- or logit-kind vectors depending on
// the source; `file:` scorers are validated against the corpus at creation.
using Scorer = std::function<ScoreVector(const Dialogue&)>;
Scorer make_scorer(const std::string& spec, std::uint64_t seed,
                   std::span<const Dialogue> corpus, const ContextWindow& ctx = {});

}  // namespace segeval
