#include "segeval/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "segeval/rand.hpp"

namespace segeval {

using nlohmann::json;

namespace {

using TermCounts = std::map<std::string, int>;

void count_terms(const std::string& text, TermCounts& counts) {
  std::string token;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      token.push_back(static_cast<char>(std::tolower(c)));
    } else if (!token.empty()) {
      ++counts[token];
      token.clear();
    }
  }
  if (!token.empty()) ++counts[token];
}

// cosine with the empty-vector convention: both empty -> 1 (nothing differs),
// one empty -> 0.
double cosine(const TermCounts& a, const TermCounts& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [term, n] : a) {
    na += static_cast<double>(n) * n;
    auto it = b.find(term);
    if (it != b.end()) dot += static_cast<double>(n) * it->second;
  }
  for (const auto& [term, n] : b) nb += static_cast<double>(n) * n;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(1 + exp(x)) without overflow.
double softplus(double x) { return (x > 0.0) ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

ScoreKind parse_kind(const std::string& s, const std::string& context) {
  if (s == "logit") return ScoreKind::Logit;
  if (s == "probability") return ScoreKind::Probability;
  throw InputError(context + ": unknown score kind '" + s + "'");
}

}  // namespace

ScoreVector score_lexical_cohesion(const Dialogue& d, const ContextWindow& ctx) {
  if (ctx.k < 1) throw InputError("context window must be at least 1");
  const int t = d.num_messages();
  ScoreVector v{d.id, {}, ScoreKind::Probability};
  v.scores.reserve(t > 0 ? t - 1 : 0);
  for (int i = 1; i <= t - 1; ++i) {
    TermCounts left, right;
    for (int m = std::max(1, i - ctx.k + 1); m <= i; ++m) count_terms(d.messages[m - 1].text, left);
    for (int m = i + 1; m <= std::min(t, i + ctx.k); ++m) count_terms(d.messages[m - 1].text, right);
    double score = 1.0 - cosine(left, right);
    v.scores.push_back(std::clamp(score, 0.0, 1.0));
  }
  return v;
}

ScoreVector score_random(const Dialogue& d, std::uint64_t seed) {
  const int t = d.num_messages();
  ScoreVector v{d.id, {}, ScoreKind::Probability};
  v.scores.reserve(t > 0 ? t - 1 : 0);
  for (int i = 1; i <= t - 1; ++i) {
    SplitMix rng(derive_seed(seed, d.id, "score_random", static_cast<std::uint64_t>(i)));
    v.scores.push_back(rng.next_unit());
  }
  return v;
}

ScoreVector score_constant(const Dialogue& d, double value) {
  const int t = d.num_messages();
  ScoreVector v{d.id, {}, ScoreKind::Probability};
  if (value < 0.0 || value > 1.0)
    throw InputError("constant scorer value must lie in [0, 1]");
  v.scores.assign(t > 0 ? t - 1 : 0, value);
  return v;
}

std::vector<ScoreVector> load_scores(const std::filesystem::path& file,
                                     std::span<const Dialogue> corpus) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open score file: " + file.string());

  std::vector<ScoreVector> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw InputError("score file parse error at line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string() ||
        !j.contains("kind") || !j["kind"].is_string() ||
        !j.contains("scores") || !j["scores"].is_array())
      throw InputError("score file line " + std::to_string(line_no) +
                       ": expected {id, kind, scores:[real]}");

    ScoreVector v;
    v.dialogue_id = j["id"].get<std::string>();
    v.kind = parse_kind(j["kind"].get<std::string>(), "score record '" + v.dialogue_id + "'");
    for (const auto& s : j["scores"]) {
      if (!s.is_number())
        throw InputError("score record '" + v.dialogue_id + "': non-numeric score");
      v.scores.push_back(s.get<double>());
    }

    const Dialogue* dlg = nullptr;
    for (const auto& d : corpus)
      if (d.id == v.dialogue_id) {
        dlg = &d;
        break;
      }
    if (!dlg) throw InputError("score record '" + v.dialogue_id + "' does not match any corpus dialogue");
    if (static_cast<int>(v.scores.size()) != dlg->num_messages() - 1)
      throw InputError("score record '" + v.dialogue_id + "' has " + std::to_string(v.scores.size()) +
                       " scores, expected " + std::to_string(dlg->num_messages() - 1));
    if (v.kind == ScoreKind::Probability)
      for (double s : v.scores)
        if (s < 0.0 || s > 1.0)
          throw InputError("score record '" + v.dialogue_id + "': probability score " +
                           std::to_string(s) + " outside [0, 1]");
    out.push_back(std::move(v));
  }
  return out;
}

void write_scores(const std::filesystem::path& file, std::span<const ScoreVector> scores,
                  std::span<const std::string> header_lines) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + file.string());
  for (const auto& h : header_lines) out << "# " << h << "\n";
  for (const auto& v : scores) {
    json j;
    j["id"] = v.dialogue_id;
    j["kind"] = (v.kind == ScoreKind::Logit) ? "logit" : "probability";
    j["scores"] = v.scores;
    out << j.dump() << "\n";
  }
}

ScoreVector apply_temperature(const ScoreVector& v, const Temperature& temp) {
  if (v.kind != ScoreKind::Logit)
    throw InputError("apply_temperature: score vector '" + v.dialogue_id + "' is not logit-kind");
  if (!(temp.t > 0.0)) throw InputError("temperature must be positive");
  ScoreVector out{v.dialogue_id, {}, ScoreKind::Probability};
  out.scores.reserve(v.scores.size());
  for (double z : v.scores) out.scores.push_back(logistic(z / temp.t));
  return out;
}

double calibration_nll(std::span<const ScoreVector> logits, std::span<const BoundarySet> golds,
                       double t) {
  double sum = 0.0;
  long long n = 0;
  for (std::size_t d = 0; d < logits.size(); ++d) {
    const auto& v = logits[d];
    for (std::size_t i = 0; i < v.scores.size(); ++i) {
      int position = static_cast<int>(i) + 1;
      bool positive = std::binary_search(golds[d].indices.begin(), golds[d].indices.end(), position);
      double z = v.scores[i] / t;
      // -log p(y | z) = softplus(z) - y*z
      sum += softplus(z) - (positive ? z : 0.0);
      ++n;
    }
  }
  if (n == 0) throw InputError("calibration_nll: no candidate positions");
  return sum / static_cast<double>(n);
}

Temperature fit_temperature(std::span<const ScoreVector> logits,
                            std::span<const BoundarySet> golds) {
  if (logits.empty() || logits.size() != golds.size())
    throw InputError("fit_temperature: logits and gold sets must align and be nonempty");
  long long positives = 0, total = 0;
  for (std::size_t d = 0; d < logits.size(); ++d) {
    if (logits[d].kind != ScoreKind::Logit)
      throw InputError("fit_temperature: score vector '" + logits[d].dialogue_id + "' is not logit-kind");
    total += static_cast<long long>(logits[d].scores.size());
    positives += static_cast<long long>(golds[d].size());
  }
  if (total == 0) throw InputError("fit_temperature: no candidate positions");
  if (positives == 0 || positives == total)
    throw InputError("fit_temperature: labels are all one class; temperature is not identifiable");

  auto nll_at = [&](double log_t) { return calibration_nll(logits, golds, std::exp(log_t)); };

  // Golden-section search on log t.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::log(kTemperatureSearchLo);
  double hi = std::log(kTemperatureSearchHi);
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = nll_at(x1), f2 = nll_at(x2);
  while (hi - lo > 1e-4) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = nll_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = nll_at(x2);
    }
  }
  double best = std::exp((lo + hi) / 2.0);
  // Calibration must never be worse than the identity temperature.
  if (calibration_nll(logits, golds, 1.0) < calibration_nll(logits, golds, best)) best = 1.0;
  return Temperature{best};
}

Scorer make_scorer(const std::string& spec, std::uint64_t seed,
                   std::span<const Dialogue> corpus, const ContextWindow& ctx) {
  if (spec == "lexical") {
    return [ctx](const Dialogue& d) { return score_lexical_cohesion(d, ctx); };
  }
  if (spec == "random") {
    return [seed](const Dialogue& d) { return score_random(d, seed); };
  }
  if (spec.rfind("constant:", 0) == 0) {
    double value;
    try {
      value = std::stod(spec.substr(9));
    } catch (const std::exception&) {
      throw InputError("bad constant scorer spec '" + spec + "'");
    }
    if (value < 0.0 || value > 1.0)
      throw InputError("constant scorer value must lie in [0, 1]");
    return [value](const Dialogue& d) { return score_constant(d, value); };
  }
  if (spec.rfind("file:", 0) == 0) {
    auto loaded = load_scores(spec.substr(5), corpus);
    auto table = std::make_shared<std::map<std::string, ScoreVector>>();
    for (auto& v : loaded) (*table)[v.dialogue_id] = std::move(v);
    return [table](const Dialogue& d) {
      auto it = table->find(d.id);
      if (it == table->end())
        throw InputError("score file has no record for dialogue '" + d.id + "'");
      return it->second;
    };
  }
  throw InputError("unknown scorer spec '" + spec +
                   "' (expected lexical | random | constant:<v> | file:<path>)");
}

}  // namespace segeval
