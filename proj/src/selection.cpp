#include "segeval/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "json.hpp"
#include "segeval/rand.hpp"

namespace segeval {

namespace {

bool spacing_ok(int position, const std::vector<int>& committed, int gap) {
  for (int b : committed)
    if (std::abs(position - b) < gap) return false;
  return true;
}

void validate_static(const StaticRule& rule) {
  if (rule.gap < 1) throw InputError("static rule: gap must be >= 1");
}

}  // namespace

BoundarySet select_static(const ScoreVector& v, const StaticRule& rule) {
  validate_static(rule);
  std::vector<std::pair<double, int>> candidates;  // (score, position)
  for (std::size_t i = 0; i < v.scores.size(); ++i)
    if (v.scores[i] >= rule.tau) candidates.emplace_back(v.scores[i], static_cast<int>(i) + 1);
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  std::vector<int> accepted;
  for (const auto& [score, position] : candidates)
    if (spacing_ok(position, accepted, rule.gap)) accepted.push_back(position);
  std::sort(accepted.begin(), accepted.end());
  return BoundarySet{std::move(accepted)};
}

int count_candidates(const ScoreVector& v, double tau) {
  int n = 0;
  for (double s : v.scores)
    if (s >= tau) ++n;
  return n;
}

AdaptiveSelector::AdaptiveSelector(const AdaptiveConfig& cfg) : cfg_(cfg), tau_(cfg.tau0) {
  if (!(cfg.rho > 0.0 && cfg.rho < 1.0))
    throw InputError("adaptive config: rho must lie in (0, 1)");
  if (cfg.gap < 1) throw InputError("adaptive config: gap must be >= 1");
  if (cfg.window < 1) throw InputError("adaptive config: window must be >= 1");
  if (cfg.eta < 0.0) throw InputError("adaptive config: eta must be >= 0");
  if (cfg.max_age < 0) throw InputError("adaptive config: max_age must be >= 0");
  recent_.assign(static_cast<std::size_t>(cfg.window), 0);
}

void AdaptiveSelector::record_outcome(bool committed) {
  if (recent_filled_ == recent_.size())
    recent_commits_ -= recent_[recent_next_];
  else
    ++recent_filled_;
  recent_[recent_next_] = committed ? 1 : 0;
  recent_commits_ += recent_[recent_next_];
  recent_next_ = (recent_next_ + 1) % recent_.size();
}

double AdaptiveSelector::rho_hat() const {
  if (recent_filled_ == 0) return 0.0;
  return static_cast<double>(recent_commits_) / static_cast<double>(recent_filled_);
}

void AdaptiveSelector::step(std::span<const AdaptiveCandidate> newly_available) {
  ++t_;
  const double tau_in_effect = tau_;
  for (const auto& c : newly_available) active_.push_back({c.position, c.score, 0.0, 0});

  // Evaluate strongest evidence first; commits inside one step then suppress
  // weaker neighbours the same way greedy NMS would.
  std::sort(active_.begin(), active_.end(), [](const Active& a, const Active& b) {
    double ea = a.evidence + a.score, eb = b.evidence + b.score;
    if (ea != eb) return ea > eb;
    return a.position < b.position;
  });

  std::vector<Active> survivors;
  survivors.reserve(active_.size());
  for (Active cand : active_) {
    cand.evidence += cand.score;
    cand.age += 1;
    ++trace_.candidate_count;

    bool committed = false;
    if (cand.evidence >= tau_) {
      if (spacing_ok(cand.position, committed_, cfg_.gap)) {
        committed_.push_back(cand.position);
        ++trace_.commit_count;
        committed = true;
      }
      // Crossed the threshold but blocked by spacing: suppressed for good.
      record_outcome(committed);
      continue;
    }
    record_outcome(false);
    if (!spacing_ok(cand.position, committed_, cfg_.gap)) continue;  // can never commit
    if (cfg_.max_age > 0 && cand.age >= cfg_.max_age) continue;      // retired
    survivors.push_back(cand);
  }
  active_ = std::move(survivors);

  if (cfg_.eta > 0.0) tau_ += cfg_.eta * (rho_hat() - cfg_.rho);
  trace_.steps.push_back({t_, tau_in_effect, trace_.candidate_count, trace_.commit_count});
}

SelectionTrace AdaptiveSelector::finish() {
  std::sort(committed_.begin(), committed_.end());
  trace_.committed = BoundarySet{committed_};
  return trace_;
}

SelectionTrace select_adaptive(const ScoreVector& v, const AdaptiveConfig& cfg) {
  AdaptiveSelector sel(cfg);
  for (std::size_t i = 0; i < v.scores.size(); ++i) {
    AdaptiveCandidate c{static_cast<int>(i) + 1, v.scores[i]};
    sel.step(std::span<const AdaptiveCandidate>(&c, 1));
  }
  return sel.finish();
}

SelectionTrace select_adaptive_offline(const ScoreVector& v, const AdaptiveConfig& cfg) {
  if (cfg.max_age < 1)
    throw InputError("adaptive config: offline sessions need max_age >= 1 to terminate");
  AdaptiveSelector sel(cfg);
  std::vector<AdaptiveCandidate> all;
  all.reserve(v.scores.size());
  for (std::size_t i = 0; i < v.scores.size(); ++i)
    all.push_back({static_cast<int>(i) + 1, v.scores[i]});
  sel.step(all);
  while (sel.pending() > 0) sel.step({});
  return sel.finish();
}

void write_predictions(const std::filesystem::path& file, std::span<const Dialogue> dialogues,
                       std::span<const BoundarySet> preds,
                       std::span<const std::string> header_lines) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + file.string());
  for (const auto& h : header_lines) out << "# " << h << "\n";
  for (std::size_t i = 0; i < dialogues.size(); ++i) {
    nlohmann::json j;
    j["id"] = dialogues[i].id;
    j["boundaries"] = preds[i].indices;
    out << j.dump() << "\n";
  }
}

std::vector<BoundarySet> read_predictions(const std::filesystem::path& file,
                                          std::span<const Dialogue> corpus) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open predictions file: " + file.string());
  std::vector<std::pair<std::string, std::vector<int>>> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw InputError("predictions parse error at line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string() ||
        !j.contains("boundaries") || !j["boundaries"].is_array())
      throw InputError("predictions line " + std::to_string(line_no) +
                       ": expected {id, boundaries:[int]}");
    std::vector<int> idx;
    for (const auto& v : j["boundaries"]) {
      if (!v.is_number_integer())
        throw InputError("predictions line " + std::to_string(line_no) + ": non-integer boundary");
      idx.push_back(v.get<int>());
    }
    records.emplace_back(j["id"].get<std::string>(), std::move(idx));
  }

  std::vector<BoundarySet> out(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const std::vector<int>* found = nullptr;
    for (const auto& [id, idx] : records)
      if (id == corpus[i].id) {
        found = &idx;
        break;
      }
    if (!found) throw InputError("no prediction record for dialogue '" + corpus[i].id + "'");
    out[i] = validated_boundaries(*found, corpus[i].num_messages(),
                                  "prediction record '" + corpus[i].id + "'");
  }
  return out;
}

BoundarySet baseline_no_boundary(const Dialogue&) { return {}; }

BoundarySet baseline_periodic(const Dialogue& d, int every_n) {
  if (every_n < 1) throw InputError("periodic baseline: n must be >= 1");
  std::vector<int> idx;
  for (int p = every_n; p <= d.num_messages() - 1; p += every_n) idx.push_back(p);
  return BoundarySet{std::move(idx)};
}

BoundarySet baseline_oracle_random(const Dialogue& d, std::uint64_t seed) {
  const int t = d.num_messages();
  const std::size_t k = d.gold.size();
  std::vector<int> positions(t > 0 ? t - 1 : 0);
  for (int i = 0; i < t - 1; ++i) positions[i] = i + 1;

  SplitMix rng(derive_seed(seed, d.id, "oracle_random"));
  // Partial Fisher-Yates: the first k slots become the sample.
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.next_below(positions.size() - i));
    std::swap(positions[i], positions[j]);
  }
  std::vector<int> idx(positions.begin(), positions.begin() + static_cast<long>(k));
  std::sort(idx.begin(), idx.end());
  return BoundarySet{std::move(idx)};
}

BoundarySet baseline_oracle_periodic(const Dialogue& d) {
  const int t = d.num_messages();
  const int k = static_cast<int>(d.gold.size());
  std::vector<int> taken;
  for (int j = 1; j <= k; ++j) {
    int target = static_cast<int>(std::lround(static_cast<double>(j) * t / (k + 1)));
    target = std::clamp(target, 1, t - 1);
    // Shift to the nearest free in-range slot (smaller position on ties).
    int chosen = -1;
    for (int offset = 0; offset < t; ++offset) {
      int lo = target - offset, hi = target + offset;
      if (lo >= 1 && std::find(taken.begin(), taken.end(), lo) == taken.end()) {
        chosen = lo;
        break;
      }
      if (hi <= t - 1 && std::find(taken.begin(), taken.end(), hi) == taken.end()) {
        chosen = hi;
        break;
      }
    }
    if (chosen == -1)
      throw InputError("oracle-periodic: dialogue '" + d.id + "' has more gold boundaries than positions");
    taken.push_back(chosen);
  }
  std::sort(taken.begin(), taken.end());
  return BoundarySet{std::move(taken)};
}

}  // namespace segeval
