#include "segeval/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "segeval/analysis.hpp"
#include "segeval/corpus.hpp"
#include "segeval/metrics.hpp"
#include "segeval/rand.hpp"
#include "segeval/report.hpp"
#include "segeval/scoring.hpp"
#include "segeval/selection.hpp"

namespace segeval {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string file_hash_hex(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot open file for hashing: " + p.string());
  std::uint64_t h = kFnvOffset;
  char buf[65536];
  for (;;) {
    in.read(buf, sizeof(buf));
    std::streamsize got = in.gcount();
    if (got <= 0) break;
    h = fnv1a64(std::string_view(buf, static_cast<std::size_t>(got)), h);
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + hex;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("bad " + what + " value '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("bad " + what + " value '" + s + "'");
  }
}

Matching parse_matching(const std::string& s) {
  if (s == "coverage") return Matching::WindowCoverage;
  if (s == "one-to-one") return Matching::OneToOne;
  throw InputError("unknown matching '" + s + "' (expected coverage | one-to-one)");
}

RegimeCutoffs parse_cutoffs(const std::string& s) {
  auto parts = split(s, ',');
  if (parts.size() != 2) throw InputError("regime cutoffs must be 'lo,hi'");
  RegimeCutoffs c;
  c.conservative_below = parse_real(parts[0], "regime cutoff");
  c.aggressive_above = parse_real(parts[1], "regime cutoff");
  if (!(c.conservative_below > 0.0) || !(c.conservative_below <= c.aggressive_above))
    throw InputError("regime cutoffs must satisfy 0 < lo <= hi");
  return c;
}

// Shared flags. --threads caps parallelism only; results are identical for
// any value, so it is not part of the embedded run config.
struct CommonOpts {
  std::uint64_t seed = 0;
  int window = 1;
  std::string matching = "coverage";
  std::string regime_cutoffs = "0.80,1.25";
  int threads = 1;
  int context_k = 4;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_scorer_context = true) {
  cmd->add_option("--seed", o.seed, "master seed for all derived randomness");
  cmd->add_option("--window", o.window, "tolerance window w for W-F1")->check(CLI::NonNegativeNumber);
  cmd->add_option("--matching", o.matching, "W-F1 matching: coverage | one-to-one");
  cmd->add_option("--regime-cutoffs", o.regime_cutoffs, "BOR regime cutoffs 'lo,hi'");
  cmd->add_option("--threads", o.threads, "worker thread cap")->check(CLI::PositiveNumber);
  if (with_scorer_context)
    cmd->add_option("--context-window", o.context_k, "scorer context messages per side")
        ->check(CLI::PositiveNumber);
}

EvalOptions eval_options(const CommonOpts& o) {
  EvalOptions e;
  e.window = o.window;
  e.matching = parse_matching(o.matching);
  e.cutoffs = parse_cutoffs(o.regime_cutoffs);
  return e;
}

std::vector<Dialogue> load_corpus(const std::string& corpus_path, const std::string& gold_path) {
  auto dialogues = ingest(corpus_path);
  if (dialogues.empty()) throw InputError("corpus '" + corpus_path + "' is empty");
  auto gold = read_gold_file(gold_path);
  attach_gold(dialogues, gold);
  return dialogues;
}

// ---------------------------------------------------------------------------
// Method specs
//
//   static,scorer=<s>[,tau=0.50][,g=3]
//   adaptive,scorer=<s>,rho=<r>[,g=3][,eta=0.05][,window=200][,tau0=0.5][,max_age=0]
//   no-boundary | periodic,n=<N> | oracle-random | oracle-periodic
//   preds,path=<file>
//
// where <s> is lexical | random | constant:<v> | file:<path>.
// ---------------------------------------------------------------------------

struct MethodSpec {
  enum class Kind { Static, Adaptive, NoBoundary, Periodic, OracleRandom, OraclePeriodic, Preds };
  Kind kind = Kind::Static;
  std::string scorer;
  StaticRule rule;
  AdaptiveConfig adaptive;
  int periodic_n = 0;
  std::string path;
  std::string raw;
};

MethodSpec parse_method_spec(const std::string& spec) {
  MethodSpec m;
  m.raw = spec;
  auto parts = split(spec, ',');
  if (parts.empty() || parts[0].empty()) throw InputError("empty method spec");
  const std::string& kind = parts[0];

  std::vector<std::pair<std::string, std::string>> kv;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    auto eq = parts[i].find('=');
    if (eq == std::string::npos)
      throw InputError("method spec '" + spec + "': expected key=value, got '" + parts[i] + "'");
    kv.emplace_back(parts[i].substr(0, eq), parts[i].substr(eq + 1));
  }
  auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : kv) {
      bool ok = false;
      for (const char* a : allowed)
        if (k == a) ok = true;
      if (!ok) throw InputError("method spec '" + spec + "': unknown key '" + k + "'");
    }
  };

  if (kind == "static") {
    m.kind = MethodSpec::Kind::Static;
    reject_unknown({"scorer", "tau", "g"});
    for (const auto& [k, v] : kv) {
      if (k == "scorer") m.scorer = v;
      else if (k == "tau") m.rule.tau = parse_real(v, "tau");
      else if (k == "g") m.rule.gap = parse_int(v, "g");
    }
    if (m.scorer.empty()) throw InputError("method spec '" + spec + "': static needs scorer=");
  } else if (kind == "adaptive") {
    m.kind = MethodSpec::Kind::Adaptive;
    reject_unknown({"scorer", "rho", "g", "eta", "window", "tau0", "max_age"});
    for (const auto& [k, v] : kv) {
      if (k == "scorer") m.scorer = v;
      else if (k == "rho") m.adaptive.rho = parse_real(v, "rho");
      else if (k == "g") m.adaptive.gap = parse_int(v, "g");
      else if (k == "eta") m.adaptive.eta = parse_real(v, "eta");
      else if (k == "window") m.adaptive.window = parse_int(v, "window");
      else if (k == "tau0") m.adaptive.tau0 = parse_real(v, "tau0");
      else if (k == "max_age") m.adaptive.max_age = parse_int(v, "max_age");
    }
    if (m.scorer.empty()) throw InputError("method spec '" + spec + "': adaptive needs scorer=");
  } else if (kind == "no-boundary") {
    m.kind = MethodSpec::Kind::NoBoundary;
    reject_unknown({});
  } else if (kind == "periodic") {
    m.kind = MethodSpec::Kind::Periodic;
    reject_unknown({"n"});
    for (const auto& [k, v] : kv)
      if (k == "n") m.periodic_n = parse_int(v, "n");
    if (m.periodic_n < 1) throw InputError("method spec '" + spec + "': periodic needs n=<positive>");
  } else if (kind == "oracle-random") {
    m.kind = MethodSpec::Kind::OracleRandom;
    reject_unknown({});
  } else if (kind == "oracle-periodic") {
    m.kind = MethodSpec::Kind::OraclePeriodic;
    reject_unknown({});
  } else if (kind == "preds") {
    m.kind = MethodSpec::Kind::Preds;
    reject_unknown({"path"});
    for (const auto& [k, v] : kv)
      if (k == "path") m.path = v;
    if (m.path.empty()) throw InputError("method spec '" + spec + "': preds needs path=<file>");
  } else {
    throw InputError("unknown method kind '" + kind + "'");
  }
  return m;
}

struct MethodRun {
  std::vector<BoundarySet> preds;
  std::vector<std::pair<std::string, SelectionTrace>> traces;  // adaptive only
};

MethodRun run_method(std::span<const Dialogue> dialogues, const MethodSpec& m,
                     std::uint64_t seed, int context_k) {
  MethodRun out;
  out.preds.reserve(dialogues.size());
  ContextWindow ctx{context_k};
  switch (m.kind) {
    case MethodSpec::Kind::Static: {
      Scorer scorer = make_scorer(m.scorer, seed, dialogues, ctx);
      for (const auto& d : dialogues) out.preds.push_back(select_static(scorer(d), m.rule));
      break;
    }
    case MethodSpec::Kind::Adaptive: {
      Scorer scorer = make_scorer(m.scorer, seed, dialogues, ctx);
      for (const auto& d : dialogues) {
        SelectionTrace trace = select_adaptive(scorer(d), m.adaptive);
        out.preds.push_back(trace.committed);
        out.traces.emplace_back(d.id, std::move(trace));
      }
      break;
    }
    case MethodSpec::Kind::NoBoundary:
      for (const auto& d : dialogues) out.preds.push_back(baseline_no_boundary(d));
      break;
    case MethodSpec::Kind::Periodic:
      for (const auto& d : dialogues) out.preds.push_back(baseline_periodic(d, m.periodic_n));
      break;
    case MethodSpec::Kind::OracleRandom:
      for (const auto& d : dialogues) out.preds.push_back(baseline_oracle_random(d, seed));
      break;
    case MethodSpec::Kind::OraclePeriodic:
      for (const auto& d : dialogues) out.preds.push_back(baseline_oracle_periodic(d));
      break;
    case MethodSpec::Kind::Preds: {
      auto preds = read_predictions(m.path, dialogues);
      out.preds.assign(preds.begin(), preds.end());
      break;
    }
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path);
  out << content;
}

json common_config(const CommonOpts& o, bool with_scorer_context = true) {
  json j;
  j["seed"] = o.seed;
  j["window"] = o.window;
  j["matching"] = o.matching;
  j["regime_cutoffs"] = o.regime_cutoffs;
  if (with_scorer_context) j["context_window"] = o.context_k;
  return j;
}

std::vector<std::string> header_lines(const json& config, const std::string& corpus_hash) {
  return {"config: " + config.dump(), "corpus_hash: " + corpus_hash};
}

// ---------------------------------------------------------------------------
// canonicalize
// ---------------------------------------------------------------------------

struct CanonicalizeOpts {
  std::string input, output, gold_output;
  std::string unit = "utterance";
  std::string derivation;
};

int cmd_canonicalize(const CanonicalizeOpts& o) {
  CanonRule rule;
  if (o.unit == "utterance") rule.unit = Unit::Utterance;
  else if (o.unit == "speaker-turn") rule.unit = Unit::SpeakerTurn;
  else throw InputError("unknown unit '" + o.unit + "' (expected utterance | speaker-turn)");

  if (o.derivation == "segment-id") rule.derivation = Derivation::SegmentIdChange;
  else if (o.derivation == "boundary-marker") rule.derivation = Derivation::BoundaryMarker;
  else if (o.derivation == "label") rule.derivation = Derivation::LabelChange;
  else
    throw InputError("unknown derivation '" + o.derivation +
                     "' (expected segment-id | boundary-marker | label)");

  auto dialogues = ingest(o.input);
  if (dialogues.empty()) throw InputError("corpus '" + o.input + "' is empty");
  for (auto& d : dialogues) d = derive_gold(d, rule);

  json config;
  config["command"] = "canonicalize";
  config["input"] = o.input;
  config["input_hash"] = file_hash_hex(o.input);
  config["unit"] = o.unit;
  config["derivation"] = o.derivation;
  config["output"] = o.output;
  config["gold_output"] = o.gold_output;
  auto headers = header_lines(config, config["input_hash"].get<std::string>());

  write_canonical_file(o.output, dialogues, headers);
  write_gold_file(o.gold_output, dialogues, headers);

  long long messages = 0, gold = 0, segments = 0;
  for (const auto& d : dialogues) {
    messages += d.num_messages();
    gold += static_cast<long long>(d.gold.size());
    segments += static_cast<long long>(d.gold.size()) + 1;
  }
  std::cout << "dialogues: " << dialogues.size() << "\n";
  std::cout << "messages: " << messages << "\n";
  std::cout << "gold_boundaries: " << gold << "\n";
  std::cout << "mean_segment_length: "
            << fmt_fixed(static_cast<double>(messages) / static_cast<double>(segments), 3) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

struct EvaluateOpts {
  std::string corpus, gold, method;
  std::string report_path, csv_path, trace_path;
  CommonOpts common;
};

int cmd_evaluate(const EvaluateOpts& o) {
  auto dialogues = load_corpus(o.corpus, o.gold);
  MethodSpec spec = parse_method_spec(o.method);
  if (!o.trace_path.empty() && spec.kind != MethodSpec::Kind::Adaptive)
    throw InputError("--trace requires an adaptive method");

  MethodRun run = run_method(dialogues, spec, o.common.seed, o.common.context_k);
  MetricsReport report = evaluate_corpus(dialogues, run.preds, eval_options(o.common));

  bool all_gold_empty = true;
  for (const auto& d : dialogues)
    if (!d.gold.empty()) all_gold_empty = false;
  std::optional<double> neg_ctrl;
  if (all_gold_empty) neg_ctrl = negative_control_rate(dialogues, run.preds);

  json config = common_config(o.common);
  config["command"] = "evaluate";
  config["corpus"] = o.corpus;
  config["corpus_hash"] = file_hash_hex(o.corpus);
  config["gold"] = o.gold;
  config["gold_hash"] = file_hash_hex(o.gold);
  config["method"] = o.method;
  if (!o.report_path.empty()) config["report"] = o.report_path;
  if (!o.csv_path.empty()) config["csv"] = o.csv_path;
  if (!o.trace_path.empty()) config["trace"] = o.trace_path;
  auto headers = header_lines(config, config["corpus_hash"].get<std::string>());

  RowMeta meta;
  meta.dataset = fs::path(o.corpus).stem().string();
  meta.method = o.method;
  if (spec.kind == MethodSpec::Kind::Static) {
    meta.tau = spec.rule.tau;
    meta.gap = spec.rule.gap;
  } else if (spec.kind == MethodSpec::Kind::Adaptive) {
    meta.gap = spec.adaptive.gap;
  }

  std::string text;
  for (const auto& h : headers) text += "# " + h + "\n";
  text += metrics_report_text(report, meta, neg_ctrl);
  if (o.report_path.empty())
    std::cout << text;
  else
    write_text_file(o.report_path, text);

  if (!o.csv_path.empty()) write_text_file(o.csv_path, metrics_report_csv(report, meta, headers));
  if (!o.trace_path.empty()) write_text_file(o.trace_path, trace_csv(run.traces, headers));
  return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepOpts {
  std::string corpus, gold, scorer, output;
  SweepGrid grid;
  int bootstrap = 1000;
  CommonOpts common;
};

int cmd_sweep(const SweepOpts& o) {
  auto dialogues = load_corpus(o.corpus, o.gold);
  Scorer scorer = make_scorer(o.scorer, o.common.seed, dialogues, ContextWindow{o.common.context_k});
  std::vector<ScoreVector> scores;
  scores.reserve(dialogues.size());
  for (const auto& d : dialogues) scores.push_back(scorer(d));

  SweepOptions opts;
  opts.grid = o.grid;
  opts.eval = eval_options(o.common);
  if (o.bootstrap > 0) opts.bootstrap = BootstrapSpec{o.bootstrap, o.common.seed};
  opts.threads = o.common.threads;
  auto points = sweep(dialogues, scores, opts);

  json config = common_config(o.common);
  config["command"] = "sweep";
  config["corpus"] = o.corpus;
  config["corpus_hash"] = file_hash_hex(o.corpus);
  config["gold"] = o.gold;
  config["gold_hash"] = file_hash_hex(o.gold);
  config["scorer"] = o.scorer;
  config["grid"] = {{"tau_min", o.grid.tau_min},
                    {"tau_max", o.grid.tau_max},
                    {"tau_step", o.grid.tau_step},
                    {"g", o.grid.gap}};
  config["bootstrap"] = o.bootstrap;
  config["output"] = o.output;
  auto headers = header_lines(config, config["corpus_hash"].get<std::string>());

  write_text_file(o.output, sweep_csv(points, o.scorer, o.grid.gap, headers));
  std::cout << "wrote " << points.size() << " operating points to " << o.output << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

struct CompareOpts {
  std::string corpus, gold, corpus_b, gold_b;
  std::string method_a, method_b;
  std::string output;
  int bootstrap = 1000;
  CommonOpts common;
};

int cmd_compare(const CompareOpts& o) {
  auto dialogues = load_corpus(o.corpus, o.gold);
  if (!o.corpus_b.empty() || !o.gold_b.empty()) {
    std::string cb = o.corpus_b.empty() ? o.corpus : o.corpus_b;
    std::string gb = o.gold_b.empty() ? o.gold : o.gold_b;
    auto other = load_corpus(cb, gb);
    bool same = other.size() == dialogues.size();
    if (same)
      for (std::size_t i = 0; i < other.size(); ++i)
        if (other[i].id != dialogues[i].id || other[i].num_messages() != dialogues[i].num_messages() ||
            !(other[i].gold == dialogues[i].gold))
          same = false;
    if (!same)
      throw InputError("corpora for the two methods differ; compare requires identical dialogue sets");
  }

  MethodSpec spec_a = parse_method_spec(o.method_a);
  MethodSpec spec_b = parse_method_spec(o.method_b);
  auto run_a = run_method(dialogues, spec_a, o.common.seed, o.common.context_k);
  auto run_b = run_method(dialogues, spec_b, o.common.seed, o.common.context_k);

  Comparison cmp = compare_methods(dialogues, run_a.preds, run_b.preds, eval_options(o.common),
                                   BootstrapSpec{o.bootstrap, o.common.seed});

  json config = common_config(o.common);
  config["command"] = "compare";
  config["corpus"] = o.corpus;
  config["corpus_hash"] = file_hash_hex(o.corpus);
  config["gold"] = o.gold;
  config["gold_hash"] = file_hash_hex(o.gold);
  config["method_a"] = o.method_a;
  config["method_b"] = o.method_b;
  config["bootstrap"] = o.bootstrap;
  if (!o.output.empty()) config["output"] = o.output;
  auto headers = header_lines(config, config["corpus_hash"].get<std::string>());

  std::string text = comparison_text(cmp, o.method_a, o.method_b, headers);
  if (o.output.empty())
    std::cout << text;
  else
    write_text_file(o.output, text);
  return 0;
}

// ---------------------------------------------------------------------------
// calibrate
// ---------------------------------------------------------------------------

struct CalibrateOpts {
  std::string corpus, gold, scores, output;
  CommonOpts common;
};

int cmd_calibrate(const CalibrateOpts& o) {
  auto dialogues = load_corpus(o.corpus, o.gold);
  auto logits = load_scores(o.scores, dialogues);
  if (logits.size() != dialogues.size())
    throw InputError("score file must cover every corpus dialogue");
  // Align score vectors with corpus order.
  std::vector<ScoreVector> ordered;
  ordered.reserve(dialogues.size());
  for (const auto& d : dialogues) {
    bool found = false;
    for (auto& v : logits)
      if (v.dialogue_id == d.id) {
        ordered.push_back(v);
        found = true;
        break;
      }
    if (!found) throw InputError("score file has no record for dialogue '" + d.id + "'");
  }
  for (const auto& v : ordered)
    if (v.kind != ScoreKind::Logit)
      throw InputError("calibrate expects logit-kind scores ('" + v.dialogue_id + "' is not)");

  std::vector<BoundarySet> golds;
  golds.reserve(dialogues.size());
  for (const auto& d : dialogues) golds.push_back(d.gold);

  Temperature temp = fit_temperature(ordered, golds);
  double nll_before = calibration_nll(ordered, golds, 1.0);
  double nll_after = calibration_nll(ordered, golds, temp.t);

  json config = common_config(o.common, /*with_scorer_context=*/false);
  config["command"] = "calibrate";
  config["corpus"] = o.corpus;
  config["corpus_hash"] = file_hash_hex(o.corpus);
  config["gold"] = o.gold;
  config["gold_hash"] = file_hash_hex(o.gold);
  config["scores"] = o.scores;
  config["scores_hash"] = file_hash_hex(o.scores);
  config["output"] = o.output;
  config["temperature"] = temp.t;
  auto headers = header_lines(config, config["corpus_hash"].get<std::string>());

  std::vector<ScoreVector> calibrated;
  calibrated.reserve(ordered.size());
  for (const auto& v : ordered) calibrated.push_back(apply_temperature(v, temp));
  write_scores(o.output, calibrated, headers);

  std::cout << "fitted_temperature: " << fmt_fixed(temp.t, 4) << "\n";
  std::cout << "nll_before: " << fmt_fixed(nll_before, 6) << "\n";
  std::cout << "nll_after: " << fmt_fixed(nll_after, 6) << "\n";
  std::cout << "mean_abs_logit: " << fmt_fixed(mean_abs_score(ordered), 4) << "\n";
  if (temp.t <= kTemperatureSearchLo * 1.01 || temp.t >= kTemperatureSearchHi * 0.99)
    std::cerr << "warning: fitted temperature sits at the search bound; "
              << "scores may be (near-)separable\n";
  return 0;
}

// ---------------------------------------------------------------------------
// baseline
// ---------------------------------------------------------------------------

struct BaselineOpts {
  std::string corpus, gold, kind, output;
  CommonOpts common;
};

int cmd_baseline(const BaselineOpts& o) {
  auto dialogues = load_corpus(o.corpus, o.gold);
  MethodSpec spec = parse_method_spec(o.kind);
  switch (spec.kind) {
    case MethodSpec::Kind::NoBoundary:
    case MethodSpec::Kind::Periodic:
    case MethodSpec::Kind::OracleRandom:
    case MethodSpec::Kind::OraclePeriodic:
      break;
    default:
      throw InputError("baseline kind must be one of no-boundary | periodic,n=<N> | "
                       "oracle-random | oracle-periodic");
  }
  MethodRun run = run_method(dialogues, spec, o.common.seed, o.common.context_k);

  json config = common_config(o.common, /*with_scorer_context=*/false);
  config["command"] = "baseline";
  config["corpus"] = o.corpus;
  config["corpus_hash"] = file_hash_hex(o.corpus);
  config["gold"] = o.gold;
  config["gold_hash"] = file_hash_hex(o.gold);
  config["kind"] = o.kind;
  config["output"] = o.output;
  auto headers = header_lines(config, config["corpus_hash"].get<std::string>());

  write_predictions(o.output, dialogues, run.preds, headers);
  long long total = 0;
  for (const auto& p : run.preds) total += static_cast<long long>(p.size());
  std::cout << "wrote " << total << " boundaries for " << dialogues.size() << " dialogues to "
            << o.output << "\n";
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"dialogue topic segmentation evaluation toolkit"};
  app.require_subcommand(1);
  // Options may come from an INI/TOML file ([subcommand] sections);
  // command-line flags override file values.
  app.set_config("--config", "", "read options from a config file");
  app.allow_config_extras(false);

  CanonicalizeOpts canon;
  auto* c_canon = app.add_subcommand("canonicalize", "derive gold boundaries from raw annotations");
  c_canon->add_option("--input", canon.input, "raw dialogue file (canonical JSONL schema)")->required();
  c_canon->add_option("--unit", canon.unit, "utterance | speaker-turn");
  c_canon->add_option("--derivation", canon.derivation, "segment-id | boundary-marker | label")->required();
  c_canon->add_option("--output", canon.output, "canonical corpus output")->required();
  c_canon->add_option("--gold-output", canon.gold_output, "gold boundary export")->required();

  EvaluateOpts eval;
  auto* c_eval = app.add_subcommand("evaluate", "score one method on a corpus");
  c_eval->add_option("--corpus", eval.corpus, "canonical corpus")->required();
  c_eval->add_option("--gold", eval.gold, "gold boundary file")->required();
  c_eval->add_option("--method", eval.method, "method spec")->required();
  c_eval->add_option("--report", eval.report_path, "text report output (default stdout)");
  c_eval->add_option("--csv", eval.csv_path, "CSV report output");
  c_eval->add_option("--trace", eval.trace_path, "adaptive selection trace CSV");
  add_common(c_eval, eval.common);

  SweepOpts sweepo;
  auto* c_sweep = app.add_subcommand("sweep", "density-quality threshold sweep");
  c_sweep->add_option("--corpus", sweepo.corpus, "canonical corpus")->required();
  c_sweep->add_option("--gold", sweepo.gold, "gold boundary file")->required();
  c_sweep->add_option("--scorer", sweepo.scorer, "scorer spec")->required();
  c_sweep->add_option("--tau-min", sweepo.grid.tau_min, "grid start");
  c_sweep->add_option("--tau-max", sweepo.grid.tau_max, "grid end");
  c_sweep->add_option("--tau-step", sweepo.grid.tau_step, "grid step");
  c_sweep->add_option("--gap", sweepo.grid.gap, "minimum spacing g");
  c_sweep->add_option("--bootstrap", sweepo.bootstrap, "bootstrap replicates (0 disables CIs)");
  c_sweep->add_option("--output", sweepo.output, "sweep CSV output")->required();
  add_common(c_sweep, sweepo.common);

  CompareOpts cmp;
  auto* c_cmp = app.add_subcommand("compare", "paired bootstrap audit of two methods");
  c_cmp->add_option("--corpus", cmp.corpus, "canonical corpus")->required();
  c_cmp->add_option("--gold", cmp.gold, "gold boundary file")->required();
  c_cmp->add_option("--corpus-b", cmp.corpus_b, "corpus for method B (must match)");
  c_cmp->add_option("--gold-b", cmp.gold_b, "gold file for method B (must match)");
  c_cmp->add_option("--method-a", cmp.method_a, "first method spec")->required();
  c_cmp->add_option("--method-b", cmp.method_b, "second method spec")->required();
  c_cmp->add_option("--bootstrap", cmp.bootstrap, "bootstrap replicates");
  c_cmp->add_option("--output", cmp.output, "report output (default stdout)");
  add_common(c_cmp, cmp.common);

  CalibrateOpts cal;
  auto* c_cal = app.add_subcommand("calibrate", "fit a global temperature on logit scores");
  c_cal->add_option("--corpus", cal.corpus, "canonical corpus")->required();
  c_cal->add_option("--gold", cal.gold, "gold boundary file")->required();
  c_cal->add_option("--scores", cal.scores, "logit score file")->required();
  c_cal->add_option("--output", cal.output, "calibrated score file")->required();
  add_common(c_cal, cal.common, /*with_scorer_context=*/false);

  BaselineOpts base;
  auto* c_base = app.add_subcommand("baseline", "emit baseline boundary predictions");
  c_base->add_option("--corpus", base.corpus, "canonical corpus")->required();
  c_base->add_option("--gold", base.gold, "gold boundary file")->required();
  c_base->add_option("--kind", base.kind, "baseline spec")->required();
  c_base->add_option("--output", base.output, "predictions output")->required();
  add_common(c_base, base.common, /*with_scorer_context=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c_canon->parsed()) return cmd_canonicalize(canon);
    if (c_eval->parsed()) return cmd_evaluate(eval);
    if (c_sweep->parsed()) return cmd_sweep(sweepo);
    if (c_cmp->parsed()) return cmd_compare(cmp);
    if (c_cal->parsed()) return cmd_calibrate(cal);
    if (c_base->parsed()) return cmd_baseline(base);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

int cli_main(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("segeval");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace segeval
