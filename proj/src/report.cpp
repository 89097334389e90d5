#include "segeval/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace segeval {

namespace {

std::string bor_text(const Bor& b, int decimals) {
  return b.defined ? fmt_fixed(b.value, decimals) : "undefined";
}

void emit_headers(std::ostringstream& os, std::span<const std::string> header_lines) {
  for (const auto& h : header_lines) os << "# " << h << "\n";
}

}  // namespace

std::string fmt_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::string metrics_report_text(const MetricsReport& report, const RowMeta& meta,
                                std::optional<double> negative_control) {
  std::ostringstream os;
  os << "dataset: " << meta.dataset << "\n";
  os << "method: " << meta.method << "\n";
  if (meta.tau) os << "tau: " << fmt_fixed(*meta.tau, 2) << "\n";
  if (meta.gap) os << "g: " << *meta.gap << "\n";
  os << "dialogues: " << report.per_dialogue.size() << "\n";
  os << "wf1_macro: " << fmt_fixed(report.wf1_macro, 3) << "\n";
  os << "f1_micro: " << fmt_fixed(report.f1_micro, 3) << "\n";
  os << "bor: " << bor_text(report.bor, 2) << "\n";
  os << "purity_macro: " << fmt_fixed(report.purity_macro, 3) << "\n";
  os << "coverage_macro: " << fmt_fixed(report.coverage_macro, 3) << "\n";
  os << "pred_boundaries: " << report.pred_count << "\n";
  os << "gold_boundaries: " << report.gold_count << "\n";
  os << "regime: " << regime_name(report.regime) << "\n";
  if (negative_control)
    os << "negative_control_rate: " << fmt_fixed(*negative_control, 3) << "\n";
  return os.str();
}

std::string metrics_report_csv(const MetricsReport& report, const RowMeta& meta,
                               std::span<const std::string> header_lines) {
  std::ostringstream os;
  emit_headers(os, header_lines);
  os << "dataset,method,tau,g,wf1,f1,bor,purity,coverage,pred_count,gold_count,regime\n";
  os << meta.dataset << "," << meta.method << ",";
  if (meta.tau) os << fmt_fixed(*meta.tau, 2);
  os << ",";
  if (meta.gap) os << *meta.gap;
  os << "," << fmt_fixed(report.wf1_macro, 6) << "," << fmt_fixed(report.f1_micro, 6) << ","
     << bor_text(report.bor, 6) << "," << fmt_fixed(report.purity_macro, 6) << ","
     << fmt_fixed(report.coverage_macro, 6) << "," << report.pred_count << ","
     << report.gold_count << "," << regime_name(report.regime) << "\n";
  return os.str();
}

std::string sweep_csv(std::span<const SweepPoint> points, const std::string& method, int gap,
                      std::span<const std::string> header_lines) {
  std::ostringstream os;
  emit_headers(os, header_lines);
  os << "method,tau,g,bor,wf1,wf1_lo,wf1_hi,f1,purity,coverage,coverage_lo,coverage_hi,"
     << "pred_count,gold_count,regime\n";
  for (const auto& p : points) {
    os << method << "," << fmt_fixed(p.tau, 2) << "," << gap << "," << bor_text(p.bor, 6) << ","
       << fmt_fixed(p.wf1, 6) << ",";
    if (p.wf1_ci) os << fmt_fixed(p.wf1_ci->lo, 6) << "," << fmt_fixed(p.wf1_ci->hi, 6);
    else os << ",";
    os << "," << fmt_fixed(p.f1, 6) << "," << fmt_fixed(p.purity, 6) << ","
       << fmt_fixed(p.coverage, 6) << ",";
    if (p.coverage_ci) os << fmt_fixed(p.coverage_ci->lo, 6) << "," << fmt_fixed(p.coverage_ci->hi, 6);
    else os << ",";
    os << "," << p.pred_count << "," << p.gold_count << "," << regime_name(p.regime) << "\n";
  }
  return os.str();
}

std::string comparison_text(const Comparison& cmp, const std::string& method_a,
                            const std::string& method_b,
                            std::span<const std::string> header_lines) {
  std::ostringstream os;
  emit_headers(os, header_lines);
  os << "comparison: " << method_a << " vs " << method_b << "\n";
  os << "positive deltas favour " << method_a << "\n\n";
  os << "metric  delta      ci_lo      ci_hi\n";
  for (const auto& d : cmp.deltas) {
    char sign = (d.value >= 0.0) ? '+' : '-';
    os << d.metric;
    for (std::size_t pad = d.metric.size(); pad < 8; ++pad) os << ' ';
    os << sign << fmt_fixed(std::abs(d.value), 3) << "     " << fmt_fixed(d.ci.lo, 3) << "      "
       << fmt_fixed(d.ci.hi, 3);
    if (d.skipped_replicates > 0)
      os << "   (" << d.skipped_replicates << " undefined replicates skipped)";
    os << "\n";
  }
  os << "\n";
  os << "regime " << method_a << ": " << regime_name(cmp.regime_a) << "\n";
  os << "regime " << method_b << ": " << regime_name(cmp.regime_b) << "\n";
  os << "density shift: " << regime_name(cmp.regime_b) << " -> " << regime_name(cmp.regime_a)
     << "\n";
  return os.str();
}

std::string trace_csv(std::span<const std::pair<std::string, SelectionTrace>> sessions,
                      std::span<const std::string> header_lines) {
  std::ostringstream os;
  emit_headers(os, header_lines);
  os << "id,t,tau,candidates_seen,committed\n";
  for (const auto& [id, trace] : sessions)
    for (const auto& s : trace.steps)
      os << id << "," << s.t << "," << fmt_fixed(s.tau, 6) << "," << s.candidates_seen << ","
         << s.committed << "\n";
  return os.str();
}

}  // namespace segeval
