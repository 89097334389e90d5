#pragma once

#include <optional>
#include <span>
#include <string>

#include "segeval/analysis.hpp"
#include "segeval/metrics.hpp"
#include "segeval/selection.hpp"

namespace segeval {

// Fixed-decimal formatting (C locale); keeps every artifact byte-stable.
std::string fmt_fixed(double value, int decimals);

// Context for a report row. tau/gap are empty for methods that do not use a
// threshold (baselines, file-backed predictions).
struct RowMeta {
  std::string dataset;
  std::string method;
  std::optional<double> tau;
  std::optional<int> gap;
};

// Human-readable summary: one block per corpus-level metric, three decimals
// for unit-interval metrics, two for BOR, plus the density regime.
std::string metrics_report_text(const MetricsReport& report, const RowMeta& meta,
                                std::optional<double> negative_control);

// columns: dataset,method,tau,g,wf1,f1,bor,purity,coverage,pred_count,gold_count,regime
std::string metrics_report_csv(const MetricsReport& report, const RowMeta& meta,
                               std::span<const std::string> header_lines);

// columns: method,tau,g,bor,wf1,wf1_lo,wf1_hi,f1,purity,coverage,coverage_lo,
//          coverage_hi,pred_count,gold_count,regime
std::string sweep_csv(std::span<const SweepPoint> points, const std::string& method, int gap,
                      std::span<const std::string> header_lines);

std::string comparison_text(const Comparison& cmp, const std::string& method_a,
                            const std::string& method_b,
                            std::span<const std::string> header_lines);

// columns: id,t,tau,candidates_seen,committed  (one session per dialogue id)
std::string trace_csv(std::span<const std::pair<std::string, SelectionTrace>> sessions,
                      std::span<const std::string> header_lines);

}  // namespace segeval
