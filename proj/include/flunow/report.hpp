#pragma once

#include "flunow/panel.hpp"
#include "flunow/regress.hpp"
#include "flunow/select.hpp"
#include "flunow/stats.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace flunow {

/// A table of correlation cells. Each row carries its key columns (query, or
/// year + dataset) followed by one cell per value column.
struct CorrelationTable {
  std::vector<std::string> key_columns;
  std::vector<std::string> value_columns;

  struct Row {
    std::vector<std::string> keys;
    std::vector<CorrelationResult> cells;
  };
  std::vector<Row> rows;
  double alpha = 0.05;
};

/// "k-week preceding" for negative shifts, "k-week lagging" otherwise.
std::string shift_label(ShiftSpec s);

/// Overall-period label, e.g. "2009-2013".
std::string period_label(const WeeklySeries& y);

/// One row per query; columns: overall period, then each ISO year of y.
CorrelationTable table_overall_annual(const QueryPanel& panel, const WeeklySeries& y,
                                      const SignificanceConfig& cfg = {}, ShiftSpec s = ShiftSpec{0});

/// Rows grouped by period (overall, then each year) and shift; one column per query.
CorrelationTable table_shift_scan(const QueryPanel& panel, const WeeklySeries& y, std::span<const ShiftSpec> shifts,
                                  const SignificanceConfig& cfg = {});

struct ModelTableOptions {
  NowcastMode mode = NowcastMode::FullPeriod;
  std::optional<std::size_t> warmup;  // rolling only; default n + 4
  bool clamp_nonnegative = false;
};

/// Model-estimate correlation for the selected queries at every shift.
CorrelationTable table_model_by_shift(const QueryPanel& panel, const WeeklySeries& y,
                                      std::span<const std::string> selection, std::span<const ShiftSpec> shifts,
                                      const SignificanceConfig& cfg = {}, const ModelTableOptions& options = {});

CorrelationTable table_model_by_shift(const QueryPanel& panel, const WeeklySeries& y, const SelectionResult& selection,
                                      const SignificanceConfig& cfg = {}, const ModelTableOptions& options = {});

/// CSV with 2-decimal cells, NA for NA cells, and the two footnote lines.
std::string to_csv(const CorrelationTable& table);

/// Sidecar carrying every cell as {value, p, n, na_reason}.
std::string to_json(const CorrelationTable& table);

/// Long format `week,label,value` sorted by (week, label), 2 decimals.
std::string figure_data(std::span<const WeeklySeries> series);

std::string sweep_csv(std::span<const SweepPoint> sweep);
std::string trace_csv(const SelectionResult& selection);
std::string fit_csv(const ModelFit& fit);
std::string fit_json(const ModelFit& fit);

enum class Strength { Strong, NotStrong };

/// Strong iff r > 0.7. Throws OutOfRange when |r| > 1 or r is NaN.
Strength classify_strength(double r);

std::string_view to_string(Strength s) noexcept;

/// "NA" or the value with exactly two decimals.
std::string format_cell(const CorrelationResult& cell);
std::string format_number(double v);

}  // namespace flunow
