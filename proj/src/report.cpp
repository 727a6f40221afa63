#include "flunow/report.hpp"

#include "flunow/error.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace flunow {

namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json cell_json(const CorrelationResult& c) {
  return {{"value", number_or_null(c.r)},
          {"p", number_or_null(c.p_value)},
          {"n", c.n},
          {"na_reason", c.na_reason ? json(std::string(to_string(*c.na_reason))) : json(nullptr)}};
}

json coefficient_json(const CoefficientStats& c) {
  return {{"estimate", c.estimate},
          {"std_error", c.std_error},
          {"ci_low", c.ci_low},
          {"ci_high", c.ci_high},
          {"p", c.p_value}};
}

bool writable_label(std::string_view s) {
  return !s.empty() && std::none_of(s.begin(), s.end(), [](char c) {
    return c == ',' || static_cast<unsigned char>(c) < 0x20 || c == 0x7f;
  });
}

CorrelationResult model_cell(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s,
                             const SignificanceConfig& cfg, const ModelTableOptions& options) {
  try {
    const NowcastSeries est =
        options.mode == NowcastMode::FullPeriod
            ? full_period_nowcast(panel, y, s, cfg.alpha, options.clamp_nonnegative)
            : rolling_weekly_fit(panel, y, s, resolve_warmup(panel, y, s, options.warmup), cfg.alpha,
                                 options.clamp_nonnegative);
    return evaluate(est, y, cfg).overall;
  } catch (const Error& e) {
    // An unfittable model has no estimates: too few weeks reads as
    // TooFewPairs, a degenerate design as ZeroVariance.
    if (e.code() == ErrorCode::Underdetermined) return CorrelationResult::unavailable(NaReason::TooFewPairs, 0);
    if (e.code() == ErrorCode::SingularDesign) return CorrelationResult::unavailable(NaReason::ZeroVariance, 0);
    throw;
  }
}

CorrelationResult correlate_in_year(const WeeklySeries& x, const WeeklySeries& y, int year, ShiftSpec s,
                                    const SignificanceConfig& cfg) {
  // Years are assigned by the case-side week.
  return correlate(x, slice_year(y, year), s, cfg);
}

}  // namespace

std::string shift_label(ShiftSpec s) {
  if (s.weeks() < 0) return fmt::format("{}-week preceding", -s.weeks());
  return fmt::format("{}-week lagging", s.weeks());
}

std::string period_label(const WeeklySeries& y) {
  const int first = y.start().iso_year();
  const int last = y.end().iso_year();
  return first == last ? std::to_string(first) : fmt::format("{}-{}", first, last);
}

CorrelationTable table_overall_annual(const QueryPanel& panel, const WeeklySeries& y, const SignificanceConfig& cfg,
                                      ShiftSpec s) {
  cfg.validate();
  CorrelationTable table;
  table.alpha = cfg.alpha;
  table.key_columns = {"query"};
  table.value_columns.push_back(period_label(y));
  const auto years = covered_years(y);
  for (int year : years) table.value_columns.push_back(std::to_string(year));
  for (const auto& x : panel.series()) {
    CorrelationTable::Row row{{x.label()}, {correlate(x, y, s, cfg)}};
    for (int year : years) row.cells.push_back(correlate_in_year(x, y, year, s, cfg));
    table.rows.push_back(std::move(row));
  }
  return table;
}

CorrelationTable table_shift_scan(const QueryPanel& panel, const WeeklySeries& y, std::span<const ShiftSpec> shifts,
                                  const SignificanceConfig& cfg) {
  cfg.validate();
  CorrelationTable table;
  table.alpha = cfg.alpha;
  table.key_columns = {"year", "dataset"};
  table.value_columns = panel.labels();
  for (const ShiftSpec s : shifts) {
    CorrelationTable::Row row{{period_label(y), shift_label(s)}, {}};
    for (const auto& x : panel.series()) row.cells.push_back(correlate(x, y, s, cfg));
    table.rows.push_back(std::move(row));
  }
  for (int year : covered_years(y)) {
    for (const ShiftSpec s : shifts) {
      CorrelationTable::Row row{{std::to_string(year), shift_label(s)}, {}};
      for (const auto& x : panel.series()) row.cells.push_back(correlate_in_year(x, y, year, s, cfg));
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

CorrelationTable table_model_by_shift(const QueryPanel& panel, const WeeklySeries& y,
                                      std::span<const std::string> selection, std::span<const ShiftSpec> shifts,
                                      const SignificanceConfig& cfg, const ModelTableOptions& options) {
  cfg.validate();
  const QueryPanel used = panel.select(selection);
  CorrelationTable table;
  table.alpha = cfg.alpha;
  table.key_columns = {"dataset"};
  CorrelationTable::Row row{{"model"}, {}};
  for (const ShiftSpec s : shifts) {
    table.value_columns.push_back(shift_label(s));
    row.cells.push_back(model_cell(used, y, s, cfg, options));
  }
  table.rows.push_back(std::move(row));
  return table;
}

CorrelationTable table_model_by_shift(const QueryPanel& panel, const WeeklySeries& y, const SelectionResult& selection,
                                      const SignificanceConfig& cfg, const ModelTableOptions& options) {
  const auto shifts = default_shifts();
  return table_model_by_shift(panel, y, selection.chosen_labels, shifts, cfg, options);
}

std::string format_number(double v) { return std::isfinite(v) ? fmt::format("{:.2f}", v) : "NA"; }

std::string format_cell(const CorrelationResult& cell) { return cell.na() ? "NA" : format_number(cell.r); }

std::string to_csv(const CorrelationTable& table) {
  std::string out;
  std::vector<std::string> header = table.key_columns;
  header.insert(header.end(), table.value_columns.begin(), table.value_columns.end());
  out += fmt::format("{}\n", fmt::join(header, ","));
  for (const auto& row : table.rows) {
    std::vector<std::string> fields = row.keys;
    for (const auto& c : row.cells) fields.push_back(format_cell(c));
    out += fmt::format("{}\n", fmt::join(fields, ","));
  }
  out += "NA: Not applicable\n";
  out += fmt::format("p<{}\n", table.alpha);
  return out;
}

std::string to_json(const CorrelationTable& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json cells = json::object();
    for (std::size_t i = 0; i < row.cells.size(); ++i) cells[table.value_columns[i]] = cell_json(row.cells[i]);
    json keys = json::object();
    for (std::size_t i = 0; i < row.keys.size(); ++i) keys[table.key_columns[i]] = row.keys[i];
    rows.push_back({{"keys", keys}, {"cells", cells}});
  }
  json doc = {{"alpha", table.alpha}, {"columns", table.value_columns}, {"rows", rows}};
  return doc.dump(2) + "\n";
}

std::string figure_data(std::span<const WeeklySeries> series) {
  if (series.empty()) throw Error(ErrorCode::InvalidArgument, "figure data needs at least one series");
  std::set<std::string_view> labels;
  std::vector<std::tuple<WeekStamp, std::string_view, double>> points;
  for (const auto& s : series) {
    if (!writable_label(s.label())) {
      throw Error(ErrorCode::InvalidLabel, fmt::format("label '{}' is empty or not CSV-safe", s.label()));
    }
    if (!labels.insert(s.label()).second) {
      throw Error(ErrorCode::InvalidLabel, fmt::format("label '{}' appears twice", s.label()));
    }
    for (std::size_t i = 0; i < s.size(); ++i) points.emplace_back(s.week_at(i), s.label(), s[i]);
  }
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  std::string out = "week,label,value\n";
  for (const auto& [week, label, value] : points) {
    fmt::format_to(std::back_inserter(out), "{},{},{:.2f}\n", week.to_string(), label, value);
  }
  return out;
}

std::string sweep_csv(std::span<const SweepPoint> sweep) {
  std::string out = "top_n,objective\n";
  for (const auto& p : sweep) {
    fmt::format_to(std::back_inserter(out), "{},{}\n", p.top_n, p.objective ? format_number(*p.objective) : "NA");
  }
  return out;
}

std::string trace_csv(const SelectionResult& selection) {
  std::string out = "step,label,objective\n";
  for (const auto& s : selection.trace) {
    fmt::format_to(std::back_inserter(out), "{},{},{}\n", s.step, s.label_added, format_number(s.objective_after));
  }
  return out;
}

std::string fit_csv(const ModelFit& fit) {
  std::string out = "term,estimate,std_error,ci_low,ci_high,p_value\n";
  auto row = [&out](std::string_view term, const CoefficientStats& c) {
    fmt::format_to(std::back_inserter(out), "{},{},{},{},{},{}\n", term, format_number(c.estimate),
                   format_number(c.std_error), format_number(c.ci_low), format_number(c.ci_high),
                   format_number(c.p_value));
  };
  row("intercept", fit.intercept);
  for (const auto& c : fit.coefficients) row(c.label, c.stats);
  return out;
}

std::string fit_json(const ModelFit& fit) {
  json coefficients = json::array();
  for (const auto& c : fit.coefficients) {
    json entry = coefficient_json(c.stats);
    entry["label"] = c.label;
    coefficients.push_back(entry);
  }
  json doc = {{"shift_weeks", fit.shift.weeks()},
              {"alpha", fit.alpha},
              {"r_squared", fit.r_squared},
              {"residual_dof", fit.residual_dof},
              {"rss", fit.rss},
              {"intercept", coefficient_json(fit.intercept)},
              {"coefficients", coefficients}};
  return doc.dump(2) + "\n";
}

Strength classify_strength(double r) {
  if (!(std::abs(r) <= 1.0)) throw Error(ErrorCode::OutOfRange, fmt::format("r = {} outside [-1, 1]", r));
  return r > 0.7 ? Strength::Strong : Strength::NotStrong;
}

std::string_view to_string(Strength s) noexcept { return s == Strength::Strong ? "strong" : "not strong"; }

}  // namespace flunow
