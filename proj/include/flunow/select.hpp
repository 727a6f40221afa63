#pragma once

#include "flunow/panel.hpp"
#include "flunow/regress.hpp"
#include "flunow/stats.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace flunow {

struct SelectConfig {
  SignificanceConfig significance;
  /// Minimum objective gain for a candidate to be added.
  double min_improvement = 1e-6;
};

struct SelectionStep {
  std::size_t step;  // 1-based; step 1 is the seed
  std::string label_added;
  double objective_after;
};

/// Outcome of greedy selection at one shift.
struct ShiftSelection {
  ShiftSpec shift;
  std::vector<std::string> chosen_labels;
  double objective = 0.0;
  std::vector<SelectionStep> trace;
};

struct SelectionResult {
  std::vector<std::string> chosen_labels;  // insertion order
  ShiftSpec best_shift;
  double objective = 0.0;
  std::vector<SelectionStep> trace;
  /// Every shift that had at least one usable query, in input order.
  std::vector<ShiftSelection> per_shift;
};

/// Pearson r between full-period in-sample estimates of the model on
/// `labels` and y. nullopt when the fit is underdetermined/singular or the
/// estimates are constant.
std::optional<double> model_objective(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s,
                                      std::span<const std::string> labels);

/// Queries eligible for selection at `s`: non-NA with r > 0, in rank order.
std::vector<std::string> candidate_pool(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s,
                                        const SignificanceConfig& cfg);

/// Greedy forward selection at one shift; nullopt when the pool is empty.
std::optional<ShiftSelection> greedy_select_at(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s,
                                               const SelectConfig& cfg = {});

/// Greedy selection at every shift; keeps the shift with the highest final
/// objective (earliest in `shifts` on ties). Throws NoUsableQuery.
SelectionResult greedy_select(const QueryPanel& panel, const WeeklySeries& y, std::span<const ShiftSpec> shifts,
                              const SelectConfig& cfg = {});

struct SweepPoint {
  std::size_t top_n;
  std::optional<double> objective;  // nullopt: underdetermined or singular
};

/// Objective of the model fitted on the top-N ranked queries, N = 1..n.
std::vector<SweepPoint> prefix_sweep(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s,
                                     const SelectConfig& cfg = {});

}  // namespace flunow
