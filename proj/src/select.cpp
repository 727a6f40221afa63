#include "flunow/select.hpp"

#include "flunow/error.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace flunow {

std::optional<double> model_objective(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s,
                                      std::span<const std::string> labels) {
  const QueryPanel used = panel.select(labels);
  const DesignData design = build_design(used, y, s);
  try {
    const ModelFit fit = fit_design(design, labels, s, 0.05);
    return pearson(fit.fitted->vector(), design.y).r;
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::Underdetermined:
      case ErrorCode::SingularDesign:
      case ErrorCode::ZeroVariance:
      case ErrorCode::TooFewPairs:
        return std::nullopt;
      default:
        throw;
    }
  }
}

std::vector<std::string> candidate_pool(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s,
                                        const SignificanceConfig& cfg) {
  std::vector<std::string> pool;
  for (const auto& q : rank_queries(panel, y, s, cfg)) {
    if (!q.result.na() && q.result.r > 0.0) pool.push_back(q.label);
  }
  return pool;
}

std::optional<ShiftSelection> greedy_select_at(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s,
                                               const SelectConfig& cfg) {
  std::vector<std::string> remaining = candidate_pool(panel, y, s, cfg.significance);

  ShiftSelection out;
  out.shift = s;
  // Seed: highest-ranked candidate that yields a usable one-query model.
  while (!remaining.empty() && out.chosen_labels.empty()) {
    const std::string seed = remaining.front();
    remaining.erase(remaining.begin());
    const std::vector<std::string> one{seed};
    if (auto obj = model_objective(panel, y, s, one)) {
      out.chosen_labels = one;
      out.objective = *obj;
      out.trace.push_back({1, seed, *obj});
    }
  }
  if (out.chosen_labels.empty()) return std::nullopt;

  while (!remaining.empty()) {
    std::optional<std::size_t> best;
    double best_obj = out.objective;
    std::vector<std::string> trial = out.chosen_labels;
    trial.emplace_back();
    // Candidates are scanned in rank order; strict '>' keeps the higher rank on ties.
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      trial.back() = remaining[i];
      const auto obj = model_objective(panel, y, s, trial);
      if (obj && *obj > best_obj) {
        best_obj = *obj;
        best = i;
      }
    }
    if (!best || best_obj - out.objective <= cfg.min_improvement) break;
    out.chosen_labels.push_back(remaining[*best]);
    out.objective = best_obj;
    out.trace.push_back({out.trace.size() + 1, remaining[*best], best_obj});
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(*best));
  }
  return out;
}

SelectionResult greedy_select(const QueryPanel& panel, const WeeklySeries& y, std::span<const ShiftSpec> shifts,
                              const SelectConfig& cfg) {
  cfg.significance.validate();
  if (shifts.empty()) throw Error(ErrorCode::InvalidArgument, "no shifts to scan");
  SelectionResult result;
  const ShiftSelection* best = nullptr;
  for (const ShiftSpec s : shifts) {
    if (auto sel = greedy_select_at(panel, y, s, cfg)) result.per_shift.push_back(std::move(*sel));
  }
  for (const auto& sel : result.per_shift) {
    if (best == nullptr || sel.objective > best->objective) best = &sel;
  }
  if (best == nullptr) throw Error(ErrorCode::NoUsableQuery, "every query is NA or non-positive at every shift");
  result.chosen_labels = best->chosen_labels;
  result.best_shift = best->shift;
  result.objective = best->objective;
  result.trace = best->trace;
  return result;
}

std::vector<SweepPoint> prefix_sweep(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s,
                                     const SelectConfig& cfg) {
  const auto ranked = rank_queries(panel, y, s, cfg.significance);
  std::vector<SweepPoint> out;
  std::vector<std::string> labels;
  for (const auto& q : ranked) {
    labels.push_back(q.label);
    out.push_back({labels.size(), model_objective(panel, y, s, labels)});
  }
  return out;
}

}  // namespace flunow
