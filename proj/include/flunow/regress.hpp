#pragma once

#include "flunow/panel.hpp"
#include "flunow/stats.hpp"
#include "flunow/timeseries.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flunow {

struct CoefficientStats {
  double estimate = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double p_value = 1.0;
};

struct LabeledCoefficient {
  std::string label;
  CoefficientStats stats;
};

/// Least-squares fit of y_{t+k} = b0 + sum_i b_i x_{i,t}.
struct ModelFit {
  CoefficientStats intercept;
  std::vector<LabeledCoefficient> coefficients;
  double r_squared = 0.0;
  double rss = 0.0;
  int residual_dof = 0;
  double alpha = 0.05;
  ShiftSpec shift;
  /// In-sample estimates, stamped with the case week they estimate.
  std::optional<WeeklySeries> fitted;

  std::vector<std::string> labels() const;
};

/// Pivot tolerance (relative to the largest pivot) below which the design is singular.
inline constexpr double kSingularPivotTolerance = 1e-10;

/// Design rows: one per search week w whose case week w + k exists.
struct DesignData {
  Eigen::MatrixXd x;  // m x (n + 1), first column all ones
  Eigen::VectorXd y;
  std::vector<WeekStamp> case_weeks;
};

DesignData build_design(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s);

/// Householder QR with column pivoting. Throws Underdetermined or SingularDesign.
ModelFit fit_design(const DesignData& design, std::span<const std::string> labels, ShiftSpec s, double alpha);

ModelFit fit_ols(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s, double alpha = 0.05);

enum class NowcastMode { FullPeriod, RollingWeekly };

std::string_view to_string(NowcastMode mode) noexcept;

/// Model estimates stamped by case week. `std::nullopt` marks weeks with no
/// estimate (rolling warmup); they are excluded from evaluation.
struct NowcastSeries {
  WeekStamp start{2009, 1};
  std::vector<std::optional<double>> values;
  NowcastMode mode = NowcastMode::FullPeriod;
  bool clamp_nonnegative = false;

  std::size_t size() const noexcept { return values.size(); }
  std::size_t estimated_count() const noexcept;
  WeekStamp week_at(std::size_t i) const { return start + static_cast<long>(i); }

  /// The estimated weeks as a series (they form one contiguous block);
  /// nullopt when nothing was estimated.
  std::optional<WeeklySeries> estimated_series(std::string label = "estimate") const;
};

/// y_hat at case week w + k for every panel week w. Throws MissingQuery.
NowcastSeries predict(const ModelFit& fit, const QueryPanel& panel, bool clamp_nonnegative = false);

/// Warmup default used by the CLI: n + 4 weeks.
std::size_t default_warmup(std::size_t n_queries) noexcept;

/// For each fitted row past `warmup`, fit on all strictly earlier rows and
/// estimate that row.
NowcastSeries rolling_weekly_fit(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s, std::size_t warmup,
                                 double alpha = 0.05, bool clamp_nonnegative = false);

/// Single fit over the full range, then predict.
/// The requested warmup, or else the first full-rank expanding window at or
/// after default_warmup(n).
std::size_t resolve_warmup(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s,
                           std::optional<std::size_t> requested = std::nullopt);

NowcastSeries full_period_nowcast(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s,
                                  double alpha = 0.05, bool clamp_nonnegative = false);

struct YearCorrelation {
  int year;
  CorrelationResult result;
};

struct Evaluation {
  CorrelationResult overall;
  std::vector<YearCorrelation> per_year;
};

/// Estimates vs y on shared, estimated weeks; per-year cells use y's ISO years.
Evaluation evaluate(const NowcastSeries& estimates, const WeeklySeries& y, const SignificanceConfig& cfg = {});

}  // namespace flunow
