#include "flunow/regress.hpp"

#include "flunow/error.hpp"

#include <Eigen/QR>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace flunow {

namespace {

// Shared by fitting and prediction so stored fitted values and predictions
// agree bit for bit.
template <typename Row>
double linear_response(double intercept, const Eigen::VectorXd& slopes, const Row& row) {
  double v = intercept;
  for (Eigen::Index i = 0; i < slopes.size(); ++i) v += slopes(i) * row(i);
  return v;
}

CoefficientStats coefficient(double estimate, double variance, double t_crit, int dof) {
  CoefficientStats c;
  c.estimate = estimate;
  c.std_error = std::sqrt(std::max(variance, 0.0));
  c.ci_low = estimate - t_crit * c.std_error;
  c.ci_high = estimate + t_crit * c.std_error;
  if (c.std_error > 0.0) {
    c.p_value = student_t_two_sided_p(estimate / c.std_error, dof);
  } else {
    c.p_value = estimate == 0.0 ? 1.0 : 0.0;
  }
  return c;
}

}  // namespace

std::vector<std::string> ModelFit::labels() const {
  std::vector<std::string> out;
  out.reserve(coefficients.size());
  for (const auto& c : coefficients) out.push_back(c.label);
  return out;
}

DesignData build_design(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s) {
  // Row count and case weeks depend only on the shared panel range.
  const PairedWindow first = paired_window(panel[0], y, s);
  const auto m = static_cast<Eigen::Index>(first.size());
  const auto n = static_cast<Eigen::Index>(panel.size());
  DesignData d;
  d.x.resize(m, n + 1);
  d.y.resize(m);
  d.x.col(0).setOnes();
  d.case_weeks = first.case_weeks;
  for (Eigen::Index r = 0; r < m; ++r) d.y(r) = first.cases[static_cast<std::size_t>(r)];
  for (Eigen::Index j = 0; j < n; ++j) {
    const PairedWindow w = j == 0 ? first : paired_window(panel[static_cast<std::size_t>(j)], y, s);
    for (Eigen::Index r = 0; r < m; ++r) d.x(r, j + 1) = w.search[static_cast<std::size_t>(r)];
  }
  return d;
}

ModelFit fit_design(const DesignData& design, std::span<const std::string> labels, ShiftSpec s, double alpha) {
  SignificanceConfig{alpha}.validate();
  const Eigen::Index m = design.x.rows();
  const Eigen::Index p = design.x.cols();
  if (static_cast<std::size_t>(p - 1) != labels.size()) {
    throw Error(ErrorCode::InvalidArgument, "label count does not match design columns");
  }
  if (m < p + 1) {
    throw Error(ErrorCode::Underdetermined,
                fmt::format("{} fitted week(s) for {} quer(ies); need at least {}", m, p - 1, p + 1));
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m, p);
  qr.setThreshold(kSingularPivotTolerance);
  qr.compute(design.x);
  if (qr.rank() < p) {
    throw Error(ErrorCode::SingularDesign, fmt::format("design rank {} < {} columns", qr.rank(), p));
  }
  const Eigen::VectorXd beta = qr.solve(design.y);
  const double b0 = beta(0);
  const Eigen::VectorXd slopes = beta.tail(p - 1);

  std::vector<double> fitted(static_cast<std::size_t>(m));
  double rss = 0.0;
  for (Eigen::Index r = 0; r < m; ++r) {
    const double f = linear_response(b0, slopes, design.x.row(r).tail(p - 1));
    fitted[static_cast<std::size_t>(r)] = f;
    const double e = design.y(r) - f;
    rss += e * e;
  }

  const int dof = static_cast<int>(m - p);
  const double sigma2 = rss / dof;
  const Eigen::MatrixXd r_upper = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r_upper.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd cov_permuted = r_inv * r_inv.transpose();
  const Eigen::MatrixXd cov = qr.colsPermutation() * cov_permuted * qr.colsPermutation().transpose();

  const double t_crit = student_t_critical(alpha, dof);
  ModelFit fit;
  fit.alpha = alpha;
  fit.shift = s;
  fit.residual_dof = dof;
  fit.rss = rss;
  fit.intercept = coefficient(b0, sigma2 * cov(0, 0), t_crit, dof);
  for (Eigen::Index j = 1; j < p; ++j) {
    fit.coefficients.push_back(
        {labels[static_cast<std::size_t>(j - 1)], coefficient(beta(j), sigma2 * cov(j, j), t_crit, dof)});
  }
  const double tss = (design.y.array() - design.y.mean()).square().sum();
  fit.r_squared = tss > 0.0 ? std::clamp(1.0 - rss / tss, 0.0, 1.0) : 0.0;
  fit.fitted.emplace(design.case_weeks.front(), std::move(fitted), "fitted");
  return fit;
}

ModelFit fit_ols(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s, double alpha) {
  const auto labels = panel.labels();
  return fit_design(build_design(panel, y, s), labels, s, alpha);
}

std::string_view to_string(NowcastMode mode) noexcept {
  return mode == NowcastMode::FullPeriod ? "full" : "rolling";
}

std::size_t NowcastSeries::estimated_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](auto v) { return v.has_value(); }));
}

std::optional<WeeklySeries> NowcastSeries::estimated_series(std::string label) const {
  auto first = std::find_if(values.begin(), values.end(), [](auto v) { return v.has_value(); });
  if (first == values.end()) return std::nullopt;
  auto last = std::find_if(first, values.end(), [](auto v) { return !v.has_value(); });
  if (std::any_of(last, values.end(), [](auto v) { return v.has_value(); })) {
    throw Error(ErrorCode::InvalidSeries, "estimated weeks are not contiguous");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(last - first));
  for (auto it = first; it != last; ++it) out.push_back(**it);
  return WeeklySeries(week_at(static_cast<std::size_t>(first - values.begin())), std::move(out), std::move(label));
}

NowcastSeries predict(const ModelFit& fit, const QueryPanel& panel, bool clamp_nonnegative) {
  const auto labels = fit.labels();
  const QueryPanel used = panel.select(labels);
  Eigen::VectorXd slopes(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) slopes(static_cast<Eigen::Index>(i)) = fit.coefficients[i].stats.estimate;

  NowcastSeries out;
  out.start = panel.start() + fit.shift.weeks();
  out.mode = NowcastMode::FullPeriod;
  out.clamp_nonnegative = clamp_nonnegative;
  out.values.reserve(panel.weeks());
  Eigen::VectorXd row(slopes.size());
  for (std::size_t t = 0; t < panel.weeks(); ++t) {
    for (std::size_t i = 0; i < used.size(); ++i) row(static_cast<Eigen::Index>(i)) = used[i][t];
    double v = linear_response(fit.intercept.estimate, slopes, row);
    if (clamp_nonnegative) v = std::max(v, 0.0);
    out.values.emplace_back(v);
  }
  return out;
}

std::size_t default_warmup(std::size_t n_queries) noexcept { return n_queries + 4; }

NowcastSeries rolling_weekly_fit(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s, std::size_t warmup,
                                 double alpha, bool clamp_nonnegative) {
  const std::size_t n = panel.size();
  if (warmup < n + 2) {
    throw Error(ErrorCode::Underdetermined, fmt::format("warmup {} < {} (queries + 2)", warmup, n + 2));
  }
  const DesignData design = build_design(panel, y, s);
  const auto m = static_cast<std::size_t>(design.x.rows());
  if (m == 0) throw Error(ErrorCode::Underdetermined, "no overlapping weeks after shifting");
  const auto labels = panel.labels();

  NowcastSeries out;
  out.start = design.case_weeks.front();
  out.mode = NowcastMode::RollingWeekly;
  out.clamp_nonnegative = clamp_nonnegative;
  out.values.assign(m, std::nullopt);
  for (std::size_t t = warmup; t < m; ++t) {
    const auto rows = static_cast<Eigen::Index>(t);
    DesignData window{design.x.topRows(rows), design.y.head(rows),
                      {design.case_weeks.begin(), design.case_weeks.begin() + rows}};
    std::optional<ModelFit> attempt;
    try {
      attempt = fit_design(window, labels, s, alpha);
    } catch (const Error& e) {
      if (t != warmup || e.code() != ErrorCode::SingularDesign) throw;
      throw Error(ErrorCode::Underdetermined,
                  fmt::format("warmup window of {} weeks is rank deficient ({})", warmup, e.detail()));
    }
    const ModelFit& fit = *attempt;
    Eigen::VectorXd slopes(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) slopes(static_cast<Eigen::Index>(i)) = fit.coefficients[i].stats.estimate;
    double v = linear_response(fit.intercept.estimate, slopes, design.x.row(rows).tail(static_cast<Eigen::Index>(n)));
    if (clamp_nonnegative) v = std::max(v, 0.0);
    out.values[t] = v;
  }
  return out;
}

std::size_t resolve_warmup(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s,
                           std::optional<std::size_t> requested) {
  if (requested) return *requested;
  const std::size_t floor = default_warmup(panel.size());
  const DesignData design = build_design(panel, y, s);
  const auto m = static_cast<std::size_t>(design.x.rows());
  // Early weeks of real panels are often all zero; wait for a full-rank window.
  for (std::size_t t = floor; t < m; ++t) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.x.topRows(static_cast<Eigen::Index>(t)));
    qr.setThreshold(kSingularPivotTolerance);
    if (qr.rank() == design.x.cols()) return t;
  }
  return floor;
}

NowcastSeries full_period_nowcast(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s, double alpha,
                                  bool clamp_nonnegative) {
  return predict(fit_ols(panel, y, s, alpha), panel, clamp_nonnegative);
}

Evaluation evaluate(const NowcastSeries& estimates, const WeeklySeries& y, const SignificanceConfig& cfg) {
  std::vector<double> est;
  std::vector<double> act;
  std::vector<int> years;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    if (!estimates.values[i]) continue;
    const WeekStamp w = estimates.week_at(i);
    const auto yi = y.index_of(w);
    if (!yi) continue;
    est.push_back(*estimates.values[i]);
    act.push_back(y[*yi]);
    years.push_back(w.iso_year());
  }
  Evaluation out;
  out.overall = correlate_values(est, act, cfg);
  for (int year : covered_years(y)) {
    std::vector<double> e;
    std::vector<double> a;
    for (std::size_t i = 0; i < years.size(); ++i) {
      if (years[i] != year) continue;
      e.push_back(est[i]);
      a.push_back(act[i]);
    }
    out.per_year.push_back({year, correlate_values(e, a, cfg)});
  }
  return out;
}

}  // namespace flunow
