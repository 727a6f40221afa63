#include "flunow/stats.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace flunow {

namespace {

constexpr double kBetaTolerance = 1e-12;
constexpr int kBetaMaxIterations = 300;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b) (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kBetaTolerance) break;
  }
  return h;
}

PearsonResult pearson_checked(Eigen::Map<const Eigen::VectorXd> x, Eigen::Map<const Eigen::VectorXd> y) {
  return pearson(x, y);
}

}  // namespace

PearsonResult pearson(std::span<const std::pair<double, double>> pairs) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(pairs.size()));
  Eigen::VectorXd y(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    x(static_cast<Eigen::Index>(i)) = pairs[i].first;
    y(static_cast<Eigen::Index>(i)) = pairs[i].second;
  }
  return pearson(x, y);
}

PearsonResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "pearson: length mismatch");
  return pearson_checked({x.data(), static_cast<Eigen::Index>(x.size())},
                         {y.data(), static_cast<Eigen::Index>(y.size())});
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::InvalidArgument, "incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::InvalidArgument, "incomplete beta needs 0 <= x <= 1");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, int dof) {
  if (dof < 1) throw Error(ErrorCode::InvalidDof, fmt::format("dof {} < 1", dof));
  if (std::isnan(t)) throw Error(ErrorCode::InvalidArgument, "t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  const double nu = dof;
  const double p = regularized_incomplete_beta(0.5 * nu, 0.5, nu / (nu + t * t));
  return std::clamp(p, 0.0, 1.0);
}

double student_t_critical(double alpha, int dof) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  double lo = 0.0;
  double hi = 1.0;
  while (student_t_two_sided_p(hi, dof) > alpha) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (student_t_two_sided_p(mid, dof) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::string_view to_string(NaReason reason) noexcept {
  switch (reason) {
    case NaReason::ZeroVariance: return "ZeroVariance";
    case NaReason::TooFewPairs: return "TooFewPairs";
    case NaReason::NotSignificant: return "NotSignificant";
  }
  return "Unknown";
}

void SignificanceConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("alpha {} outside (0, 1)", alpha));
  }
}

CorrelationResult correlate_values(std::span<const double> x, std::span<const double> y,
                                   const SignificanceConfig& cfg) {
  cfg.validate();
  const std::size_t n = std::min(x.size(), y.size());
  PearsonResult pr{};
  try {
    pr = pearson(x.first(n), y.first(n));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ZeroVariance) return CorrelationResult::unavailable(NaReason::ZeroVariance, n);
    return CorrelationResult::unavailable(NaReason::TooFewPairs, n);
  }
  CorrelationResult out;
  out.r = pr.r;
  out.n = n;
  const double one_minus_r2 = 1.0 - pr.r * pr.r;
  if (one_minus_r2 <= 0.0) {
    out.p_value = 0.0;
  } else {
    const double t = pr.r * std::sqrt(static_cast<double>(n - 2) / one_minus_r2);
    out.p_value = student_t_two_sided_p(t, static_cast<int>(n - 2));
  }
  if (out.p_value >= cfg.alpha) out.na_reason = NaReason::NotSignificant;
  return out;
}

CorrelationResult correlate(const WeeklySeries& x, const WeeklySeries& y, ShiftSpec s,
                            const SignificanceConfig& cfg) {
  const PairedWindow window = paired_window(x, y, s);
  return correlate_values(window.search, window.cases, cfg);
}

std::vector<RankedQuery> rank_results(std::vector<RankedQuery> scored) {
  std::stable_sort(scored.begin(), scored.end(), [](const RankedQuery& a, const RankedQuery& b) {
    if (a.result.na() != b.result.na()) return !a.result.na();
    if (!a.result.na() && a.result.r != b.result.r) return a.result.r > b.result.r;
    return a.label < b.label;
  });
  return scored;
}

std::vector<RankedQuery> rank_queries(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s,
                                      const SignificanceConfig& cfg) {
  std::vector<RankedQuery> scored;
  scored.reserve(panel.size());
  for (const auto& x : panel.series()) scored.push_back({x.label(), correlate(x, y, s, cfg)});
  return rank_results(std::move(scored));
}

}  // namespace flunow
