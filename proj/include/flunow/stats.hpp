#pragma once

#include "flunow/error.hpp"
#include "flunow/panel.hpp"
#include "flunow/timeseries.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace flunow {

struct PearsonResult {
  double r;
  std::size_t n;
};

/// Product-moment correlation of two equal-length vectors.
/// Throws TooFewPairs (n < 3) or ZeroVariance (either side constant).
template <typename DerivedX, typename DerivedY>
PearsonResult pearson(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  static_assert(std::is_same_v<Scalar, typename DerivedY::Scalar>, "mixed scalar types");
  if (x.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "pearson: length mismatch");
  const auto n = static_cast<std::size_t>(x.size());
  if (n < 3) throw Error(ErrorCode::TooFewPairs, "pearson needs at least 3 pairs");
  if ((x.array() == x(0)).all() || (y.array() == y(0)).all()) {
    throw Error(ErrorCode::ZeroVariance, "pearson: constant input");
  }
  const auto xc = (x.array() - x.mean()).eval();
  const auto yc = (y.array() - y.mean()).eval();
  const Scalar r = (xc * yc).sum() / std::sqrt(xc.square().sum() * yc.square().sum());
  return {std::clamp(static_cast<double>(r), -1.0, 1.0), n};
}

PearsonResult pearson(std::span<const std::pair<double, double>> pairs);
PearsonResult pearson(std::span<const double> x, std::span<const double> y);

/// I_x(a, b) by Lentz's continued fraction (tolerance 1e-12, at most 300 terms).
double regularized_incomplete_beta(double a, double b, double x);

/// P(|T| >= |t|) for Student's t with `dof` degrees of freedom.
double student_t_two_sided_p(double t, int dof);

/// t > 0 with student_t_two_sided_p(t, dof) == alpha.
double student_t_critical(double alpha, int dof);

enum class NaReason { ZeroVariance, TooFewPairs, NotSignificant };

std::string_view to_string(NaReason reason) noexcept;

struct SignificanceConfig {
  double alpha = 0.05;

  void validate() const;
};

/// A correlation cell. `r`/`p_value` are NaN when they could not be computed
/// (ZeroVariance, TooFewPairs); NotSignificant cells keep their r and p.
struct CorrelationResult {
  double r = std::numeric_limits<double>::quiet_NaN();
  double p_value = std::numeric_limits<double>::quiet_NaN();
  std::size_t n = 0;
  std::optional<NaReason> na_reason;

  bool na() const noexcept { return na_reason.has_value(); }

  static CorrelationResult unavailable(NaReason reason, std::size_t n) {
    CorrelationResult out;
    out.n = n;
    out.na_reason = reason;
    return out;
  }
};

/// Pearson r plus two-sided t-test (n - 2 dof); NA-total, never throws on data.
CorrelationResult correlate_values(std::span<const double> x, std::span<const double> y,
                                   const SignificanceConfig& cfg = {});

CorrelationResult correlate(const WeeklySeries& x, const WeeklySeries& y, ShiftSpec s,
                            const SignificanceConfig& cfg = {});

struct RankedQuery {
  std::string label;
  CorrelationResult result;
};

/// Descending r, NA entries last, ties by label (byte order).
std::vector<RankedQuery> rank_results(std::vector<RankedQuery> scored);

std::vector<RankedQuery> rank_queries(const QueryPanel& panel, const WeeklySeries& y, ShiftSpec s,
                                      const SignificanceConfig& cfg = {});

}  // namespace flunow
