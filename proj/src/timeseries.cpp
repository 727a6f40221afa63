#include "flunow/timeseries.hpp"

#include "flunow/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>

namespace flunow {

namespace {

namespace chr = std::chrono;

constexpr int kMinYear = 1;
constexpr int kMaxYear = 9999;

chr::sys_days week1_monday(int iso_year) {
  const chr::sys_days jan4{chr::year{iso_year} / chr::January / 4};
  const auto dow = chr::weekday{jan4}.iso_encoding();  // Mon=1..Sun=7
  return jan4 - chr::days{dow - 1};
}

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

int iso_weeks_in_year(int iso_year) noexcept {
  auto p = [](int y) { return (y + y / 4 - y / 100 + y / 400) % 7; };
  return (p(iso_year) == 4 || p(iso_year - 1) == 3) ? 53 : 52;
}

WeekStamp::WeekStamp(int iso_year, int iso_week) : year_(iso_year), week_(iso_week) {
  if (iso_year < kMinYear || iso_year > kMaxYear) {
    throw Error(ErrorCode::InvalidWeek, fmt::format("year {} out of range", iso_year));
  }
  if (iso_week < 1 || iso_week > iso_weeks_in_year(iso_year)) {
    throw Error(ErrorCode::InvalidWeek, fmt::format("{} has no ISO week {}", iso_year, iso_week));
  }
}

std::optional<WeekStamp> WeekStamp::try_parse(std::string_view text) noexcept {
  // Exactly YYYY-Www.
  if (text.size() != 8 || text[4] != '-' || text[5] != 'W') return std::nullopt;
  auto digits = [](std::string_view s, int& out) {
    if (!std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
  };
  int year = 0;
  int week = 0;
  if (!digits(text.substr(0, 4), year) || !digits(text.substr(6, 2), week)) return std::nullopt;
  if (year < kMinYear || week < 1 || week > iso_weeks_in_year(year)) return std::nullopt;
  return WeekStamp(year, week);
}

WeekStamp WeekStamp::parse(std::string_view text) {
  if (auto w = try_parse(text)) return *w;
  throw Error(ErrorCode::InvalidWeek, fmt::format("'{}' is not a YYYY-Www week", text));
}

std::string WeekStamp::to_string() const { return fmt::format("{:04d}-W{:02d}", year_, week_); }

long WeekStamp::ordinal() const noexcept {
  const auto monday = week1_monday(year_) + chr::days{7 * (week_ - 1)};
  // 1970-01-05 (day 4) is a Monday.
  return floor_div(monday.time_since_epoch().count() - 4, 7);
}

WeekStamp WeekStamp::from_ordinal(long ordinal) {
  const chr::sys_days monday{chr::days{ordinal * 7 + 4}};
  const chr::sys_days thursday = monday + chr::days{3};
  const int year = static_cast<int>(chr::year_month_day{thursday}.year());
  const auto week = (thursday - chr::sys_days{chr::year{year} / chr::January / 1}).count() / 7 + 1;
  return WeekStamp(year, static_cast<int>(week));
}

WeeklySeries::WeeklySeries(WeekStamp start, std::vector<double> values, std::string label)
    : start_(start), values_(std::move(values)), label_(std::move(label)) {
  if (values_.empty()) throw Error(ErrorCode::InvalidSeries, "series must hold at least one week");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::InvalidSeries, fmt::format("non-finite value at index {}", i));
    }
  }
  // Validates that the last week is representable.
  (void)end();
}

bool WeeklySeries::covers(WeekStamp w) const noexcept { return index_of(w).has_value(); }

std::optional<std::size_t> WeeklySeries::index_of(WeekStamp w) const noexcept {
  const long d = w - start_;
  if (d < 0 || d >= static_cast<long>(values_.size())) return std::nullopt;
  return static_cast<std::size_t>(d);
}

WeeklySeries WeeklySeries::sub(std::size_t first, std::size_t count) const {
  if (count == 0 || first + count > values_.size()) {
    throw Error(ErrorCode::OutOfRange, fmt::format("sub-range [{}, {}) outside series of {}", first,
                                                   first + count, values_.size()));
  }
  return {week_at(first), {values_.begin() + first, values_.begin() + first + count}, label_};
}

WeeklySeries WeeklySeries::with_label(std::string label) const { return {start_, values_, std::move(label)}; }

ShiftSpec::ShiftSpec(int weeks, int max_abs_weeks) : weeks_(weeks) {
  if (max_abs_weeks < 0 || std::abs(weeks) > max_abs_weeks) {
    throw Error(ErrorCode::InvalidShift, fmt::format("shift {} exceeds +/-{} weeks", weeks, max_abs_weeks));
  }
}

std::vector<ShiftSpec> default_shifts() {
  return {ShiftSpec(-2), ShiftSpec(-1), ShiftSpec(0), ShiftSpec(1), ShiftSpec(2)};
}

PairedWindow paired_window(const WeeklySeries& x, const WeeklySeries& y, ShiftSpec s) {
  // Search week w pairs with case week w + k.
  const long k = s.weeks();
  const long first = std::max(x.start().ordinal(), y.start().ordinal() - k);
  const long last = std::min(x.end().ordinal(), y.end().ordinal() - k);
  PairedWindow out;
  if (last < first) return out;
  const auto count = static_cast<std::size_t>(last - first + 1);
  out.search.reserve(count);
  out.cases.reserve(count);
  out.case_weeks.reserve(count);
  const auto xi = static_cast<std::size_t>(first - x.start().ordinal());
  const auto yi = static_cast<std::size_t>(first + k - y.start().ordinal());
  for (std::size_t i = 0; i < count; ++i) {
    out.search.push_back(x[xi + i]);
    out.cases.push_back(y[yi + i]);
  }
  const WeekStamp w0 = y.week_at(yi);
  for (std::size_t i = 0; i < count; ++i) out.case_weeks.push_back(w0 + static_cast<long>(i));
  return out;
}

std::pair<WeeklySeries, WeeklySeries> align(const WeeklySeries& a, const WeeklySeries& b) {
  const WeekStamp first = std::max(a.start(), b.start());
  const WeekStamp last = std::min(a.end(), b.end());
  if (last < first) {
    throw Error(ErrorCode::EmptyOverlap, fmt::format("{}..{} and {}..{} are disjoint", a.start().to_string(),
                                                     a.end().to_string(), b.start().to_string(),
                                                     b.end().to_string()));
  }
  const auto count = static_cast<std::size_t>(last - first + 1);
  return {a.sub(*a.index_of(first), count), b.sub(*b.index_of(first), count)};
}

std::vector<std::pair<double, double>> shift_pair(const WeeklySeries& x, const WeeklySeries& y, ShiftSpec s) {
  const PairedWindow window = paired_window(x, y, s);
  if (window.size() < 3) {
    throw Error(ErrorCode::InsufficientOverlap,
                fmt::format("{} pair(s) after shifting by {} week(s), need 3", window.size(), s.weeks()));
  }
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) pairs.emplace_back(window.search[i], window.cases[i]);
  return pairs;
}

WeeklySeries slice_year(const WeeklySeries& s, int iso_year) {
  std::optional<std::size_t> first;
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.week_at(i).iso_year() == iso_year) {
      if (!first) first = i;
      ++count;
    }
  }
  if (!first) {
    throw Error(ErrorCode::EmptySlice, fmt::format("no weeks of {} in {}..{}", iso_year, s.start().to_string(),
                                                   s.end().to_string()));
  }
  return s.sub(*first, count);
}

std::vector<int> covered_years(const WeeklySeries& s) {
  std::vector<int> years;
  for (int y = s.start().iso_year(); y <= s.end().iso_year(); ++y) years.push_back(y);
  return years;
}

WeeklySeries scale_0_100(const WeeklySeries& s) {
  const auto v = s.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0.0) {
      throw Error(ErrorCode::NegativeValue, fmt::format("value {} at {}", v[i], s.week_at(i).to_string()));
    }
  }
  const double peak = *std::max_element(v.begin(), v.end());
  if (peak == 0.0) return s;
  std::vector<double> scaled(v.size());
  std::transform(v.begin(), v.end(), scaled.begin(), [peak](double x) { return std::floor(100.0 * x / peak + 0.5); });
  return {s.start(), std::move(scaled), s.label()};
}

}  // namespace flunow
