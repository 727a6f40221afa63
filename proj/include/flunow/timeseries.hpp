#pragma once

#include <Eigen/Core>

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace flunow {

/// ISO-8601 week (year, week 1..52/53). Ordered lexicographically.
class WeekStamp {
 public:
  WeekStamp(int iso_year, int iso_week);

  int iso_year() const noexcept { return year_; }
  int iso_week() const noexcept { return week_; }

  /// Parses "YYYY-Www" (e.g. "2009-W01"); throws InvalidWeek.
  static WeekStamp parse(std::string_view text);
  static std::optional<WeekStamp> try_parse(std::string_view text) noexcept;
  std::string to_string() const;

  /// Week number counted from a fixed Monday; differences are week distances.
  long ordinal() const noexcept;
  static WeekStamp from_ordinal(long ordinal);

  friend auto operator<=>(const WeekStamp&, const WeekStamp&) = default;
  friend bool operator==(const WeekStamp&, const WeekStamp&) = default;

 private:
  int year_;
  int week_;
};

int iso_weeks_in_year(int iso_year) noexcept;

inline WeekStamp operator+(WeekStamp w, long weeks) { return WeekStamp::from_ordinal(w.ordinal() + weeks); }
inline WeekStamp operator-(WeekStamp w, long weeks) { return WeekStamp::from_ordinal(w.ordinal() - weeks); }
inline long operator-(WeekStamp a, WeekStamp b) noexcept { return a.ordinal() - b.ordinal(); }

/// Contiguous weekly series. Immutable; values are finite.
class WeeklySeries {
 public:
  WeeklySeries(WeekStamp start, std::vector<double> values, std::string label = {});

  WeekStamp start() const noexcept { return start_; }
  WeekStamp end() const { return start_ + static_cast<long>(values_.size()) - 1; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::string& label() const noexcept { return label_; }

  std::span<const double> values() const noexcept { return values_; }
  Eigen::Map<const Eigen::VectorXd> vector() const noexcept {
    return {values_.data(), static_cast<Eigen::Index>(values_.size())};
  }

  double operator[](std::size_t i) const noexcept { return values_[i]; }
  WeekStamp week_at(std::size_t i) const { return start_ + static_cast<long>(i); }
  bool covers(WeekStamp w) const noexcept;
  std::optional<std::size_t> index_of(WeekStamp w) const noexcept;

  /// Contiguous sub-range [first, first + count).
  WeeklySeries sub(std::size_t first, std::size_t count) const;
  WeeklySeries with_label(std::string label) const;

  friend bool operator==(const WeeklySeries&, const WeeklySeries&) = default;

 private:
  WeekStamp start_;
  std::vector<double> values_;
  std::string label_;
};

/// Signed week offset. +k ("k-week lagging") pairs search week t with case
/// week t+k; -k ("k-week preceding") pairs search week t with case week t-k.
class ShiftSpec {
 public:
  static constexpr int kDefaultMaxWeeks = 2;

  explicit ShiftSpec(int weeks = 0, int max_abs_weeks = kDefaultMaxWeeks);

  int weeks() const noexcept { return weeks_; }

  friend auto operator<=>(const ShiftSpec&, const ShiftSpec&) = default;

 private:
  int weeks_;
};

/// The default scan used throughout: -2, -1, 0, +1, +2.
std::vector<ShiftSpec> default_shifts();

/// Search values paired with shifted case values, plus the case-side week of
/// every pair (used to assign pairs to years).
struct PairedWindow {
  std::vector<double> search;
  std::vector<double> cases;
  std::vector<WeekStamp> case_weeks;

  std::size_t size() const noexcept { return search.size(); }
};

/// All (x_t, y_{t+k}) pairs without any minimum-size check.
PairedWindow paired_window(const WeeklySeries& x, const WeeklySeries& y, ShiftSpec s);

std::pair<WeeklySeries, WeeklySeries> align(const WeeklySeries& a, const WeeklySeries& b);

std::vector<std::pair<double, double>> shift_pair(const WeeklySeries& x, const WeeklySeries& y, ShiftSpec s);

WeeklySeries slice_year(const WeeklySeries& s, int iso_year);

/// Distinct ISO years touched by the series, ascending.
std::vector<int> covered_years(const WeeklySeries& s);

/// Google-Trends style normalization: v -> round-half-up(100 v / max).
WeeklySeries scale_0_100(const WeeklySeries& s);

}  // namespace flunow
