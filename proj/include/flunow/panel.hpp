#pragma once

#include "flunow/timeseries.hpp"

#include <span>
#include <string>
#include <vector>

namespace flunow {

/// Named, week-aligned search-volume series (the x_it of the nowcast model).
/// Labels are distinct and every series shares one start week and length.
class QueryPanel {
 public:
  explicit QueryPanel(std::vector<WeeklySeries> series);

  std::size_t size() const noexcept { return series_.size(); }
  std::size_t weeks() const noexcept { return series_.front().size(); }
  WeekStamp start() const noexcept { return series_.front().start(); }
  WeekStamp end() const { return series_.front().end(); }

  const WeeklySeries& operator[](std::size_t i) const noexcept { return series_[i]; }
  std::span<const WeeklySeries> series() const noexcept { return series_; }
  std::vector<std::string> labels() const;

  /// nullptr when absent.
  const WeeklySeries* find(std::string_view label) const noexcept;

  /// Sub-panel in the given label order; throws MissingQuery.
  QueryPanel select(std::span<const std::string> labels) const;

  friend bool operator==(const QueryPanel&, const QueryPanel&) = default;

 private:
  std::vector<WeeklySeries> series_;
};

}  // namespace flunow
