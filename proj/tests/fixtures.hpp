#pragma once

#include "flunow/error.hpp"
#include "flunow/panel.hpp"
#include "flunow/timeseries.hpp"

#include <doctest.h>

#include <random>
#include <string>
#include <vector>

namespace fixtures {

inline flunow::WeeklySeries series(std::vector<double> values, std::string label = "s",
                                   flunow::WeekStamp start = flunow::WeekStamp(2010, 1)) {
  return {start, std::move(values), std::move(label)};
}

inline std::vector<double> gaussian_noise(std::size_t n, std::uint64_t seed, double mean = 0.0, double sd = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(mean, sd);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

inline flunow::QueryPanel panel_of(const std::vector<std::vector<double>>& columns,
                                   flunow::WeekStamp start = flunow::WeekStamp(2010, 1)) {
  std::vector<flunow::WeeklySeries> out;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    out.emplace_back(start, columns[j], "q" + std::to_string(j + 1));
  }
  return flunow::QueryPanel(std::move(out));
}

template <typename Fn>
flunow::ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const flunow::Error& e) {
    return e.code();
  }
  FAIL("expected flunow::Error");
  return flunow::ErrorCode::InvalidArgument;
}

}  // namespace fixtures
