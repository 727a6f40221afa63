#include "flunow/panel.hpp"

#include "flunow/error.hpp"

#include <fmt/format.h>

#include <set>

namespace flunow {

QueryPanel::QueryPanel(std::vector<WeeklySeries> series) : series_(std::move(series)) {
  if (series_.empty()) throw Error(ErrorCode::InvalidPanel, "panel needs at least one query");
  std::set<std::string_view> seen;
  for (const auto& s : series_) {
    if (s.label().empty()) throw Error(ErrorCode::InvalidLabel, "query label is empty");
    if (!seen.insert(s.label()).second) {
      throw Error(ErrorCode::InvalidPanel, fmt::format("duplicate query label '{}'", s.label()));
    }
    if (s.start() != series_.front().start() || s.size() != series_.front().size()) {
      throw Error(ErrorCode::InvalidPanel, fmt::format("query '{}' is not aligned with '{}'", s.label(),
                                                       series_.front().label()));
    }
  }
}

std::vector<std::string> QueryPanel::labels() const {
  std::vector<std::string> out;
  out.reserve(series_.size());
  for (const auto& s : series_) out.push_back(s.label());
  return out;
}

const WeeklySeries* QueryPanel::find(std::string_view label) const noexcept {
  for (const auto& s : series_) {
    if (s.label() == label) return &s;
  }
  return nullptr;
}

QueryPanel QueryPanel::select(std::span<const std::string> labels) const {
  std::vector<WeeklySeries> picked;
  picked.reserve(labels.size());
  for (const auto& label : labels) {
    const WeeklySeries* s = find(label);
    if (s == nullptr) throw Error(ErrorCode::MissingQuery, fmt::format("query '{}' not in panel", label));
    picked.push_back(*s);
  }
  return QueryPanel(std::move(picked));
}

}  // namespace flunow
