#include "flunow/ingest.hpp"

#include "flunow/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace flunow {

namespace {

struct Line {
  std::size_t number;  // 1-based
  std::string_view text;
};

std::string where(std::size_t line) { return fmt::format("line {}", line); }

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  std::size_t number = 1;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    lines.push_back({number++, text.substr(pos, end - pos)});
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

bool has_control_chars(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x20 || c == 0x7f; });
}

std::optional<long long> parse_int(std::string_view field) {
  if (field.empty()) return std::nullopt;
  long long v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) return std::nullopt;
  return v;
}

std::vector<Line> checked_lines(std::string_view text) {
  if (!is_valid_utf8(text)) throw Error(ErrorCode::InvalidUtf8, "input is not valid UTF-8");
  auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorCode::MalformedHeader, "empty input", where(1));
  return lines;
}

WeekStamp parse_week_field(std::string_view field, std::size_t line) {
  if (auto w = WeekStamp::try_parse(field)) return *w;
  throw Error(ErrorCode::MalformedRow, fmt::format("bad week '{}'", field.substr(0, 16)), where(line));
}

void require_integral(double v, double lo, double hi, ErrorCode code, std::string_view what) {
  if (!(v >= lo && v <= hi) || std::floor(v) != v) {
    throw Error(code, fmt::format("{} value {} is not an integer in [{}, {}]", what, v, lo, hi));
  }
}

}  // namespace

bool is_valid_utf8(std::string_view text) noexcept {
  const auto* s = reinterpret_cast<const unsigned char*>(text.data());
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    const unsigned char c = s[i];
    if (c < 0x80) {
      ++i;
      continue;
    }
    std::size_t len = 0;
    unsigned int cp = 0;
    if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t k = 1; k < len; ++k) {
      if ((s[i + k] & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (s[i + k] & 0x3F);
    }
    static constexpr unsigned int kMinForLength[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMinForLength[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += len;
  }
  return true;
}

QueryPanel parse_trends_csv(std::string_view text) {
  const auto lines = checked_lines(text);
  const auto header = split_fields(lines.front().text);
  if (header.size() < 2 || header.front() != "week") {
    throw Error(ErrorCode::MalformedHeader, "expected 'week,<label>,...'", where(1));
  }
  std::set<std::string_view> seen;
  for (std::size_t j = 1; j < header.size(); ++j) {
    if (header[j].empty() || has_control_chars(header[j])) {
      throw Error(ErrorCode::MalformedHeader, fmt::format("bad label in column {}", j + 1), where(1));
    }
    if (!seen.insert(header[j]).second) {
      throw Error(ErrorCode::MalformedHeader, fmt::format("duplicate label in column {}", j + 1), where(1));
    }
  }
  const std::size_t n = header.size() - 1;
  if (lines.size() < 2) throw Error(ErrorCode::MalformedRow, "no data rows", where(2));

  std::vector<std::vector<double>> columns(n);
  std::optional<WeekStamp> start;
  std::optional<WeekStamp> previous;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& line = lines[li];
    const auto fields = split_fields(line.text);
    if (fields.size() != n + 1) {
      throw Error(ErrorCode::MalformedRow, fmt::format("{} field(s), expected {}", fields.size(), n + 1),
                  where(line.number));
    }
    const WeekStamp week = parse_week_field(fields[0], line.number);
    if (previous && week <= *previous) {
      throw Error(ErrorCode::NonContiguousAfterFill,
                  fmt::format("week {} does not follow {}", week.to_string(), previous->to_string()), where(line.number));
    }
    if (previous) {
      // Google Trends omits all-zero weeks; restore them.
      for (long gap = week - *previous - 1; gap > 0; --gap) {
        for (auto& col : columns) col.push_back(0.0);
      }
    } else {
      start = week;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const auto v = parse_int(fields[j + 1]);
      if (!v) {
        throw Error(ErrorCode::MalformedRow, fmt::format("non-integer value in column {}", j + 2), where(line.number));
      }
      if (*v < 0 || *v > 100) {
        throw Error(ErrorCode::ValueOutOfRange, fmt::format("value {} in column {} outside 0..100", *v, j + 2),
                    where(line.number));
      }
      columns[j].push_back(static_cast<double>(*v));
    }
    previous = week;
  }

  std::vector<WeeklySeries> series;
  series.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    series.emplace_back(*start, std::move(columns[j]), std::string(header[j + 1]));
  }
  return QueryPanel(std::move(series));
}

std::string serialize_trends_csv(const QueryPanel& panel) {
  std::string out = "week";
  for (const auto& s : panel.series()) {
    if (s.label().find(',') != std::string::npos || has_control_chars(s.label())) {
      throw Error(ErrorCode::InvalidLabel, fmt::format("label '{}' cannot be written unquoted", s.label()));
    }
    out += ',';
    out += s.label();
  }
  out += '\n';
  for (std::size_t t = 0; t < panel.weeks(); ++t) {
    out += (panel.start() + static_cast<long>(t)).to_string();
    for (const auto& s : panel.series()) {
      require_integral(s[t], 0.0, 100.0, ErrorCode::ValueOutOfRange, "search volume");
      fmt::format_to(std::back_inserter(out), ",{}", static_cast<long long>(s[t]));
    }
    out += '\n';
  }
  return out;
}

WeeklySeries parse_cases_csv(std::string_view text) {
  const auto lines = checked_lines(text);
  if (lines.front().text != "week,cases") throw Error(ErrorCode::MalformedHeader, "expected 'week,cases'", where(1));
  if (lines.size() < 2) throw Error(ErrorCode::MalformedRow, "no data rows", where(2));
  std::optional<WeekStamp> start;
  std::optional<WeekStamp> previous;
  std::vector<double> values;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& line = lines[li];
    const auto fields = split_fields(line.text);
    if (fields.size() != 2) {
      throw Error(ErrorCode::MalformedRow, fmt::format("{} field(s), expected 2", fields.size()), where(line.number));
    }
    const WeekStamp week = parse_week_field(fields[0], line.number);
    if (previous) {
      if (week <= *previous) {
        throw Error(ErrorCode::MalformedRow,
                    fmt::format("week {} does not follow {}", week.to_string(), previous->to_string()),
                    where(line.number));
      }
      if (week - *previous != 1) {
        throw Error(ErrorCode::GapInCases,
                    fmt::format("missing week(s) between {} and {}", previous->to_string(), week.to_string()),
                    where(line.number));
      }
    } else {
      start = week;
    }
    const auto v = parse_int(fields[1]);
    if (!v) throw Error(ErrorCode::MalformedRow, "non-integer case count", where(line.number));
    if (*v < 0) throw Error(ErrorCode::NegativeCount, fmt::format("count {}", *v), where(line.number));
    values.push_back(static_cast<double>(*v));
    previous = week;
  }
  return WeeklySeries(*start, std::move(values), "cases");
}

std::string serialize_cases_csv(const WeeklySeries& cases) {
  std::string out = "week,cases\n";
  for (std::size_t t = 0; t < cases.size(); ++t) {
    require_integral(cases[t], 0.0, 9007199254740992.0, ErrorCode::NegativeCount, "case");
    fmt::format_to(std::back_inserter(out), "{},{}\n", cases.week_at(t).to_string(),
                   static_cast<long long>(cases[t]));
  }
  return out;
}

std::size_t QueryLexicon::count(Language lang) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [lang](const auto& e) { return e.language == lang; }));
}

std::string_view language_code(Language lang) noexcept { return lang == Language::English ? "en" : "ar"; }

std::string_view source_code(QuerySource source) noexcept {
  switch (source) {
    case QuerySource::PriorResearch: return "prior";
    case QuerySource::Wikipedia: return "wikipedia";
    case QuerySource::RelatedSearches: return "related";
  }
  return "prior";
}

QueryLexicon load_lexicon(std::string_view text) {
  const auto lines = checked_lines(text);
  if (lines.front().text != "query,language,source") {
    throw Error(ErrorCode::MalformedHeader, "expected 'query,language,source'", where(1));
  }
  QueryLexicon lexicon;
  std::set<std::pair<std::string_view, Language>> seen;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& line = lines[li];
    const auto fields = split_fields(line.text);
    if (fields.size() != 3) {
      throw Error(ErrorCode::MalformedRow, fmt::format("{} field(s), expected 3", fields.size()), where(line.number));
    }
    if (fields[0].empty()) throw Error(ErrorCode::EmptyQuery, "query text is empty", where(line.number));
    if (has_control_chars(fields[0])) throw Error(ErrorCode::MalformedRow, "control character in query", where(line.number));
    Language lang;
    if (fields[1] == "en") {
      lang = Language::English;
    } else if (fields[1] == "ar") {
      lang = Language::Arabic;
    } else {
      throw Error(ErrorCode::MalformedRow, "language must be en or ar", where(line.number));
    }
    QuerySource source;
    if (fields[2] == "prior") {
      source = QuerySource::PriorResearch;
    } else if (fields[2] == "wikipedia") {
      source = QuerySource::Wikipedia;
    } else if (fields[2] == "related") {
      source = QuerySource::RelatedSearches;
    } else {
      throw Error(ErrorCode::MalformedRow, "source must be prior, wikipedia or related", where(line.number));
    }
    if (!seen.insert({fields[0], lang}).second) {
      throw Error(ErrorCode::DuplicateEntry, fmt::format("'{}' ({}) listed twice", fields[0], fields[1]),
                  where(line.number));
    }
    lexicon.entries.push_back({std::string(fields[0]), lang, source});
  }
  return lexicon;
}

std::string serialize_lexicon(const QueryLexicon& lexicon) {
  std::string out = "query,language,source\n";
  for (const auto& e : lexicon.entries) {
    if (e.query_text.empty()) throw Error(ErrorCode::EmptyQuery, "query text is empty");
    if (e.query_text.find(',') != std::string::npos || has_control_chars(e.query_text)) {
      throw Error(ErrorCode::InvalidLabel, fmt::format("query '{}' cannot be written unquoted", e.query_text));
    }
    fmt::format_to(std::back_inserter(out), "{},{},{}\n", e.query_text, language_code(e.language),
                   source_code(e.source));
  }
  return out;
}

std::vector<WeeklySeries> parse_figure_csv(std::string_view text) {
  const auto lines = checked_lines(text);
  if (lines.front().text != "week,label,value") {
    throw Error(ErrorCode::MalformedHeader, "expected 'week,label,value'", where(1));
  }
  struct Points {
    WeekStamp start;
    WeekStamp last;
    std::vector<double> values;
  };
  std::map<std::string, Points, std::less<>> by_label;
  std::optional<std::pair<WeekStamp, std::string>> previous;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& line = lines[li];
    const auto fields = split_fields(line.text);
    if (fields.size() != 3) {
      throw Error(ErrorCode::MalformedRow, fmt::format("{} field(s), expected 3", fields.size()), where(line.number));
    }
    const WeekStamp week = parse_week_field(fields[0], line.number);
    if (fields[1].empty() || has_control_chars(fields[1])) {
      throw Error(ErrorCode::InvalidLabel, "bad label", where(line.number));
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), v);
    if (fields[2].empty() || ec != std::errc{} || ptr != fields[2].data() + fields[2].size() || !std::isfinite(v)) {
      throw Error(ErrorCode::MalformedRow, "bad value", where(line.number));
    }
    std::pair<WeekStamp, std::string> key{week, std::string(fields[1])};
    if (previous && !(*previous < key)) {
      throw Error(ErrorCode::MalformedRow, "rows not sorted by (week, label)", where(line.number));
    }
    auto it = by_label.find(fields[1]);
    if (it == by_label.end()) {
      by_label.emplace(std::string(fields[1]), Points{week, week, {v}});
    } else {
      if (week - it->second.last != 1) {
        throw Error(ErrorCode::NonContiguousAfterFill, fmt::format("gap in '{}'", fields[1]), where(line.number));
      }
      it->second.last = week;
      it->second.values.push_back(v);
    }
    previous = std::move(key);
  }
  if (by_label.empty()) throw Error(ErrorCode::MalformedRow, "no data rows", where(2));
  std::vector<WeeklySeries> out;
  for (auto& [label, pts] : by_label) out.emplace_back(pts.start, std::move(pts.values), label);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open for reading", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open for writing", path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed", path);
}

}  // namespace flunow
