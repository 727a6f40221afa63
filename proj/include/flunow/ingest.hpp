#pragma once

#include "flunow/panel.hpp"
#include "flunow/timeseries.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace flunow {

// Interchange formats (UTF-8, comma-separated, no quoting, LF line endings):
//
//   trends panel   week,<label1>,<label2>,...   rows YYYY-Www,<int 0..100>,...
//   cases          week,cases                   rows YYYY-Www,<int >= 0>
//   lexicon        query,language,source        language en|ar; source prior|wikipedia|related
//   figure data    week,label,value             long format, sorted by (week, label)
//
// Parsers never crash on arbitrary bytes; every rejection is a flunow::Error.

/// Weeks omitted between the first and last row are filled with zero.
QueryPanel parse_trends_csv(std::string_view text);
std::string serialize_trends_csv(const QueryPanel& panel);

/// Case series must be complete: a missing week is GapInCases.
WeeklySeries parse_cases_csv(std::string_view text);
std::string serialize_cases_csv(const WeeklySeries& cases);

enum class Language { English, Arabic };
enum class QuerySource { PriorResearch, Wikipedia, RelatedSearches };

struct LexiconEntry {
  std::string query_text;  // raw UTF-8 bytes, never normalized
  Language language;
  QuerySource source;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

struct QueryLexicon {
  std::vector<LexiconEntry> entries;

  std::size_t count(Language lang) const noexcept;
  friend bool operator==(const QueryLexicon&, const QueryLexicon&) = default;
};

QueryLexicon load_lexicon(std::string_view text);
std::string serialize_lexicon(const QueryLexicon& lexicon);

std::string_view language_code(Language lang) noexcept;
std::string_view source_code(QuerySource source) noexcept;

/// Reads long-format figure data back into one series per label (label order
/// of first appearance after sorting). Every label's weeks must be contiguous.
std::vector<WeeklySeries> parse_figure_csv(std::string_view text);

bool is_valid_utf8(std::string_view text) noexcept;

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace flunow
