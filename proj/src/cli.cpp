#include "flunow/cli.hpp"

#include "flunow/error.hpp"
#include "flunow/ingest.hpp"
#include "flunow/regress.hpp"
#include "flunow/report.hpp"
#include "flunow/select.hpp"
#include "flunow/stats.hpp"
#include "flunow/synth.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <ostream>
#include <set>

namespace flunow::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string cases;
  std::string panel;
  std::string lexicon;
  std::string queries;
  int shift = 0;
  std::string shifts = "-2:2";
  double alpha = 0.05;
  std::string mode = "full";
  std::optional<std::size_t> warmup;
  bool clamp = false;
  std::string out;
  std::string json_out;
  std::string sweep_out;
  std::string table_out;

  // synth
  std::uint64_t seed = 42;
  int weeks = 261;
  int lead = 2;
  double noise_sd = 1.0;
  double decay = 1.0;
  int signal_queries = 8;
  int noise_queries = 4;
  std::vector<std::string> peaks;
  std::vector<std::string> spikes;
  std::string cases_out;
  std::string panel_out;
};

struct Inputs {
  WeeklySeries cases;
  QueryPanel panel;
  std::optional<QueryLexicon> lexicon;
};

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = text.find(sep, pos);
    parts.emplace_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) return parts;
    pos = next + 1;
  }
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw CLI::ValidationError(std::string(what), fmt::format("'{}' is not a number", text));
  }
  return v;
}

ShiftSpec checked_shift(int weeks) {
  if (weeks < -ShiftSpec::kDefaultMaxWeeks || weeks > ShiftSpec::kDefaultMaxWeeks) {
    throw CLI::ValidationError("--shift", fmt::format("{} outside -2..2", weeks));
  }
  return ShiftSpec(weeks);
}

/// "-2:2" or "-2,0,2".
std::vector<ShiftSpec> parse_shifts(std::string_view text) {
  std::vector<ShiftSpec> out;
  const auto colon = text.find(':', 1);
  if (colon != std::string_view::npos) {
    const int lo = parse_number<int>(text.substr(0, colon), "--shifts");
    const int hi = parse_number<int>(text.substr(colon + 1), "--shifts");
    if (lo > hi) throw CLI::ValidationError("--shifts", "range start exceeds end");
    for (int k = lo; k <= hi; ++k) out.push_back(checked_shift(k));
  } else {
    for (const auto& part : split(text, ',')) out.push_back(checked_shift(parse_number<int>(part, "--shifts")));
  }
  if (out.empty()) throw CLI::ValidationError("--shifts", "no shifts given");
  return out;
}

std::vector<double> parse_triple(std::string_view text, std::string_view what) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw CLI::ValidationError(std::string(what), fmt::format("'{}' is not a:b:c", text));
  std::vector<double> v;
  for (const auto& p : parts) v.push_back(parse_number<double>(p, what));
  return v;
}

Inputs load_inputs(const Options& o, bool need_panel = true) {
  WeeklySeries cases = parse_cases_csv(read_file(o.cases));
  if (!need_panel && o.panel.empty()) return {cases, QueryPanel({cases.with_label("cases")}), std::nullopt};
  QueryPanel panel = parse_trends_csv(read_file(o.panel));
  std::optional<QueryLexicon> lexicon;
  if (!o.lexicon.empty()) {
    lexicon = load_lexicon(read_file(o.lexicon));
    std::set<std::string_view> known;
    for (const auto& e : lexicon->entries) known.insert(e.query_text);
    std::vector<std::string> keep;
    for (const auto& label : panel.labels()) {
      if (known.count(label) != 0) keep.push_back(label);
    }
    if (keep.empty()) throw Error(ErrorCode::NoUsableQuery, "no panel query is listed in the lexicon", o.lexicon);
    panel = panel.select(keep);
  }
  return {std::move(cases), std::move(panel), std::move(lexicon)};
}

std::string language_tag(const Inputs& in, const std::string& label) {
  if (!in.lexicon) return "-";
  std::string tags;
  for (const auto& e : in.lexicon->entries) {
    if (e.query_text == label) tags += (tags.empty() ? "" : "/") + std::string(language_code(e.language));
  }
  return tags;
}

std::vector<std::string> chosen_queries(const Options& o, const Inputs& in, ShiftSpec s) {
  if (!o.queries.empty()) return split(o.queries, ',');
  const auto sel = greedy_select_at(in.panel, in.cases, s, {{o.alpha}});
  if (!sel) throw Error(ErrorCode::NoUsableQuery, fmt::format("no usable query at shift {}", s.weeks()));
  return sel->chosen_labels;
}

void maybe_write(const std::string& path, std::string_view contents) {
  if (!path.empty()) write_file(path, contents);
}

std::string range_text(const WeeklySeries& s) {
  return fmt::format("{}..{}", s.start().to_string(), s.end().to_string());
}

int cmd_correlate(const Options& o, std::ostream& out) {
  const Inputs in = load_inputs(o);
  const SignificanceConfig cfg{o.alpha};
  const ShiftSpec s = checked_shift(o.shift);
  const auto ranked = rank_queries(in.panel, in.cases, s, cfg);
  fmt::print(out, "correlate: {} queries vs cases {}, {}, alpha {}\n", in.panel.size(), range_text(in.cases),
             shift_label(s), o.alpha);
  fmt::print(out, "{:>4}  {:>6}  {:>8}  {:>4}  {:<10}  {:<4}  {}\n", "rank", "r", "p", "n", "strength", "lang", "query");
  std::size_t rank = 0;
  for (const auto& q : ranked) {
    const auto& r = q.result;
    const std::string strength =
        r.na() ? fmt::format("NA:{}", to_string(*r.na_reason)) : std::string(to_string(classify_strength(r.r)));
    fmt::print(out, "{:>4}  {:>6}  {:>8}  {:>4}  {:<10}  {:<4}  {}\n", ++rank, format_number(r.r),
               std::isfinite(r.p_value) ? fmt::format("{:.2e}", r.p_value) : "NA", r.n, strength,
               language_tag(in, q.label), q.label);
  }
  const CorrelationTable table = table_overall_annual(in.panel, in.cases, cfg, s);
  maybe_write(o.out, to_csv(table));
  maybe_write(o.json_out, to_json(table));
  return 0;
}

int cmd_shift_scan(const Options& o, std::ostream& out) {
  const Inputs in = load_inputs(o);
  const SignificanceConfig cfg{o.alpha};
  const auto shifts = parse_shifts(o.shifts);
  const CorrelationTable table = table_shift_scan(in.panel, in.cases, shifts, cfg);
  fmt::print(out, "shift-scan: {} queries, {} shifts, {} rows\n", in.panel.size(), shifts.size(), table.rows.size());
  // Overall block only; the file carries the per-year blocks.
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    const auto& row = table.rows[i];
    std::vector<std::string> cells;
    for (const auto& c : row.cells) cells.push_back(format_cell(c));
    fmt::print(out, "{:<18} {}\n", row.keys[1], fmt::join(cells, " "));
  }
  maybe_write(o.out, to_csv(table));
  maybe_write(o.json_out, to_json(table));
  return 0;
}

json steps_json(const std::vector<SelectionStep>& trace) {
  json steps = json::array();
  for (const auto& st : trace) steps.push_back({{"step", st.step}, {"label", st.label_added}, {"objective", st.objective_after}});
  return steps;
}

int cmd_select(const Options& o, std::ostream& out) {
  const Inputs in = load_inputs(o);
  const SignificanceConfig cfg{o.alpha};
  const auto shifts = parse_shifts(o.shifts);
  const SelectionResult sel = greedy_select(in.panel, in.cases, shifts, {cfg});
  fmt::print(out, "select: best shift {} (objective {}), {} queries\n", shift_label(sel.best_shift),
             format_number(sel.objective), sel.chosen_labels.size());
  for (const auto& per : sel.per_shift) {
    fmt::print(out, "  {:<18} objective {}  [{}]\n", shift_label(per.shift), format_number(per.objective),
               fmt::join(per.chosen_labels, ", "));
  }
  for (const auto& st : sel.trace) {
    fmt::print(out, "  step {:>2}: +{} -> {}\n", st.step, st.label_added, format_number(st.objective_after));
  }
  maybe_write(o.out, trace_csv(sel));
  if (!o.json_out.empty()) {
    json per_shift = json::array();
    for (const auto& per : sel.per_shift) {
      per_shift.push_back({{"shift_weeks", per.shift.weeks()},
                           {"objective", per.objective},
                           {"chosen", per.chosen_labels},
                           {"trace", steps_json(per.trace)}});
    }
    json doc = {{"best_shift_weeks", sel.best_shift.weeks()},
                {"objective", sel.objective},
                {"chosen", sel.chosen_labels},
                {"trace", steps_json(sel.trace)},
                {"per_shift", per_shift}};
    write_file(o.json_out, doc.dump(2) + "\n");
  }
  if (!o.sweep_out.empty()) write_file(o.sweep_out, sweep_csv(prefix_sweep(in.panel, in.cases, sel.best_shift, {cfg})));
  if (!o.table_out.empty()) {
    write_file(o.table_out, to_csv(table_model_by_shift(in.panel, in.cases, sel.chosen_labels, shifts, cfg)));
  }
  return 0;
}

int cmd_fit(const Options& o, std::ostream& out) {
  const Inputs in = load_inputs(o);
  const ShiftSpec s = checked_shift(o.shift);
  const auto labels = chosen_queries(o, in, s);
  const ModelFit fit = fit_ols(in.panel.select(labels), in.cases, s, o.alpha);
  fmt::print(out, "fit: {} queries, {}, R^2 {}, residual dof {}\n", labels.size(), shift_label(s),
             format_number(fit.r_squared), fit.residual_dof);
  fmt::print(out, "  {:<24} {:>10} {:>10} {:>22} {:>10}\n", "term", "estimate", "std.err", "CI", "p");
  auto row = [&out](const std::string& term, const CoefficientStats& c) {
    fmt::print(out, "  {:<24} {:>10.4f} {:>10.4f} [{:>9.4f}, {:>9.4f}] {:>10.2e}\n", term, c.estimate, c.std_error,
               c.ci_low, c.ci_high, c.p_value);
  };
  row("intercept", fit.intercept);
  for (const auto& c : fit.coefficients) row(c.label, c.stats);
  maybe_write(o.out, fit_csv(fit));
  maybe_write(o.json_out, fit_json(fit));
  return 0;
}

int cmd_nowcast(const Options& o, std::ostream& out) {
  const Inputs in = load_inputs(o);
  const SignificanceConfig cfg{o.alpha};
  const ShiftSpec s = checked_shift(o.shift);
  const auto labels = chosen_queries(o, in, s);
  const QueryPanel used = in.panel.select(labels);
  const NowcastMode mode = o.mode == "rolling" ? NowcastMode::RollingWeekly : NowcastMode::FullPeriod;
  const std::size_t warmup = resolve_warmup(used, in.cases, s, o.warmup);
  const NowcastSeries est = mode == NowcastMode::FullPeriod
                                ? full_period_nowcast(used, in.cases, s, o.alpha, o.clamp)
                                : rolling_weekly_fit(used, in.cases, s, warmup, o.alpha, o.clamp);
  const Evaluation ev = evaluate(est, in.cases, cfg);
  fmt::print(out, "nowcast: mode {}, {}, {} queries [{}], {} estimated weeks\n", to_string(mode), shift_label(s),
             labels.size(), fmt::join(labels, ", "), est.estimated_count());
  fmt::print(out, "  overall r {} (n {})\n", format_cell(ev.overall), ev.overall.n);
  for (const auto& yc : ev.per_year) fmt::print(out, "  {} r {} (n {})\n", yc.year, format_cell(yc.result), yc.result.n);

  std::vector<WeeklySeries> fig{in.cases.with_label("actual")};
  if (auto series = est.estimated_series("estimate")) fig.push_back(*series);
  maybe_write(o.out, figure_data(fig));
  if (!o.table_out.empty()) {
    const auto shifts = parse_shifts(o.shifts);
    const ModelTableOptions opts{mode, o.warmup, o.clamp};
    write_file(o.table_out, to_csv(table_model_by_shift(in.panel, in.cases, labels, shifts, cfg, opts)));
  }
  if (!o.json_out.empty()) {
    auto cell = [](const CorrelationResult& c) {
      return json{{"value", std::isfinite(c.r) ? json(c.r) : json(nullptr)},
                  {"p", std::isfinite(c.p_value) ? json(c.p_value) : json(nullptr)},
                  {"n", c.n},
                  {"na_reason", c.na_reason ? json(std::string(to_string(*c.na_reason))) : json(nullptr)}};
    };
    json years = json::object();
    for (const auto& yc : ev.per_year) years[std::to_string(yc.year)] = cell(yc.result);
    json doc = {{"mode", std::string(to_string(mode))},
                {"shift_weeks", s.weeks()},
                {"queries", labels},
                {"clamp_nonnegative", o.clamp},
                {"overall", cell(ev.overall)},
                {"per_year", years}};
    write_file(o.json_out, doc.dump(2) + "\n");
  }
  return 0;
}

int cmd_synth(const Options& o, std::ostream& out) {
  ScenarioConfig cfg = seasonal_scenario(o.seed);
  cfg.weeks = o.weeks;
  cfg.lead_weeks = o.lead;
  cfg.noise_sd = o.noise_sd;
  cfg.attention_decay = o.decay;
  cfg.n_signal_queries = o.signal_queries;
  cfg.n_noise_queries = o.noise_queries;
  if (!o.peaks.empty() || !o.spikes.empty()) {
    cfg.epidemic_peaks.clear();
    cfg.media_spikes.clear();
    for (const auto& p : o.peaks) {
      const auto v = parse_triple(p, "--peak");
      cfg.epidemic_peaks.push_back({v[0], v[1], v[2]});
    }
    for (const auto& p : o.spikes) {
      const auto v = parse_triple(p, "--spike");
      cfg.media_spikes.push_back({v[0], v[1], v[2]});
    }
  }
  const Scenario sc = generate(cfg);
  write_file(o.cases_out, serialize_cases_csv(sc.cases));
  write_file(o.panel_out, serialize_trends_csv(sc.panel));
  fmt::print(out, "synth: seed {}, {} weeks ({}), {} signal + {} noise queries, lead {}, noise_sd {}, decay {}\n",
             cfg.seed, cfg.weeks, range_text(sc.cases), cfg.n_signal_queries, cfg.n_noise_queries, cfg.lead_weeks,
             cfg.noise_sd, cfg.attention_decay);
  return 0;
}

int cmd_report_fig(const Options& o, std::ostream& out) {
  const Inputs in = load_inputs(o, false);
  std::vector<WeeklySeries> fig{in.cases};
  if (!o.panel.empty()) {
    const QueryPanel used = o.queries.empty() ? in.panel : in.panel.select(split(o.queries, ','));
    for (const auto& s : used.series()) fig.push_back(s);
  }
  const std::string data = figure_data(fig);
  maybe_write(o.out, data);
  fmt::print(out, "report-fig: {} series, {} rows\n", fig.size(), std::count(data.begin(), data.end(), '\n') - 1);
  return 0;
}

}  // namespace

int run(int argc, const char* const argv[], std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Search-query influenza nowcasting: correlation screening, greedy query selection, "
               "least-squares nowcast model and report tables.",
               "flunow"};
  app.require_subcommand(1);

  auto add_data = [&o](CLI::App* sub, bool panel_required) {
    sub->add_option("--cases", o.cases, "Weekly case CSV (week,cases)")->required();
    auto* panel = sub->add_option("--panel", o.panel, "Search-volume panel CSV (week,<label>,...)");
    if (panel_required) panel->required();
    sub->add_option("--lexicon", o.lexicon, "Query lexicon CSV; restricts the panel to listed queries");
    sub->add_option("--alpha", o.alpha, "Significance level")->capture_default_str()->check(CLI::Range(1e-12, 1.0 - 1e-12));
  };
  auto add_shift = [&o](CLI::App* sub) {
    sub->add_option("--shift", o.shift, "Case shift in weeks: +k lagging, -k preceding")
        ->capture_default_str()
        ->check(CLI::Range(-2, 2));
  };
  auto add_shifts = [&o](CLI::App* sub) {
    sub->add_option("--shifts", o.shifts, "Shift range a:b or list a,b,c")->capture_default_str();
  };

  auto* correlate = app.add_subcommand("correlate", "Per-query correlation, overall and per year");
  add_data(correlate, true);
  add_shift(correlate);
  correlate->add_option("--out", o.out, "Table CSV");
  correlate->add_option("--json", o.json_out, "JSON sidecar with p-values and NA reasons");

  auto* scan = app.add_subcommand("shift-scan", "Correlation under each case shift, overall and per year");
  add_data(scan, true);
  add_shifts(scan);
  scan->add_option("--out", o.out, "Table CSV");
  scan->add_option("--json", o.json_out, "JSON sidecar");

  auto* select = app.add_subcommand("select", "Greedy query selection across shifts");
  add_data(select, true);
  add_shifts(select);
  select->add_option("--out", o.out, "Selection trace CSV");
  select->add_option("--json", o.json_out, "Selection JSON (per-shift traces)");
  select->add_option("--sweep-out", o.sweep_out, "Top-N sweep CSV at the best shift");
  select->add_option("--table-out", o.table_out, "Model correlation by shift CSV");

  auto* fit = app.add_subcommand("fit", "Least-squares model with coefficient statistics");
  add_data(fit, true);
  add_shift(fit);
  fit->add_option("--queries", o.queries, "Comma-separated queries (default: greedy selection at --shift)");
  fit->add_option("--out", o.out, "Coefficient CSV");
  fit->add_option("--json", o.json_out, "Coefficient JSON");

  auto* nowcast = app.add_subcommand("nowcast", "Model estimates (full-period or weekly rolling refit)");
  add_data(nowcast, true);
  add_shift(nowcast);
  add_shifts(nowcast);
  nowcast->add_option("--queries", o.queries, "Comma-separated queries (default: greedy selection at --shift)");
  nowcast->add_option("--mode", o.mode, "full | rolling")->capture_default_str()->check(CLI::IsMember({"full", "rolling"}));
  nowcast->add_option("--warmup", o.warmup, "Rolling warmup weeks (default: first full-rank window, at least queries + 4)");
  nowcast->add_flag("--clamp", o.clamp, "Clamp negative estimates to zero");
  nowcast->add_option("--out", o.out, "Figure data CSV (actual and estimate)");
  nowcast->add_option("--table-out", o.table_out, "Model correlation by shift CSV");
  nowcast->add_option("--json", o.json_out, "Evaluation JSON");

  auto* synth = app.add_subcommand("synth", "Write a seeded synthetic scenario as CSV fixtures");
  synth->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  synth->add_option("--weeks", o.weeks, "Number of weeks")->capture_default_str();
  synth->add_option("--lead", o.lead, "Weeks by which searches lead cases")->capture_default_str();
  synth->add_option("--noise-sd", o.noise_sd, "Noise scale")->capture_default_str();
  synth->add_option("--decay", o.decay, "Per-year attention multiplier in (0, 1]")->capture_default_str();
  synth->add_option("--signal-queries", o.signal_queries, "Signal query count")->capture_default_str();
  synth->add_option("--noise-queries", o.noise_queries, "Pure-noise query count")->capture_default_str();
  synth->add_option("--peak", o.peaks, "Epidemic bump center:height:width (repeatable)");
  synth->add_option("--spike", o.spikes, "Media spike week:magnitude:decay (repeatable)");
  synth->add_option("--cases-out", o.cases_out, "Case CSV path")->required();
  synth->add_option("--panel-out", o.panel_out, "Panel CSV path")->required();

  auto* fig = app.add_subcommand("report-fig", "Long-format figure data for cases and queries");
  add_data(fig, false);
  fig->add_option("--queries", o.queries, "Comma-separated subset of panel queries");
  fig->add_option("--out", o.out, "Figure data CSV");

  auto usage = [&app, &err](const std::string& message) {
    err << "usage error: " << message << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return 2;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    return usage(e.what());
  }

  try {
    if (correlate->parsed()) return cmd_correlate(o, out);
    if (scan->parsed()) return cmd_shift_scan(o, out);
    if (select->parsed()) return cmd_select(o, out);
    if (fit->parsed()) return cmd_fit(o, out);
    if (nowcast->parsed()) return cmd_nowcast(o, out);
    if (synth->parsed()) return cmd_synth(o, out);
    if (fig->parsed()) return cmd_report_fig(o, out);
  } catch (const CLI::ValidationError& e) {
    return usage(e.what());
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return usage("no subcommand");
}

}  // namespace flunow::cli
