#include "fixtures.hpp"
#include "flunow/stats.hpp"
#include "flunow/synth.hpp"

#include <doctest.h>

using namespace flunow;
using fixtures::code_of;

namespace {

// Five equal yearly peaks with no media spikes and no noise.
ScenarioConfig clean_config() {
  ScenarioConfig cfg;
  cfg.seed = 3;
  cfg.weeks = 261;
  cfg.start = WeekStamp(2009, 1);
  cfg.epidemic_peaks = {{26, 300, 3}, {80, 300, 3}, {132, 300, 3}, {184, 300, 3}, {236, 300, 3}};
  cfg.media_spikes = {};
  cfg.noise_sd = 0.0;
  cfg.n_signal_queries = 4;
  cfg.n_noise_queries = 0;
  return cfg;
}

double year_max(const WeeklySeries& s, int year) {
  const auto part = slice_year(s, year);
  return *std::max_element(part.values().begin(), part.values().end());
}

}  // namespace

TEST_CASE("portable generator") {
  // The standard fixes the 10000th output of a default-seeded mt19937_64.
  PortableRng rng(5489u);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.bits();
  CHECK(v == 9981545732273789042ULL);

  PortableRng a(mix_seed(1, 0)), b(mix_seed(1, 1));
  CHECK(a.bits() != b.bits());
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));

  PortableRng u(99);
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    const double z = u.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::fabs(sum / 20000) < 0.03);
  CHECK(std::fabs(sq / 20000 - 1.0) < 0.05);
}

TEST_CASE("generate is deterministic") {
  const auto a = generate(seasonal_scenario(42));
  const auto b = generate(seasonal_scenario(42));
  CHECK(a.cases == b.cases);
  CHECK(a.panel == b.panel);
  CHECK_FALSE(generate(seasonal_scenario(43)).panel == a.panel);
}

TEST_CASE("scenario shape") {
  const auto sc = generate(seasonal_scenario(42));
  CHECK(sc.cases.size() == 261);
  CHECK(sc.cases.start() == WeekStamp(2009, 1));
  CHECK(sc.cases.end() == WeekStamp(2013, 52));
  CHECK(sc.panel.size() == 12);
  CHECK(sc.panel[0].label() == "signal_01");
  CHECK(sc.panel[8].label() == "noise_01");
  for (double c : sc.cases.values()) {
    CHECK(c >= 0.0);
    CHECK(c == std::floor(c));
  }
  for (const auto& q : sc.panel.series()) {
    CHECK(*std::max_element(q.values().begin(), q.values().end()) == 100.0);
    CHECK(*std::min_element(q.values().begin(), q.values().end()) >= 0.0);
  }
}

TEST_CASE("noiseless queries lead the cases by the configured lead") {
  const auto sc = generate(clean_config());
  for (const auto& q : sc.panel.series()) {
    const auto at_lead = correlate(q, sc.cases, ShiftSpec(2));
    CHECK(at_lead.r >= 0.999);
    CHECK(correlate(q, sc.cases, ShiftSpec(0)).r < at_lead.r);
  }
}

TEST_CASE("best shift follows the lead") {
  for (int lead = 0; lead <= 3; ++lead) {
    auto cfg = clean_config();
    cfg.lead_weeks = lead;
    const auto sc = generate(cfg);
    for (const auto& q : sc.panel.series()) {
      int best = 0;
      double best_r = -2.0;
      for (const auto s : default_shifts()) {
        const double r = correlate(q, sc.cases, s).r;
        if (r > best_r) {
          best_r = r;
          best = s.weeks();
        }
      }
      CHECK(best == std::min(lead, 2));
    }
  }
}

TEST_CASE("attention decay shrinks later years") {
  auto cfg = clean_config();
  cfg.attention_decay = 0.5;
  const auto sc = generate(cfg);
  for (const auto& q : sc.panel.series()) {
    CHECK(year_max(q, 2013) < 0.1 * year_max(q, 2009));
  }
  // Cases are unaffected.
  CHECK(year_max(sc.cases, 2013) == doctest::Approx(year_max(sc.cases, 2009)).epsilon(0.01));
}

TEST_CASE("noise queries are unrelated to cases") {
  const auto sc = generate(seasonal_scenario(42));
  for (std::size_t j = 8; j < 12; ++j) CHECK(std::fabs(correlate(sc.panel[j], sc.cases, ShiftSpec(0)).r) < 0.3);
}

TEST_CASE("invalid configurations") {
  auto bad = [](auto edit) {
    auto cfg = seasonal_scenario(1);
    edit(cfg);
    return code_of([&] { generate(cfg); });
  };
  CHECK(bad([](ScenarioConfig& c) { c.weeks = 10; }) == ErrorCode::InvalidConfig);
  CHECK(bad([](ScenarioConfig& c) { c.attention_decay = 0.0; }) == ErrorCode::InvalidConfig);
  CHECK(bad([](ScenarioConfig& c) { c.attention_decay = 1.5; }) == ErrorCode::InvalidConfig);
  CHECK(bad([](ScenarioConfig& c) { c.noise_sd = -1.0; }) == ErrorCode::InvalidConfig);
  CHECK(bad([](ScenarioConfig& c) { c.epidemic_peaks[0].width = 0.0; }) == ErrorCode::InvalidConfig);
  CHECK(bad([](ScenarioConfig& c) { c.media_spikes[0].decay_weeks = -2.0; }) == ErrorCode::InvalidConfig);
  CHECK(bad([](ScenarioConfig& c) {
          c.n_signal_queries = 0;
          c.n_noise_queries = 0;
        }) == ErrorCode::InvalidConfig);
}
