#include "flunow/synth.hpp"

#include "flunow/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace flunow {

namespace {

constexpr std::uint64_t kCaseStream = 0;
constexpr std::uint64_t kSignalStreamBase = 0x1000;
constexpr std::uint64_t kNoiseStreamBase = 0x2000;

double bump_sum(const std::vector<EpidemicPeak>& peaks, double t) {
  double v = 0.0;
  for (const auto& p : peaks) {
    const double z = (t - p.center_week) / p.width;
    v += p.height * std::exp(-0.5 * z * z);
  }
  return v;
}

double spike_sum(const std::vector<MediaSpike>& spikes, double t) {
  double v = 0.0;
  for (const auto& s : spikes) {
    if (t >= s.week) v += s.magnitude * std::exp(-(t - s.week) / s.decay_weeks);
  }
  return v;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double PortableRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double PortableRng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (weeks < 20) fail(fmt::format("weeks {} < 20", weeks));
  if (std::abs(lead_weeks) >= weeks) fail("lead_weeks must be shorter than the scenario");
  for (const auto& p : epidemic_peaks) {
    if (!(p.width > 0.0)) fail("epidemic width must be > 0");
    if (!(p.height >= 0.0) || !std::isfinite(p.height) || !std::isfinite(p.center_week)) {
      fail("epidemic height must be finite and >= 0");
    }
  }
  for (const auto& s : media_spikes) {
    if (!(s.magnitude >= 0.0) || !std::isfinite(s.magnitude) || !std::isfinite(s.week)) {
      fail("media spike magnitude must be finite and >= 0");
    }
    if (!(s.decay_weeks > 0.0)) fail("media spike decay_weeks must be > 0");
  }
  if (!(attention_decay > 0.0 && attention_decay <= 1.0)) fail("attention_decay must lie in (0, 1]");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) fail("noise_sd must be finite and >= 0");
  if (n_signal_queries < 0 || n_noise_queries < 0 || n_signal_queries + n_noise_queries < 1) {
    fail("need at least one query");
  }
  if (n_signal_queries > 99 || n_noise_queries > 99) fail("at most 99 queries of each kind");
  (void)(start + static_cast<long>(weeks - 1));
}

ScenarioConfig seasonal_scenario(std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.seed = seed;
  cfg.weeks = 261;
  cfg.start = WeekStamp(2009, 1);
  cfg.epidemic_peaks = {{47.0, 400.0, 2.5}, {56.0, 250.0, 2.0}, {112.0, 300.0, 3.0}};
  cfg.media_spikes = {{16.0, 150.0, 2.0}};
  cfg.lead_weeks = 2;
  cfg.attention_decay = 1.0;
  cfg.noise_sd = 1.0;
  cfg.n_signal_queries = 8;
  cfg.n_noise_queries = 4;
  return cfg;
}

Scenario generate(const ScenarioConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.weeks);

  std::vector<double> cases(n);
  PortableRng case_rng(mix_seed(cfg.seed, kCaseStream));
  for (std::size_t t = 0; t < n; ++t) {
    const double level = bump_sum(cfg.epidemic_peaks, static_cast<double>(t));
    const double noisy = level + cfg.noise_sd * std::sqrt(level + 1.0) * case_rng.normal();
    cases[t] = std::max(0.0, std::round(noisy));
  }

  std::vector<double> attention(n);
  for (std::size_t t = 0; t < n; ++t) {
    const int years_elapsed = (cfg.start + static_cast<long>(t)).iso_year() - cfg.start.iso_year();
    attention[t] = std::pow(cfg.attention_decay, years_elapsed);
  }

  std::vector<WeeklySeries> queries;
  for (int q = 0; q < cfg.n_signal_queries; ++q) {
    PortableRng rng(mix_seed(cfg.seed, kSignalStreamBase + static_cast<std::uint64_t>(q)));
    const double scale = 0.5 + rng.uniform();
    std::vector<double> raw(n);
    for (std::size_t t = 0; t < n; ++t) {
      const double ahead = static_cast<double>(t) + cfg.lead_weeks;
      const double clean =
          scale * attention[t] * (bump_sum(cfg.epidemic_peaks, ahead) + spike_sum(cfg.media_spikes, static_cast<double>(t)));
      raw[t] = std::max(0.0, clean + cfg.noise_sd * std::sqrt(clean + 1.0) * rng.normal());
    }
    queries.push_back(scale_0_100(WeeklySeries(cfg.start, std::move(raw), fmt::format("signal_{:02d}", q + 1))));
  }
  for (int q = 0; q < cfg.n_noise_queries; ++q) {
    PortableRng rng(mix_seed(cfg.seed, kNoiseStreamBase + static_cast<std::uint64_t>(q)));
    std::vector<double> raw(n);
    for (std::size_t t = 0; t < n; ++t) raw[t] = std::max(0.0, 50.0 + 15.0 * rng.normal());
    queries.push_back(scale_0_100(WeeklySeries(cfg.start, std::move(raw), fmt::format("noise_{:02d}", q + 1))));
  }

  return {WeeklySeries(cfg.start, std::move(cases), "cases"), QueryPanel(std::move(queries))};
}

}  // namespace flunow
