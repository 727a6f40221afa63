#pragma once

#include "flunow/panel.hpp"
#include "flunow/timeseries.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace flunow {

/// Gaussian epidemic bump over week indices (0 = first generated week).
struct EpidemicPeak {
  double center_week;
  double height;
  double width;
};

/// News-driven search surge: jumps by `magnitude` at `week`, then decays
/// exponentially with time constant `decay_weeks`.
struct MediaSpike {
  double week;
  double magnitude;
  double decay_weeks;
};

struct ScenarioConfig {
  std::uint64_t seed = 42;
  int weeks = 261;
  WeekStamp start{2009, 1};
  std::vector<EpidemicPeak> epidemic_peaks;
  /// Searches lead cases by this many weeks.
  int lead_weeks = 2;
  std::vector<MediaSpike> media_spikes;
  /// Search-attention multiplier applied once per elapsed ISO year.
  double attention_decay = 1.0;
  double noise_sd = 0.0;
  int n_signal_queries = 8;
  int n_noise_queries = 0;

  void validate() const;
};

/// Three seasons (late 2009, early 2010, early 2011) plus an April-2009
/// media spike over 2009-W01..2013-W52.
ScenarioConfig seasonal_scenario(std::uint64_t seed);

struct Scenario {
  WeeklySeries cases;
  QueryPanel panel;
};

/// Deterministic per seed. Signal queries are labelled signal_01.., noise
/// queries noise_01...
Scenario generate(const ScenarioConfig& cfg);

/// Portable draws on top of std::mt19937_64 (whose output sequence is fixed
/// by the standard): 53-bit uniforms and Box-Muller normals.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1)
  double normal();   // N(0, 1)
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; derives independent stream seeds from one seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace flunow
