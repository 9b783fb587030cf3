#pragma once

// Photon-counting Monte Carlo on top of the analytic count rate.
//
// Each scan point gets its own generator, seeded from (run seed, point index)
// through SplitMix64, so the output depends only on the seed and the run
// description, never on the evaluation order or worker count.

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "talbot/model.hpp"
#include "talbot/parallel.hpp"

namespace talbot {

using McEngine = std::mt19937_64;

/// Recorded in output metadata for reproducibility.
inline constexpr std::string_view kRngIdentifier =
    "mt19937_64/splitmix64-streams (libstdc++ normal/poisson distributions)";

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Independent engine for stream `stream` of a run seeded with `seed`.
McEngine stream_engine(std::uint64_t seed, std::uint64_t stream);

struct McRun {
  std::uint64_t seed = 0;
  double events_per_point = 1000.0;  ///< expected count at the pattern maximum
  SourceSpec source;
  GratingSpec grating;
  DetectionSpec scan;
  int spectral_samples = 41;
  double spectral_span = 3.0;

  void validate() const;
};

struct McPattern {
  std::vector<double> positions;
  std::vector<std::int64_t> counts;
  std::vector<double> errors;    ///< sqrt(count)
  std::vector<double> expected;  ///< Poisson means
  std::uint64_t seed = 0;
  PatternMeta meta;
};

/// Normal draw with mean lambda0 and standard deviation beta / sqrt(2),
/// rejecting non-positive wavelengths. Returns lambda0 when beta = 0.
double sample_wavelength(const SourceSpec& src, McEngine& rng);

/// Poisson counts with means events_per_point * P(X) / max P over the scan.
McPattern simulate_scan(const McRun& run, const Exec& exec = {});

/// Same, reusing a precomputed analytic pattern (any normalization) as P(X).
McPattern simulate_counts(const Pattern& analytic, double events_per_point, std::uint64_t seed);

}  // namespace talbot
