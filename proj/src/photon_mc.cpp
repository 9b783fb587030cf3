#include "talbot/photon_mc.hpp"

#include <algorithm>
#include <cmath>

#include "talbot/errors.hpp"
#include "talbot/propagation.hpp"

namespace talbot {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

McEngine stream_engine(std::uint64_t seed, std::uint64_t stream) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32)};
  return McEngine(seq);
}

void McRun::validate() const {
  if (!(events_per_point > 0.0) || !std::isfinite(events_per_point)) {
    throw DomainError("events_per_point must be positive");
  }
  source.validate();
  grating.validate();
  scan.validate();
}

double sample_wavelength(const SourceSpec& src, McEngine& rng) {
  src.validate();
  if (src.beta == 0.0) return src.lambda0;
  std::normal_distribution<double> normal(src.lambda0, src.beta / std::sqrt(2.0));
  for (;;) {
    const double lambda = normal(rng);
    if (lambda > 0.0) return lambda;
  }
}

McPattern simulate_counts(const Pattern& analytic, double events_per_point, std::uint64_t seed) {
  if (!(events_per_point > 0.0)) throw DomainError("events_per_point must be positive");
  if (analytic.values.empty()) throw DomainError("empty analytic pattern");
  const double peak = *std::max_element(analytic.values.begin(), analytic.values.end());
  if (!(peak > 0.0)) throw DomainError("analytic pattern is identically zero");

  McPattern out;
  out.positions = analytic.positions;
  out.seed = seed;
  out.meta = analytic.meta;
  const std::size_t n = analytic.size();
  out.counts.resize(n);
  out.errors.resize(n);
  out.expected.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mean = events_per_point * analytic.values[i] / peak;
    out.expected[i] = mean;
    std::int64_t c = 0;
    if (mean > 0.0) {
      auto rng = stream_engine(seed, i);
      std::poisson_distribution<std::int64_t> poisson(mean);
      c = poisson(rng);
    }
    out.counts[i] = c;
    out.errors[i] = std::sqrt(static_cast<double>(c));
  }
  return out;
}

McPattern simulate_scan(const McRun& run, const Exec& exec) {
  run.validate();
  const auto grid = spectral_grid(run.source, run.spectral_samples, run.spectral_span);
  const Pattern analytic = scan(run.source, run.grating, run.scan, grid, PatternNorm::raw, exec);
  return simulate_counts(analytic, run.events_per_point, run.seed);
}

}  // namespace talbot
