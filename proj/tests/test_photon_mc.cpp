#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "talbot/errors.hpp"
#include "talbot/photon_mc.hpp"
#include "talbot/propagation.hpp"

using namespace talbot;

namespace {

McRun reference_run(std::uint64_t seed, double events, double f = 0.1) {
  McRun run;
  run.seed = seed;
  run.events_per_point = events;
  run.source = ReferenceSetup::source();
  run.grating = ReferenceSetup::grating(f);
  run.scan = ReferenceSetup::detection();
  run.spectral_samples = 9;
  return run;
}

// 100 scan points over two magnified periods.
McRun hundred_point_run(std::uint64_t seed, double events) {
  McRun run = reference_run(seed, events);
  run.scan.scan_start = -720e-6;
  run.scan.scan_step = 14.4e-6;
  run.scan.scan_end = run.scan.scan_start + 99 * run.scan.scan_step;
  return run;
}

Pattern analytic_for(const McRun& run) {
  return scan(run.source, run.grating, run.scan, spectral_grid(run.source, run.spectral_samples, 3.0),
              PatternNorm::raw);
}

double chi_square(const McPattern& mc) {
  double chi2 = 0.0;
  for (std::size_t i = 0; i < mc.counts.size(); ++i) {
    const double r = static_cast<double>(mc.counts[i]) - mc.expected[i];
    chi2 += r * r / mc.expected[i];
  }
  return chi2;
}

// P(|K - mean| <= sqrt(K)) for K ~ Poisson(mean), summed exactly.
double error_bar_coverage(double mean) {
  const boost::math::poisson_distribution<double> pois(mean);
  const double spread = 12.0 * std::sqrt(mean) + 20.0;
  const auto lo = static_cast<long>(std::max(0.0, std::floor(mean - spread)));
  const auto hi = static_cast<long>(std::ceil(mean + spread));
  double p = 0.0;
  for (long k = lo; k <= hi; ++k) {
    if (std::abs(static_cast<double>(k) - mean) <= std::sqrt(static_cast<double>(k))) {
      p += boost::math::pdf(pois, static_cast<double>(k));
    }
  }
  return p;
}

}  // namespace

TEST_SUITE("photon_mc") {
  TEST_CASE("wavelength sampler") {
    SourceSpec mono = ReferenceSetup::source();
    mono.beta = 0.0;
    auto rng = stream_engine(1, 0);
    for (int i = 0; i < 10; ++i) CHECK(sample_wavelength(mono, rng) == mono.lambda0);

    const SourceSpec s = ReferenceSetup::source();
    const double sigma = s.beta / std::sqrt(2.0);
    const int n = 100000;
    double sum = 0.0;
    double sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double l = sample_wavelength(s, rng);
      sum += l;
      sum2 += l * l;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sum2 / n - mean * mean);
    CHECK(std::abs(mean - s.lambda0) < 4 * sigma / std::sqrt(static_cast<double>(n)));
    CHECK(sd == doctest::Approx(sigma).epsilon(0.03));

    SourceSpec wide{1e-9, 50e-9, std::nullopt, 1e-3};
    for (int i = 0; i < 10000; ++i) CHECK(sample_wavelength(wide, rng) > 0.0);
  }

  TEST_CASE("same seed reproduces the counts, whatever the worker count") {
    const McRun run = reference_run(42, 1000);
    const auto a = simulate_scan(run);
    const auto b = simulate_scan(run, Exec{4});
    CHECK(a.counts == b.counts);
    CHECK(a.expected == b.expected);
    CHECK(a.seed == 42);
    const auto c = simulate_scan(reference_run(43, 1000));
    CHECK(a.counts != c.counts);
    for (std::size_t i = 0; i < a.counts.size(); ++i) {
      CHECK(a.errors[i] == std::sqrt(static_cast<double>(a.counts[i])));
    }
  }

  TEST_CASE("expected counts follow the analytic pattern") {
    const McRun run = reference_run(5, 2500);
    const auto mc = simulate_scan(run);
    const auto analytic = scan(run.source, run.grating, run.scan, spectral_grid(run.source, 9, 3.0));
    REQUIRE(mc.expected.size() == analytic.size());
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      CHECK(mc.expected[i] == doctest::Approx(2500 * analytic.values[i]).epsilon(1e-12));
    }
    CHECK(*std::max_element(mc.expected.begin(), mc.expected.end()) == doctest::Approx(2500.0));
  }

  TEST_CASE("vanishing event budget gives empty detectors") {
    const auto mc = simulate_scan(reference_run(3, 1e-12));
    for (auto c : mc.counts) CHECK(c == 0);
    CHECK_THROWS_AS(simulate_scan(reference_run(3, 0.0)), DomainError);
    CHECK_THROWS_AS(simulate_scan(reference_run(3, -5.0)), DomainError);
  }

  TEST_CASE("Poisson goodness of fit") {
    const auto analytic = analytic_for(hundred_point_run(0, 1000));
    CHECK(simulate_counts(analytic, 1000, 11).counts == simulate_scan(hundred_point_run(11, 1000)).counts);
    for (std::uint64_t seed : {11u, 12u, 13u}) {
      const auto mc = simulate_counts(analytic, 1000, seed);
      REQUIRE(mc.counts.size() == 100);
      const boost::math::chi_squared_distribution<double> dist(100.0);
      const double p = boost::math::cdf(boost::math::complement(dist, chi_square(mc)));
      MESSAGE("seed " << seed << " p = " << p);
      CHECK(p > 0.01);
    }
  }

  TEST_CASE("error bars cover the expectation at the Poisson rate") {
    int covered = 0;
    double expected = 0.0;
    double variance = 0.0;
    const auto analytic = analytic_for(hundred_point_run(0, 1000));
    const auto base = simulate_counts(analytic, 1000, 0);
    std::vector<double> p(base.expected.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = error_bar_coverage(base.expected[i]);
    for (std::uint64_t seed = 100; seed < 150; ++seed) {
      const auto mc = simulate_counts(analytic, 1000, seed);
      for (std::size_t i = 0; i < mc.counts.size(); ++i) {
        covered += std::abs(static_cast<double>(mc.counts[i]) - mc.expected[i]) <= mc.errors[i];
        expected += p[i];
        variance += p[i] * (1.0 - p[i]);
      }
    }
    const double fraction = covered / 5000.0;
    MESSAGE("coverage " << fraction << " expected " << expected / 5000.0);
    CHECK(std::abs(covered - expected) < 4.0 * std::sqrt(variance));
    CHECK(fraction == doctest::Approx(0.68).epsilon(0.05));
  }

  TEST_CASE("relative scatter shrinks as one over root events") {
    const auto analytic = analytic_for(reference_run(0, 1));
    std::vector<double> rms;
    for (double events : {1e2, 1e3, 1e4}) {
      double acc = 0.0;
      int n = 0;
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto mc = simulate_counts(analytic, events, seed);
        for (std::size_t i = 0; i < mc.counts.size(); ++i) {
          const double r = (static_cast<double>(mc.counts[i]) - mc.expected[i]) / events;
          acc += r * r;
          ++n;
        }
      }
      rms.push_back(std::sqrt(acc / n));
    }
    for (std::size_t i = 1; i < rms.size(); ++i) {
      CHECK(rms[i - 1] / rms[i] == doctest::Approx(std::sqrt(10.0)).epsilon(0.15));
    }
  }

  TEST_CASE("streams are uncorrelated") {
    auto a = stream_engine(7, 0);
    auto b = stream_engine(7, 1);
    auto c = stream_engine(8, 0);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const int n = 20000;
    double ab = 0.0;
    double ac = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = u(a);
      ab += x * u(b);
      ac += x * u(c);
    }
    // Each product has variance 1/144.
    const double bound = 4.0 / 12.0 / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(ab / n) < bound);
    CHECK(std::abs(ac / n) < bound);
    CHECK(stream_engine(7, 0)() == stream_engine(7, 0)());
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  }
}
