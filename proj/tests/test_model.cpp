#include <doctest.h>

#include <cmath>
#include <random>

#include "talbot/errors.hpp"
#include "talbot/model.hpp"

using namespace talbot;

namespace {

// Independent inverse of the half-weight condition exp{-(w/2)^2 / beta^2} = 1/2.
double beta_by_bisection(double fwhm) {
  double lo = 0.0;
  double hi = 10.0 * fwhm;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double w = std::exp(-(fwhm / 2) * (fwhm / 2) / (mid * mid));
    (w < 0.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("talbot_length") {
    CHECK(talbot_length(360e-6, 810e-9) == doctest::Approx(0.160).epsilon(1e-15));
    CHECK(talbot_length(5e-6, 5e-6) == doctest::Approx(5e-6).epsilon(1e-15));
    CHECK(talbot_length(720e-6, 810e-9) == doctest::Approx(0.640).epsilon(1e-15));
    CHECK_THROWS_AS(talbot_length(0.0, 810e-9), DomainError);
    CHECK_THROWS_AS(talbot_length(360e-6, -1.0), DomainError);
  }

  TEST_CASE("talbot_length scale invariance under (d, lambda) -> (cd, c^2 lambda)") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> c(0.01, 100.0);
    for (int i = 0; i < 200; ++i) {
      const double k = c(rng);
      CHECK(talbot_length(k * 360e-6, k * k * 810e-9) == doctest::Approx(0.16).epsilon(1e-13));
    }
  }

  TEST_CASE("effective_distance") {
    CHECK(effective_distance(0.16, std::nullopt) == 0.16);
    const double z0 = 0.160 * 0.174 / (0.174 - 0.160);
    CHECK(z0 == doctest::Approx(1.9885714285714));
    CHECK(effective_distance(0.174, z0) == doctest::Approx(0.160).epsilon(1e-13));
    CHECK(effective_distance(0.174, 1.9886) == doctest::Approx(0.160).epsilon(1e-4));
    CHECK(effective_distance(0.3, 0.3) == doctest::Approx(0.15).epsilon(1e-15));
    CHECK_THROWS_AS(effective_distance(0.1, 0.0), DomainError);
    CHECK_THROWS_AS(effective_distance(-0.1, std::nullopt), DomainError);
  }

  TEST_CASE("source_distance_for inverts effective_distance") {
    CHECK(source_distance_for(0.174, 0.160) == doctest::Approx(0.160 * 0.174 / 0.014));
    CHECK(effective_distance(0.2, source_distance_for(0.2, 0.13)) == doctest::Approx(0.13).epsilon(1e-14));
    CHECK_THROWS_AS(source_distance_for(0.1, 0.2), DomainError);
  }

  TEST_CASE("effective distance below both distances; magnification tends to 1") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(1e-3, 10.0);
    for (int i = 0; i < 500; ++i) {
      const double z = u(rng);
      const double z0 = u(rng);
      CHECK(effective_distance(z, z0) < std::min(z, z0));
    }
    double prev = magnification(0.16, 0.01);
    for (double z0 = 0.02; z0 < 1e6; z0 *= 1.7) {
      const double m = magnification(0.16, z0);
      CHECK(m < prev);
      CHECK(m > 1.0);
      prev = m;
    }
    CHECK(prev - 1.0 < 1e-6);
  }

  TEST_CASE("magnification") {
    CHECK(magnification(0.3, std::nullopt) == 1.0);
    CHECK(magnification(0.160, 1.9886) == doctest::Approx(1.0 + 0.160 / 1.9886).epsilon(1e-15));
    CHECK(magnification(0.160, 1.9886) == doctest::Approx(1.0805).epsilon(1e-4));
    CHECK(magnification(0.16, 0.16) == 2.0);
  }

  TEST_CASE("beta_from_fwhm") {
    CHECK(beta_from_fwhm(50e-9) == doctest::Approx(beta_by_bisection(50e-9)).epsilon(1e-12));
    CHECK(beta_from_fwhm(50e-9) == doctest::Approx(30.028e-9).epsilon(1e-4));
    CHECK(beta_from_fwhm(0.0) == 0.0);
    CHECK(beta_from_fwhm(2.0 * std::sqrt(std::log(2.0)) * 1e-9) == doctest::Approx(1e-9).epsilon(1e-15));
    CHECK_THROWS_AS(beta_from_fwhm(-1e-9), DomainError);
  }

  TEST_CASE("spectral_grid") {
    SourceSpec mono;
    auto g = spectral_grid(mono, 41, 3.0);
    REQUIRE(g.size() == 1);
    CHECK(g[0].lambda == mono.lambda0);
    CHECK(g[0].weight == 1.0);

    SourceSpec broad;
    broad.beta = 30e-9;
    g = spectral_grid(broad, 1, 3.0);
    REQUIRE(g.size() == 1);
    CHECK(g[0].weight == 1.0);

    g = spectral_grid(broad, 41, 3.0);
    REQUIRE(g.size() == 41);
    double total = 0.0;
    for (const auto& s : g) total += s.weight;
    CHECK(std::abs(total - 1.0) < 1e-12);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(g[i].weight == doctest::Approx(g[g.size() - 1 - i].weight).epsilon(1e-14));
      CHECK(g[i].lambda - broad.lambda0 ==
            doctest::Approx(broad.lambda0 - g[g.size() - 1 - i].lambda).epsilon(1e-9));
    }
    CHECK(g.front().lambda == doctest::Approx(broad.lambda0 - 90e-9));
    CHECK(g[20].lambda == broad.lambda0);
    CHECK_THROWS_AS(spectral_grid(broad, 40, 3.0), DomainError);
    CHECK_THROWS_AS(spectral_grid(broad, 41, 0.0), DomainError);
  }

  TEST_CASE("spectral_grid clips non-positive wavelengths and renormalizes") {
    SourceSpec s;
    s.lambda0 = 1e-9;
    s.beta = 1e-9;
    const auto g = spectral_grid(s, 21, 3.0);
    CHECK(g.size() < 21);
    double total = 0.0;
    for (const auto& e : g) {
      CHECK(e.lambda > 0.0);
      total += e.weight;
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
  }

  TEST_CASE("spectral weights always sum to one") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> beta(1e-10, 2e-7);
    std::uniform_int_distribution<int> half(0, 60);
    std::uniform_real_distribution<double> span(0.5, 6.0);
    for (int i = 0; i < 200; ++i) {
      SourceSpec s;
      s.beta = beta(rng);
      double total = 0.0;
      for (const auto& e : spectral_grid(s, 2 * half(rng) + 1, span(rng))) total += e.weight;
      CHECK(std::abs(total - 1.0) < 1e-12);
    }
  }

  TEST_CASE("spec validation") {
    SourceSpec s;
    s.beta = -1.0;
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = {};
    s.z0 = 0.0;
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = {};
    s.delta = 0.0;
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = {};
    s.z0 = 2.0;
    s.delta = 1e-3;
    CHECK(s.divergence() == doctest::Approx(0.5e-3));

    GratingSpec g;
    g.f = 0.0;
    CHECK_THROWS_AS(g.validate(), DomainError);
    g.f = 1.0000001;
    CHECK_THROWS_AS(g.validate(), DomainError);
    g.f = 1.0;
    CHECK_NOTHROW(g.validate());
    CHECK(GratingSpec::default_trunc(0.1) == 80);
    CHECK(GratingSpec::default_trunc(0.5) == 50);
    CHECK(GratingSpec::default_trunc(0.03) == 267);

    DetectionSpec d;
    d.scan_end = d.scan_start;
    CHECK_THROWS_AS(d.validate(), DomainError);
    d = {};
    d.slit_width = 0.0;
    CHECK_THROWS_AS(d.validate(), DomainError);
  }

  TEST_CASE("scan positions stop at or before scan_end") {
    DetectionSpec d;
    d.scan_start = 0.0;
    d.scan_end = 100e-6;
    d.scan_step = 12e-6;
    const auto xs = d.positions();
    REQUIRE(xs.size() == 9);
    CHECK(xs.back() == doctest::Approx(96e-6));
    d.scan_end = 96e-6;
    CHECK(d.positions().size() == 9);
  }

  TEST_CASE("reference setup") {
    CHECK(ReferenceSetup::z0() == doctest::Approx(1.98857142857).epsilon(1e-10));
    const auto s = ReferenceSetup::source();
    CHECK(s.divergence() == doctest::Approx(0.5e-3));
    CHECK(s.beta == doctest::Approx(beta_from_fwhm(50e-9)));
    CHECK(effective_distance(0.174, s.z0) == doctest::Approx(0.16).epsilon(1e-13));
  }
}
