#include <doctest.h>

#include <cmath>
#include <vector>

#include "talbot/errors.hpp"
#include "talbot/grating.hpp"

using namespace talbot;

namespace {

// Partial Fourier sum evaluated independently in long double.
long double partial_sum(long double x, long double d, long double f, int N) {
  const long double pi = 3.141592653589793238462643383279502884L;
  long double s = f;
  for (int n = 1; n <= N; ++n) s += 2.0L * std::sin(n * pi * f) / (n * pi) * std::cos(2.0L * pi * n * x / d);
  return s;
}

double l2_gap(const GratingSpec& g) {
  constexpr int samples = 20000;
  double acc = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = -0.5 * g.d + (i + 0.5) * g.d / samples;
    const double e = truncated_transmission(x, g) - binary_transmission(x, g);
    acc += e * e;
  }
  return acc * g.d / samples;
}

}  // namespace

TEST_SUITE("grating") {
  TEST_CASE("fourier coefficients") {
    CHECK(fourier_coefficient(0, 0.37) == 0.37);
    CHECK(fourier_coefficient(1, 0.5) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
    CHECK(std::abs(fourier_coefficient(2, 0.5)) < 1e-16);
    CHECK_THROWS_AS(fourier_coefficient(1, 0.0), DomainError);
    CHECK_THROWS_AS(fourier_coefficient(1, 1.5), DomainError);
    for (double f : {0.1, 0.23, 0.5, 0.77, 1.0}) {
      for (int n = 1; n < 40; ++n) CHECK(fourier_coefficient(n, f) == fourier_coefficient(-n, f));
    }
  }

  TEST_CASE("Parseval bound is monotone in N") {
    for (double f : {0.1, 0.3, 0.5, 0.9}) {
      double sum = f * f;
      double prev = sum;
      for (int n = 1; n <= 2000; ++n) {
        const double a = fourier_coefficient(n, f);
        sum += 2.0 * a * a;
        CHECK(sum >= prev);
        CHECK(sum <= f + 1e-12);
        prev = sum;
      }
      CHECK(f - sum < 1e-3);
    }
  }

  TEST_CASE("binary transmission") {
    const GratingSpec g{360e-6, 0.1, 50};
    CHECK(binary_transmission(0.0, g) == 1);
    CHECK(binary_transmission(100e-6, g) == 0);
    CHECK(binary_transmission(-18e-6, g) == 1);  // closed edge
    CHECK(binary_transmission(18e-6, g) == 0);   // open edge
    CHECK(binary_transmission(17.9e-6, g) == 1);
    for (double x = -1e-3; x < 1e-3; x += 7.3e-6) {
      CHECK(binary_transmission(x + g.d, g) == binary_transmission(x, g));
      if (std::abs(std::abs(x) - 18e-6) > 1e-9) CHECK(binary_transmission(-x, g) == binary_transmission(x, g));
    }
    CHECK(binary_transmission(0.5 * g.d, GratingSpec{360e-6, 1.0, 0}) == 1);
  }

  TEST_CASE("truncated transmission") {
    for (double x : {0.0, 13e-6, 100e-6, -250e-6}) {
      CHECK(truncated_transmission(x, GratingSpec{360e-6, 0.3, 0}) == doctest::Approx(0.3));
      CHECK(truncated_transmission(x, GratingSpec{360e-6, 1.0, 25}) == doctest::Approx(1.0).epsilon(1e-14));
    }
    const GratingSpec half{360e-6, 0.5, 199};
    const double t0 = truncated_transmission(0.0, half);
    CHECK(std::abs(t0 - 1.0) < 0.1);
    CHECK(t0 == doctest::Approx(static_cast<double>(partial_sum(0.0L, 360e-6L, 0.5L, 199))).epsilon(1e-12));
    for (double x : {7e-6, 44e-6, 91e-6, 170e-6}) {
      CHECK(truncated_transmission(x, half) ==
            doctest::Approx(static_cast<double>(partial_sum(x, 360e-6L, 0.5L, 199))).epsilon(1e-11));
    }
  }

  TEST_CASE("truncated sum converges to the window in mean square") {
    for (double f : {0.1, 0.3, 0.5}) {
      double prev = INFINITY;
      for (int N : {5, 10, 20, 40, 80}) {
        const double gap = l2_gap(GratingSpec{360e-6, f, N});
        CHECK(gap < prev);
        prev = gap;
      }
    }
  }

  TEST_CASE("SLM mask at the default pitch") {
    const SlmProfile p;
    for (int tenths = 1; tenths <= 5; ++tenths) {
      const double f = tenths / 10.0;
      const GrayImage img = render_slm_mask(GratingSpec{360e-6, f, 50}, p);
      REQUIRE(img.width == 1024);
      REQUIRE(img.height == 768);
      for (int j = 0; j + 10 < img.width; ++j) CHECK(img.at(0, j) == img.at(0, j + 10));
      for (int start = 0; start + 10 <= img.width; start += 10) {
        int open = 0;
        for (int j = start; j < start + 10; ++j) open += img.at(0, j) == 255;
        CHECK(open == tenths);
      }
      for (int r = 1; r < img.height; r += 97) {
        for (int j = 0; j < img.width; ++j) CHECK(img.at(r, j) == img.at(0, j));
      }
    }
  }

  TEST_CASE("mask column layout for f = 0.1 by hand") {
    // Column centers sit at odd multiples of 18 um from the middle; only the
    // -18 um center of each period is inside [-18, 18) um.
    const GrayImage img = render_slm_mask(GratingSpec{360e-6, 0.1, 50}, SlmProfile{});
    CHECK(img.at(0, 511) == 255);  // center -18 um
    CHECK(img.at(0, 512) == 0);    // center +18 um
    CHECK(img.at(0, 501) == 255);  // center -378 um = -18 um - d
    CHECK(img.at(0, 510) == 0);
  }

  TEST_CASE("mask contains round(width * pitch / d) full periods") {
    const SlmProfile p;
    const GrayImage img = render_slm_mask(GratingSpec{360e-6, 0.3, 50}, p);
    // Count rising edges (closed -> open) across the row.
    int rises = 0;
    for (int j = 1; j < img.width; ++j) rises += img.at(0, j - 1) == 0 && img.at(0, j) == 255;
    const int full = static_cast<int>(std::lround(p.width_px * p.pixel_pitch / 360e-6));
    CHECK(full == 102);
    CHECK(std::abs(rises - full) <= 1);
  }

  TEST_CASE("mask errors and profile options") {
    CHECK_THROWS_AS(render_slm_mask(GratingSpec{36e-6, 0.5, 50}, SlmProfile{}), DomainError);
    SlmProfile bad;
    bad.gray_open = bad.gray_closed = 10;
    CHECK_THROWS_AS(render_slm_mask(GratingSpec{}, bad), DomainError);
    SlmProfile small;
    small.width_px = 40;
    small.height_px = 3;
    small.gray_open = 200;
    small.gray_closed = 17;
    const auto img = render_slm_mask(GratingSpec{360e-6, 0.5, 50}, small);
    CHECK(img.pixels.size() == 120);
    for (auto px : img.pixels) CHECK((px == 200 || px == 17));
  }
}
