#include "talbot/grating.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <stdexcept>
#include <string>

#include "talbot/errors.hpp"

namespace talbot {

namespace {

// Edge snapping tolerance in units of one period.
constexpr double kEdgeTolerance = 1e-12;

void require_fraction(double f) {
  if (!(f > 0.0 && f <= 1.0)) throw DomainError("opening fraction f must lie in (0, 1]");
}

}  // namespace

void SlmProfile::validate() const {
  if (width_px <= 0 || height_px <= 0) throw DomainError("SLM dimensions must be positive");
  if (!(pixel_pitch > 0.0)) throw DomainError("SLM pixel pitch must be positive");
  auto in_range = [](int v) { return v >= 0 && v <= 255; };
  if (!in_range(gray_open) || !in_range(gray_closed)) throw DomainError("gray levels must lie in [0, 255]");
  if (gray_open == gray_closed) throw DomainError("gray_open and gray_closed must differ");
}

double fourier_coefficient(int n, double f) {
  require_fraction(f);
  if (n == 0) return f;
  const double npi = static_cast<double>(n) * kPi;
  return std::sin(npi * f) / npi;
}

std::vector<double> fourier_coefficients(const GratingSpec& g) {
  g.validate();
  const int N = g.trunc;
  std::vector<double> a(static_cast<std::size_t>(2 * N + 1));
  for (int n = -N; n <= N; ++n) a[static_cast<std::size_t>(n + N)] = fourier_coefficient(n, g.f);
  return a;
}

int binary_transmission(double x, const GratingSpec& g) {
  g.validate();
  // Position within the period, in period units, wrapped to (-1/2, 1/2].
  double u = x / g.d;
  u -= std::round(u);
  if (u <= -0.5) u += 1.0;
  const double half = 0.5 * g.f;
  if (g.f == 1.0) return 1;
  return (u >= -half - kEdgeTolerance && u < half - kEdgeTolerance) ? 1 : 0;
}

double truncated_transmission(double x, const GratingSpec& g) {
  const auto a = fourier_coefficients(g);
  const int N = g.trunc;
  const double kd = g.kd();
  std::complex<double> sum{0.0, 0.0};
  for (int n = -N; n <= N; ++n) {
    sum += a[static_cast<std::size_t>(n + N)] * std::polar(1.0, n * kd * x);
  }
  if (std::abs(sum.imag()) >= 1e-10) {
    throw std::logic_error("truncated_transmission: imaginary residue " + std::to_string(sum.imag()));
  }
  return sum.real();
}

GrayImage render_slm_mask(const GratingSpec& g, const SlmProfile& p) {
  g.validate();
  p.validate();
  if (g.d < 2.0 * p.pixel_pitch) throw DomainError("period unresolvable: d < 2 * pixel_pitch");

  GrayImage img;
  img.width = p.width_px;
  img.height = p.height_px;
  img.pixels.resize(static_cast<std::size_t>(p.width_px) * static_cast<std::size_t>(p.height_px));

  std::vector<std::uint8_t> row(static_cast<std::size_t>(p.width_px));
  for (int j = 0; j < p.width_px; ++j) {
    // (j + 0.5 - width/2) * pitch, written with integers to keep centers exact
    const double x = 0.5 * static_cast<double>(2 * j + 1 - p.width_px) * p.pixel_pitch;
    row[static_cast<std::size_t>(j)] =
        static_cast<std::uint8_t>(binary_transmission(x, g) ? p.gray_open : p.gray_closed);
  }
  for (int r = 0; r < p.height_px; ++r) {
    std::copy(row.begin(), row.end(), img.pixels.begin() + static_cast<std::ptrdiff_t>(r) * p.width_px);
  }
  return img;
}

void write_pgm(const GrayImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace talbot
