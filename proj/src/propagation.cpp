#include "talbot/propagation.hpp"

#include <algorithm>
#include <cmath>

#include "talbot/errors.hpp"
#include "talbot/grating.hpp"

namespace talbot {

namespace {

constexpr double kReduceAbove = 1e6;

inline double reduced(double arg) {
  return std::abs(arg) > kReduceAbove ? std::remainder(arg, kTwoPi) : arg;
}

// Transverse frequency k_d / M and Talbot phase pi * lambda * Z / d^2.
struct PhaseRates {
  double q;
  double phi;
};

PhaseRates phase_rates(double lambda, const SourceSpec& src, const GratingSpec& g, double z) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  const double Z = effective_distance(z, src.z0);
  const double M = magnification(z, src.z0);
  return {g.kd() / M, kPi * lambda * Z / (g.d * g.d)};
}

// sin(a * half) / a with the a -> 0 limit `half`.
inline double slit_weight(double a, double half) {
  return a == 0.0 ? half : std::sin(a * half) / a;
}

}  // namespace

double intensity(double x, double lambda, const SourceSpec& src, const GratingSpec& g, double z) {
  src.validate();
  const auto a = fourier_coefficients(g);
  const auto [q, phi] = phase_rates(lambda, src, g, z);
  const int N = g.trunc;

  double diag = 0.0;
  double cross = 0.0;
  for (int n = -N; n <= N; ++n) {
    const double an = a[static_cast<std::size_t>(n + N)];
    diag += an * an;
    if (an == 0.0) continue;
    for (int m = -N; m < n; ++m) {
      const double am = a[static_cast<std::size_t>(m + N)];
      if (am == 0.0) continue;
      const double dn = n - m;
      const double ds = static_cast<double>(n * n - m * m);
      cross += an * am * std::cos(reduced(dn * q * x + ds * phi));
    }
  }
  return std::max(0.0, diag + 2.0 * cross);
}

std::complex<double> intensity_double_sum(double x, double lambda, const SourceSpec& src,
                                          const GratingSpec& g, double z) {
  src.validate();
  const auto a = fourier_coefficients(g);
  const auto [q, phi] = phase_rates(lambda, src, g, z);
  const int N = g.trunc;
  std::complex<double> sum{0.0, 0.0};
  for (int n = -N; n <= N; ++n) {
    for (int m = -N; m <= N; ++m) {
      const double w = a[static_cast<std::size_t>(n + N)] * a[static_cast<std::size_t>(m + N)];
      const double arg = static_cast<double>(n - m) * q * x + static_cast<double>(n * n - m * m) * phi;
      sum += w * std::polar(1.0, reduced(arg));
    }
  }
  return sum;
}

double slit_rate(double X, double lambda, const SourceSpec& src, const GratingSpec& g,
                 const DetectionSpec& det) {
  src.validate();
  det.validate();
  const auto a = fourier_coefficients(g);
  const auto [q, phi] = phase_rates(lambda, src, g, det.z);
  const double half = 0.5 * det.slit_width;
  const double center = X + half;
  const int N = g.trunc;

  double diag = 0.0;
  double cross = 0.0;
  for (int n = -N; n <= N; ++n) {
    const double an = a[static_cast<std::size_t>(n + N)];
    diag += an * an;
    if (an == 0.0) continue;
    for (int m = -N; m < n; ++m) {
      const double am = a[static_cast<std::size_t>(m + N)];
      if (am == 0.0) continue;
      const double freq = static_cast<double>(n - m) * q;
      const double ds = static_cast<double>(n * n - m * m);
      cross += an * am * slit_weight(freq, half) * std::cos(reduced(freq * center + ds * phi));
    }
  }
  return std::max(0.0, diag * half + 2.0 * cross);
}

std::complex<double> slit_rate_double_sum(double X, double lambda, const SourceSpec& src,
                                          const GratingSpec& g, const DetectionSpec& det) {
  src.validate();
  det.validate();
  const auto a = fourier_coefficients(g);
  const auto [q, phi] = phase_rates(lambda, src, g, det.z);
  const double half = 0.5 * det.slit_width;
  const int N = g.trunc;
  std::complex<double> sum{0.0, 0.0};
  for (int n = -N; n <= N; ++n) {
    for (int m = -N; m <= N; ++m) {
      const double w = a[static_cast<std::size_t>(n + N)] * a[static_cast<std::size_t>(m + N)];
      const double freq = static_cast<double>(n - m) * q;
      const double arg = freq * (X + half) + static_cast<double>(n * n - m * m) * phi;
      sum += w * slit_weight(freq, half) * std::polar(1.0, reduced(arg));
    }
  }
  return sum;
}

double polychromatic_rate(double X, const SourceSpec& src, const GratingSpec& g,
                          const DetectionSpec& det, std::span<const SpectralSample> grid) {
  if (grid.empty()) throw DomainError("empty spectral grid");
  double total = 0.0;
  for (const auto& s : grid) total += s.weight * slit_rate(X, s.lambda, src, g, det);
  return total;
}

void normalize_max_one(std::vector<double>& values) {
  if (values.empty()) return;
  const double mx = *std::max_element(values.begin(), values.end());
  if (!(mx > 0.0)) return;
  for (double& v : values) v /= mx;
}

Pattern scan(const SourceSpec& src, const GratingSpec& g, const DetectionSpec& det,
             std::span<const SpectralSample> grid, PatternNorm norm, const Exec& exec) {
  src.validate();
  g.validate();
  Pattern p;
  p.positions = det.positions();
  p.values.assign(p.positions.size(), 0.0);
  p.meta = {src, g, det};
  parallel_for(p.positions.size(), exec, [&](std::size_t i) {
    p.values[i] = polychromatic_rate(p.positions[i], src, g, det, grid);
  });
  p.norm = norm;
  if (norm == PatternNorm::max_one) normalize_max_one(p.values);
  return p;
}

Pattern scan(const SourceSpec& src, const GratingSpec& g, const DetectionSpec& det,
             const ScanOptions& opt) {
  const auto grid = spectral_grid(src, opt.spectral_samples, opt.spectral_span);
  return scan(src, g, det, grid, opt.norm, opt.exec);
}

Carpet carpet(const SourceSpec& src, const GratingSpec& g, std::span<const double> x_grid,
              std::span<const double> z_grid, double lambda, CarpetNorm norm, const Exec& exec) {
  src.validate();
  g.validate();
  auto check_axis = [](std::span<const double> axis, const char* name) {
    if (axis.empty()) throw DomainError(std::string(name) + " grid is empty");
    for (std::size_t i = 1; i < axis.size(); ++i) {
      if (!(axis[i] > axis[i - 1])) throw DomainError(std::string(name) + " grid not strictly increasing");
    }
  };
  check_axis(x_grid, "x");
  check_axis(z_grid, "z");

  Carpet c;
  c.x_axis.assign(x_grid.begin(), x_grid.end());
  c.z_axis.assign(z_grid.begin(), z_grid.end());
  c.values.assign(x_grid.size() * z_grid.size(), 0.0);
  c.norm = norm;
  const std::size_t nx = x_grid.size();
  parallel_for(z_grid.size(), exec, [&](std::size_t iz) {
    double* row = c.values.data() + iz * nx;
    for (std::size_t ix = 0; ix < nx; ++ix) row[ix] = intensity(x_grid[ix], lambda, src, g, z_grid[iz]);
    if (norm == CarpetNorm::per_column_max_one) {
      const double mx = *std::max_element(row, row + nx);
      if (mx > 0.0) {
        for (std::size_t ix = 0; ix < nx; ++ix) row[ix] /= mx;
      }
    }
  });
  return c;
}

}  // namespace talbot
