#include "talbot/fresnel_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "talbot/errors.hpp"
#include "talbot/grating.hpp"

namespace talbot {

namespace {

struct Segment {
  double lo;
  double hi;
};

// Open windows of the grating clipped to [-W, W].
std::vector<Segment> open_segments(const GratingSpec& g, double W) {
  if (g.f == 1.0) return {{-W, W}};
  std::vector<Segment> segs;
  const double half = 0.5 * g.f * g.d;
  const auto first = static_cast<long>(std::floor(-W / g.d)) - 1;
  const auto last = static_cast<long>(std::ceil(W / g.d)) + 1;
  for (long j = first; j <= last; ++j) {
    const double c = static_cast<double>(j) * g.d;
    const double lo = std::max(c - half, -W);
    const double hi = std::min(c + half, W);
    if (hi > lo) segs.push_back({lo, hi});
  }
  return segs;
}

std::int64_t panels(double length, double h) {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(length / h - 1e-9)));
}

void check_inputs(double lambda, const SourceSpec& src, const GratingSpec& g, double z) {
  src.validate();
  g.validate();
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  if (!(z > 0.0)) throw DomainError("z must be positive");
}

// f + 2 sum_{n>=1} A_n cos(n kd x), evaluated with a rotation recurrence.
class PartialSum {
 public:
  explicit PartialSum(const GratingSpec& g) : kd_(g.kd()), a_(fourier_coefficients(g)), N_(g.trunc) {}

  double operator()(double x) const {
    const std::complex<double> step = std::polar(1.0, kd_ * x);
    std::complex<double> rot = step;
    double sum = a_[static_cast<std::size_t>(N_)];
    for (int n = 1; n <= N_; ++n) {
      sum += 2.0 * a_[static_cast<std::size_t>(n + N_)] * rot.real();
      rot *= step;
    }
    return sum;
  }

 private:
  double kd_;
  std::vector<double> a_;
  int N_;
};

}  // namespace

double oracle_step(double x, double lambda, const SourceSpec& src, double z) {
  const double W = src.delta;
  double h = lambda * z / (4.0 * (W + std::abs(x)));
  if (src.z0) h = std::min(h, lambda * *src.z0 / (4.0 * W));
  return h;
}

std::int64_t oracle_step_count(double x, double lambda, const SourceSpec& src, const GratingSpec& g,
                               double z, const OracleOptions& opt) {
  check_inputs(lambda, src, g, z);
  if (!(opt.refine >= 1.0)) throw DomainError("oracle refine factor must be >= 1");
  const double h = oracle_step(x, lambda, src, z) / opt.refine;
  if (opt.transmission == OracleTransmission::truncated) return panels(2.0 * src.delta, h);
  std::int64_t total = 0;
  for (const auto& s : open_segments(g, src.delta)) total += panels(s.hi - s.lo, h);
  return total;
}

double oracle_intensity_scale(const SourceSpec& src, double z) {
  return effective_distance(z, src.z0) / (z * z);
}

std::complex<double> fresnel_field(double x, double lambda, const SourceSpec& src, const GratingSpec& g,
                                   double z, const OracleOptions& opt) {
  const std::int64_t steps = oracle_step_count(x, lambda, src, g, z, opt);
  if (steps > opt.max_steps) {
    throw ResolutionError("oracle resolution: " + std::to_string(steps) + " steps exceed cap " +
                          std::to_string(opt.max_steps));
  }

  const double k = kTwoPi / lambda;
  const double W = src.delta;
  const double h_max = oracle_step(x, lambda, src, z) / opt.refine;
  const double inv_2z = 1.0 / (2.0 * z);
  const double inv_2z0 = src.z0 ? 1.0 / (2.0 * *src.z0) : 0.0;

  // Quadratic part of the phase; the constant -k (z + z0) is applied once.
  auto kernel = [&](double x1) {
    const double u = x - x1;
    return std::polar(1.0, -k * (u * u * inv_2z + x1 * x1 * inv_2z0));
  };

  std::complex<double> total{0.0, 0.0};
  auto integrate = [&](double lo, double hi, auto&& weight) {
    const std::int64_t m = panels(hi - lo, h_max);
    const double h = (hi - lo) / static_cast<double>(m);
    std::complex<double> acc = 0.5 * (weight(lo) * kernel(lo) + weight(hi) * kernel(hi));
    for (std::int64_t i = 1; i < m; ++i) {
      const double x1 = lo + static_cast<double>(i) * h;
      acc += weight(x1) * kernel(x1);
    }
    total += h * acc;
  };

  if (opt.transmission == OracleTransmission::truncated) {
    const PartialSum t(g);
    integrate(-W, W, t);
  } else {
    for (const auto& s : open_segments(g, W)) integrate(s.lo, s.hi, [](double) { return 1.0; });
  }

  const double constant_phase = std::remainder(-k * (z + src.z0.value_or(0.0)), kTwoPi);
  const std::complex<double> sqrt_i = std::polar(1.0, kPi / 4.0);
  return sqrt_i / std::sqrt(lambda) / z * std::polar(1.0, constant_phase) * total;
}

double oracle_slit_rate(double X, double lambda, const SourceSpec& src, const GratingSpec& g,
                        const DetectionSpec& det, const OracleOptions& opt, int samples) {
  det.validate();
  const int m = std::max(256, samples);
  const double h = det.slit_width / m;
  double acc = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double x = X + i * h;
    const double w = (i == 0 || i == m) ? 0.5 : 1.0;
    acc += w * std::norm(fresnel_field(x, lambda, src, g, det.z, opt));
  }
  return acc * h;
}

}  // namespace talbot
