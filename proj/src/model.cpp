#include "talbot/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "talbot/errors.hpp"

namespace talbot {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

void SourceSpec::validate() const {
  require_positive(lambda0, "lambda0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("beta must be >= 0");
  if (z0) require_positive(*z0, "z0");
  require_positive(delta, "delta");
}

void GratingSpec::validate() const {
  require_positive(d, "d");
  if (!(f > 0.0 && f <= 1.0)) throw DomainError("opening fraction f must lie in (0, 1]");
  if (trunc < 0) throw DomainError("trunc must be >= 0");
}

int GratingSpec::default_trunc(double f) {
  if (!(f > 0.0 && f <= 1.0)) throw DomainError("opening fraction f must lie in (0, 1]");
  return std::max(50, static_cast<int>(std::ceil(8.0 / f - 1e-12)));
}

void DetectionSpec::validate() const {
  require_positive(z, "z");
  require_positive(slit_width, "slit_width");
  require_positive(scan_step, "scan_step");
  if (!std::isfinite(scan_start) || !std::isfinite(scan_end)) {
    throw DomainError("scan range must be finite");
  }
  if (!(scan_end > scan_start)) throw DomainError("empty scan range: scan_end must exceed scan_start");
}

std::vector<double> DetectionSpec::positions() const {
  validate();
  // Index-based stepping keeps the grid free of accumulated rounding.
  const double span = (scan_end - scan_start) / scan_step;
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> xs(count);
  for (std::size_t i = 0; i < count; ++i) xs[i] = scan_start + static_cast<double>(i) * scan_step;
  return xs;
}

void Pattern::check() const {
  if (positions.size() != values.size()) throw DomainError("pattern: positions/values length mismatch");
  for (std::size_t i = 1; i < positions.size(); ++i) {
    if (!(positions[i] > positions[i - 1])) throw DomainError("pattern: positions not strictly increasing");
  }
  for (double v : values) {
    if (!(v >= 0.0)) throw DomainError("pattern: negative value");
  }
  if (norm == PatternNorm::max_one && !values.empty()) {
    const double mx = *std::max_element(values.begin(), values.end());
    if (std::abs(mx - 1.0) > 1e-12) throw DomainError("pattern: max-one normalization violated");
  }
}

double talbot_length(double d, double lambda) {
  require_positive(d, "d");
  require_positive(lambda, "lambda");
  return d * d / lambda;
}

double effective_distance(double z, std::optional<double> z0) {
  require_positive(z, "z");
  if (!z0) return z;
  require_positive(*z0, "z0");
  return z * *z0 / (z + *z0);
}

double magnification(double z, std::optional<double> z0) {
  require_positive(z, "z");
  if (!z0) return 1.0;
  require_positive(*z0, "z0");
  return 1.0 + z / *z0;
}

double source_distance_for(double z, double effective) {
  require_positive(z, "z");
  require_positive(effective, "effective distance");
  if (!(effective < z)) throw DomainError("effective distance must be shorter than z");
  return effective * z / (z - effective);
}

double beta_from_fwhm(double fwhm) {
  if (!(fwhm >= 0.0) || !std::isfinite(fwhm)) throw DomainError("fwhm must be >= 0");
  return fwhm / (2.0 * std::sqrt(std::log(2.0)));
}

std::vector<SpectralSample> spectral_grid(const SourceSpec& src, int samples, double span_sigmas) {
  src.validate();
  if (samples < 1 || samples % 2 == 0) throw DomainError("spectral samples must be a positive odd integer");
  if (!(span_sigmas > 0.0)) throw DomainError("spectral span must be positive");
  if (src.beta == 0.0 || samples == 1) return {{src.lambda0, 1.0}};

  const int half = samples / 2;
  const double step = span_sigmas * src.beta / half;
  std::vector<SpectralSample> grid;
  grid.reserve(static_cast<std::size_t>(samples));
  for (int i = -half; i <= half; ++i) {
    const double offset = i * step;
    const double lambda = src.lambda0 + offset;
    if (lambda <= 0.0) continue;
    grid.push_back({lambda, std::exp(-(offset * offset) / (src.beta * src.beta))});
  }
  double total = 0.0;
  for (const auto& s : grid) total += s.weight;
  for (auto& s : grid) s.weight /= total;
  return grid;
}

double ReferenceSetup::z0() {
  return source_distance_for(revival_z, talbot_length(d, lambda0));
}

SourceSpec ReferenceSetup::source() {
  SourceSpec s;
  s.lambda0 = lambda0;
  s.beta = beta_from_fwhm(fwhm);
  s.z0 = z0();
  s.delta = theta * *s.z0;
  return s;
}

GratingSpec ReferenceSetup::grating(double f) {
  return GratingSpec{d, f, GratingSpec::default_trunc(f)};
}

DetectionSpec ReferenceSetup::detection() {
  DetectionSpec det;
  det.z = z;
  det.slit_width = slit_width;
  det.scan_start = -2.0 * d;
  det.scan_end = 2.0 * d;
  det.scan_step = scan_step;
  return det;
}

}  // namespace talbot
