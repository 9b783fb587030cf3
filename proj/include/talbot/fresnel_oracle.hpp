#pragma once

// Brute-force Huygens-Fresnel quadrature, independent of the Fourier
// expansion used by the analytic engine.
//
//   psi(x) = sqrt(i/lambda) / z * integral_{-W}^{W} dx1
//            exp{-ik(z + (x - x1)^2 / 2z)} t(x1) exp{-ik(z0 + x1^2 / 2z0)}
//
// with W = src.delta and t the exact binary transmission. The plane-wave
// source drops the incident chirp. Because t is piecewise constant the
// composite trapezoid runs over each open window separately, with nodes on
// the window edges; every panel is at most the quarter-wave step
//   h <= lambda z / (4 (W + |x|))   and   h <= lambda z0 / (4 W).
//
// For an unbounded grating |psi|^2 = (Z / z^2) * propagation::intensity.

#include <complex>
#include <cstdint>

#include "talbot/model.hpp"

namespace talbot {

enum class OracleTransmission {
  binary,     ///< exact binary window (default)
  truncated,  ///< Fourier partial sum |n| <= trunc, for checking the closed form itself
};

struct OracleOptions {
  std::int64_t max_steps = 10'000'000;
  /// Extra refinement: the step is the quarter-wave bound divided by this.
  double refine = 1.0;
  OracleTransmission transmission = OracleTransmission::binary;
};

/// Quarter-wave step bound at probe x.
double oracle_step(double x, double lambda, const SourceSpec& src, double z);

/// Total trapezoid panels a field evaluation at x would use.
std::int64_t oracle_step_count(double x, double lambda, const SourceSpec& src, const GratingSpec& g,
                               double z, const OracleOptions& opt = {});

/// Throws ResolutionError when the panel count exceeds opt.max_steps.
std::complex<double> fresnel_field(double x, double lambda, const SourceSpec& src, const GratingSpec& g,
                                   double z, const OracleOptions& opt = {});

/// Trapezoid integral of |fresnel_field|^2 over [X, X + slit] with
/// `samples` panels (at least 256).
double oracle_slit_rate(double X, double lambda, const SourceSpec& src, const GratingSpec& g,
                        const DetectionSpec& det, const OracleOptions& opt = {}, int samples = 256);

/// Z / z^2: the factor relating |fresnel_field|^2 to propagation::intensity.
double oracle_intensity_scale(const SourceSpec& src, double z);

}  // namespace talbot
