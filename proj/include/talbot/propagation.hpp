#pragma once

// Closed-form near-field propagation of a point-source (or plane) wave
// through a binary grating: intensity, slit-integrated count rate, spectral
// average, scans and (x, z) carpets.
//
// With q = k_d / (1 + z/z0) and phi = pi * lambda * Z / d^2 the intensity is
//
//   I(x) = sum_{n,m} A_n A_m cos[(n - m) q x + (n^2 - m^2) phi]
//
// and the slit rate replaces each term by its integral over [X, X + slit]
// divided by two (the diagonal weight is slit/2). Both double sums run over
// |n|, |m| <= trunc in a fixed order so results are bit-reproducible.

#include <complex>
#include <span>
#include <vector>

#include "talbot/model.hpp"
#include "talbot/parallel.hpp"

namespace talbot {

double intensity(double x, double lambda, const SourceSpec& src, const GratingSpec& g, double z);

double slit_rate(double X, double lambda, const SourceSpec& src, const GratingSpec& g,
                 const DetectionSpec& det);

/// sum of weight * slit_rate over the grid.
double polychromatic_rate(double X, const SourceSpec& src, const GratingSpec& g,
                          const DetectionSpec& det, std::span<const SpectralSample> grid);

/// Full (non-paired) accumulation of the intensity / slit-rate double sums.
/// The imaginary part measures how well conjugate terms cancel.
std::complex<double> intensity_double_sum(double x, double lambda, const SourceSpec& src,
                                          const GratingSpec& g, double z);
std::complex<double> slit_rate_double_sum(double X, double lambda, const SourceSpec& src,
                                          const GratingSpec& g, const DetectionSpec& det);

struct ScanOptions {
  int spectral_samples = 41;
  double spectral_span = 3.0;
  PatternNorm norm = PatternNorm::max_one;
  Exec exec{};
};

/// Sweeps the slit position over det's scan range. Positions are slit
/// positions X in meters; divide by d * magnification for grating periods.
Pattern scan(const SourceSpec& src, const GratingSpec& g, const DetectionSpec& det,
             const ScanOptions& opt = {});

/// Same as scan() with an explicit spectral grid.
Pattern scan(const SourceSpec& src, const GratingSpec& g, const DetectionSpec& det,
             std::span<const SpectralSample> grid, PatternNorm norm = PatternNorm::max_one,
             const Exec& exec = {});

Carpet carpet(const SourceSpec& src, const GratingSpec& g, std::span<const double> x_grid,
              std::span<const double> z_grid, double lambda, CarpetNorm norm = CarpetNorm::raw,
              const Exec& exec = {});

/// Normalizes values so the maximum is one. All-zero input is left as is.
void normalize_max_one(std::vector<double>& values);

}  // namespace talbot
