#pragma once

// Physical configuration types and the closed-form quantities derived from
// them. All lengths are SI meters.

#include <optional>
#include <vector>

namespace talbot {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Illumination: a point (or plane-wave) source with a Gaussian spectrum.
struct SourceSpec {
  double lambda0 = 810e-9;     ///< center wavelength
  double beta = 0.0;           ///< Gaussian spectral radius, weight exp{-(l-l0)^2/beta^2}
  std::optional<double> z0;    ///< source-to-grating distance; empty means plane wave
  double delta = 1e-3;         ///< illuminated half-width at the grating

  bool plane_wave() const noexcept { return !z0.has_value(); }
  /// delta / z0, or 0 for a plane wave.
  double divergence() const noexcept { return z0 ? delta / *z0 : 0.0; }
  void validate() const;
};

/// Binary amplitude grating. Orders |n| <= trunc are kept in Fourier sums.
struct GratingSpec {
  double d = 360e-6;
  double f = 0.1;
  int trunc = 80;

  double kd() const noexcept { return kTwoPi / d; }
  void validate() const;

  /// max(50, ceil(8/f))
  static int default_trunc(double f);
};

struct DetectionSpec {
  double z = 0.16;
  double slit_width = 115e-6;
  double scan_start = -720e-6;
  double scan_end = 720e-6;
  double scan_step = 12e-6;

  void validate() const;
  /// scan_start, scan_start + step, ... <= scan_end
  std::vector<double> positions() const;
};

struct PatternMeta {
  SourceSpec source;
  GratingSpec grating;
  DetectionSpec detection;
};

enum class PatternNorm { raw, max_one };

struct Pattern {
  std::vector<double> positions;
  std::vector<double> values;
  PatternNorm norm = PatternNorm::raw;
  PatternMeta meta;

  std::size_t size() const noexcept { return positions.size(); }
  /// Throws DomainError if the structural invariants do not hold.
  void check() const;
};

enum class CarpetNorm { raw, per_column_max_one };

/// Intensity over an (x, z) grid. Row i holds z_axis[i]; a "column" of the
/// carpet image is one z slice, so per-column normalization scales each row.
struct Carpet {
  std::vector<double> x_axis;
  std::vector<double> z_axis;
  std::vector<double> values;  // row-major, z index major
  CarpetNorm norm = CarpetNorm::raw;

  double at(std::size_t iz, std::size_t ix) const { return values[iz * x_axis.size() + ix]; }
};

struct SpectralSample {
  double lambda;
  double weight;
};

double talbot_length(double d, double lambda);

/// z z0 / (z + z0); z for a plane wave.
double effective_distance(double z, std::optional<double> z0);

/// 1 + z/z0; 1 for a plane wave.
double magnification(double z, std::optional<double> z0);

/// Source distance z0 for which effective_distance(z, z0) == effective.
/// Requires 0 < effective < z.
double source_distance_for(double z, double effective);

/// Gaussian spectral radius whose weight falls to 1/2 at lambda0 +- fwhm/2.
double beta_from_fwhm(double fwhm);

/// Uniform wavelength grid over lambda0 +- span_sigmas * beta, clipped to
/// lambda > 0, with normalized Gaussian weights. `samples` must be odd.
std::vector<SpectralSample> spectral_grid(const SourceSpec& src, int samples = 41,
                                          double span_sigmas = 3.0);

/// The experiment's setup: d = 360 um, 810 nm, FWHM 50 nm, 115 um slit at
/// z = 160 mm, 0.5 mrad divergence. z0 is not published; it is derived so the
/// first self-image sits at z = 174 mm.
struct ReferenceSetup {
  static constexpr double d = 360e-6;
  static constexpr double lambda0 = 810e-9;
  static constexpr double fwhm = 50e-9;
  static constexpr double z = 0.160;
  static constexpr double slit_width = 115e-6;
  static constexpr double scan_step = 12e-6;
  static constexpr double theta = 0.5e-3;
  static constexpr double revival_z = 0.174;

  static double z0();
  static SourceSpec source();
  static GratingSpec grating(double f);
  static DetectionSpec detection();
};

}  // namespace talbot
