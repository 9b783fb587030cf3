#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "talbot/model.hpp"
#include "talbot/parallel.hpp"

namespace talbot {

/// (max - min) / (max + min)
double visibility(const Pattern& p);

/// Mean full width at half maximum of the complete fringes in p, divided by
/// `period`. The half level is (max + min) / 2; crossings are located by
/// linear interpolation. Throws DomainError("insufficient fringes") when
/// fewer than two complete fringes are found.
double fringe_width_fraction(const Pattern& p, double period);

/// Individual fringe widths (same units as positions).
std::vector<double> fringe_widths(const Pattern& p);

struct RevivalOptions {
  /// Samples per magnified period in the correlation; 0 picks 8 (trunc + 1).
  std::size_t samples_per_period = 0;
  double tolerance = 1e-7;  ///< golden-section bracket width, meters
  Exec exec{};
};

struct RevivalResult {
  double z;
  double score;  ///< normalized cross-correlation at z
};

/// Best normalized cross-correlation, over circular shifts within one
/// magnified period, between intensity(., z) and the magnified truncated
/// grating image truncated_transmission(x / M)^2. Zero for a flat pattern.
double revival_score(const SourceSpec& src, const GratingSpec& g, double lambda, double z,
                     const RevivalOptions& opt = {});

/// Distance in [z_lo, z_hi] maximizing revival_score: uniform grid of
/// `steps` points, then golden-section refinement around the best node.
/// Throws DomainError("no revival found") on a flat correlation landscape.
RevivalResult revival_distance(const SourceSpec& src, const GratingSpec& g, double lambda, double z_lo,
                               double z_hi, int steps, const RevivalOptions& opt = {});

}  // namespace talbot
