#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "talbot/model.hpp"

namespace talbot {

struct SlmProfile {
  int width_px = 1024;
  int height_px = 768;
  double pixel_pitch = 36e-6;
  int gray_open = 255;
  int gray_closed = 0;

  void validate() const;
};

/// 8-bit grayscale image, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int row, int col) const {
    return pixels[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(col)];
  }
};

/// sin(n pi f) / (n pi), with the sinc limit f at n = 0.
double fourier_coefficient(int n, double f);

/// A_{-N..N} stored at index n + N.
std::vector<double> fourier_coefficients(const GratingSpec& g);

/// 1 on the open window [-fd/2, fd/2) of each period, 0 elsewhere. Abscissae
/// within 1e-12 of a period from an edge are snapped onto it.
int binary_transmission(double x, const GratingSpec& g);

/// Partial Fourier sum over |n| <= g.trunc. The sum is real for the even
/// coefficient set; its imaginary residue is checked.
double truncated_transmission(double x, const GratingSpec& g);

/// Column j is open iff the grating is open at (j + 0.5 - width/2) * pitch.
/// Throws DomainError("period unresolvable") when d < 2 * pitch.
GrayImage render_slm_mask(const GratingSpec& g, const SlmProfile& p);

/// Binary PGM (P5), maxval 255.
void write_pgm(const GrayImage& image, const std::filesystem::path& path);

}  // namespace talbot
