#pragma once

// Flat `key = value` configuration. Lengths need a unit suffix
// (nm, um, µm, mm, cm, m). `#` starts a comment.
//
//   lambda0      center wavelength            length
//   fwhm         spectral FWHM (0: mono)      length
//   z0           source distance              length | inf
//   delta        illuminated half-width       length | auto (theta * z0, or 1 mm)
//   d            grating period               length
//   f            opening fraction             number in (0, 1]
//   trunc        Fourier order cutoff N       integer | auto (max(50, ceil(8/f)))
//   z            grating-to-slit distance     length
//   slit_width   slit width                   length
//   scan_start   first slit position          length
//   scan_end     last slit position           length
//   scan_step    slit position step           length
//   spectral_samples, spectral_span           odd integer, number of sigmas

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "talbot/model.hpp"

namespace talbot {

struct ConfigKey {
  std::string_view name;
  std::string_view unit;
  std::string_view help;
};

/// All recognised keys in canonical order.
const std::vector<ConfigKey>& config_keys();

/// Parses "115um", "0.16 m", "810nm". Throws ConfigError on malformed input.
double parse_length(std::string_view text);

struct SimConfig {
  double lambda0 = ReferenceSetup::lambda0;
  double fwhm = ReferenceSetup::fwhm;
  std::optional<double> z0 = ReferenceSetup::z0();
  std::optional<double> delta;  // empty: derived
  double d = ReferenceSetup::d;
  double f = 0.1;
  std::optional<int> trunc;  // empty: GratingSpec::default_trunc
  double z = ReferenceSetup::z;
  double slit_width = ReferenceSetup::slit_width;
  double scan_start = -2.0 * ReferenceSetup::d;
  double scan_end = 2.0 * ReferenceSetup::d;
  double scan_step = ReferenceSetup::scan_step;
  int spectral_samples = 41;
  double spectral_span = 3.0;

  /// Assigns one key from its textual value. `line` is used in diagnostics.
  void set(std::string_view key, std::string_view value, int line = 0);

  /// Specs built from the config; these validate and throw DomainError.
  SourceSpec source() const;
  GratingSpec grating() const;
  DetectionSpec detection() const;

  /// Resolved key/value pairs whose re-parse reproduces this config exactly.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Applies the keys in `text` on top of `base`.
SimConfig parse_config(std::string_view text, SimConfig base = {});

/// Reads and parses a file; a missing or unreadable file is a ConfigError.
SimConfig load_config(const std::filesystem::path& path, SimConfig base = {});

}  // namespace talbot
