#include "talbot/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "talbot/errors.hpp"

namespace talbot {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Leading number of `text`; the remainder is returned in `rest`.
double leading_number(std::string_view text, std::string_view& rest) {
  double value = 0.0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr == begin) throw ConfigError("expected a number, got '" + std::string(text) + "'");
  rest = trim(std::string_view(ptr, static_cast<std::size_t>(end - ptr)));
  return value;
}

double parse_number(std::string_view text) {
  std::string_view rest;
  const double v = leading_number(trim(text), rest);
  if (!rest.empty()) throw ConfigError("unexpected trailing text '" + std::string(rest) + "'");
  if (!std::isfinite(v)) throw ConfigError("value must be finite");
  return v;
}

int parse_int(std::string_view text) {
  text = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

bool is_keyword(std::string_view text, std::initializer_list<std::string_view> words) {
  for (auto w : words) {
    if (text == w) return true;
  }
  return false;
}

std::string exact(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

std::string exact_length(double v) { return exact(v) + "m"; }

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"lambda0", "length", "center wavelength"},
      {"fwhm", "length", "spectral full width at half maximum (0 = monochromatic)"},
      {"z0", "length|inf", "source-to-grating distance (inf = plane wave)"},
      {"delta", "length|auto", "illuminated half-width at the grating (auto = 0.5 mrad * z0, or 1 mm)"},
      {"d", "length", "grating period"},
      {"f", "dimensionless", "opening fraction, 0 < f <= 1"},
      {"trunc", "integer|auto", "Fourier order cutoff N (auto = max(50, ceil(8/f)))"},
      {"z", "length", "grating-to-slit distance"},
      {"slit_width", "length", "slit width"},
      {"scan_start", "length", "first slit position"},
      {"scan_end", "length", "last slit position"},
      {"scan_step", "length", "slit position step"},
      {"spectral_samples", "odd integer", "wavelength samples in the spectral average"},
      {"spectral_span", "dimensionless", "spectral grid half-span in units of beta"},
  };
  return keys;
}

double parse_length(std::string_view text) {
  text = trim(text);
  std::string_view unit;
  const double value = leading_number(text, unit);
  if (!std::isfinite(value)) throw ConfigError("length must be finite");
  double scale = 0.0;
  if (unit == "m") {
    scale = 1.0;
  } else if (unit == "cm") {
    scale = 1e-2;
  } else if (unit == "mm") {
    scale = 1e-3;
  } else if (unit == "um" || unit == "µm") {
    scale = 1e-6;
  } else if (unit == "nm") {
    scale = 1e-9;
  } else if (unit.empty()) {
    if (value == 0.0) return 0.0;
    throw ConfigError("length '" + std::string(text) + "' needs a unit suffix (nm, um, mm, cm, m)");
  } else {
    throw ConfigError("unknown length unit '" + std::string(unit) + "'");
  }
  return value * scale;
}

void SimConfig::set(std::string_view key, std::string_view value, int line) {
  value = trim(value);
  try {
    if (key == "lambda0") {
      lambda0 = parse_length(value);
    } else if (key == "fwhm") {
      fwhm = parse_length(value);
    } else if (key == "z0") {
      if (is_keyword(value, {"inf", "none", "plane"})) {
        z0.reset();
      } else {
        z0 = parse_length(value);
      }
    } else if (key == "delta") {
      if (value == "auto") {
        delta.reset();
      } else {
        delta = parse_length(value);
      }
    } else if (key == "d") {
      d = parse_length(value);
    } else if (key == "f") {
      f = parse_number(value);
    } else if (key == "trunc") {
      if (value == "auto") {
        trunc.reset();
      } else {
        trunc = parse_int(value);
      }
    } else if (key == "z") {
      z = parse_length(value);
    } else if (key == "slit_width") {
      slit_width = parse_length(value);
    } else if (key == "scan_start") {
      scan_start = parse_length(value);
    } else if (key == "scan_end") {
      scan_end = parse_length(value);
    } else if (key == "scan_step") {
      scan_step = parse_length(value);
    } else if (key == "spectral_samples") {
      spectral_samples = parse_int(value);
    } else if (key == "spectral_span") {
      spectral_span = parse_number(value);
    } else {
      throw ConfigError("unknown key '" + std::string(key) + "'");
    }
  } catch (const ConfigError& e) {
    if (line > 0 && e.line() == 0) throw ConfigError(std::string(key) + ": " + e.what(), line);
    if (e.line() == 0) throw ConfigError(std::string(key) + ": " + e.what());
    throw;
  }
}

SourceSpec SimConfig::source() const {
  SourceSpec s;
  s.lambda0 = lambda0;
  s.beta = beta_from_fwhm(fwhm);
  s.z0 = z0;
  if (delta) {
    s.delta = *delta;
  } else {
    s.delta = z0 ? ReferenceSetup::theta * *z0 : 1e-3;
  }
  s.validate();
  return s;
}

GratingSpec SimConfig::grating() const {
  GratingSpec g;
  g.d = d;
  g.f = f;
  g.trunc = trunc ? *trunc : GratingSpec::default_trunc(f);
  g.validate();
  return g;
}

DetectionSpec SimConfig::detection() const {
  DetectionSpec det{z, slit_width, scan_start, scan_end, scan_step};
  det.validate();
  return det;
}

std::vector<std::pair<std::string, std::string>> SimConfig::echo() const {
  const SourceSpec s = source();
  const GratingSpec g = grating();
  return {
      {"lambda0", exact_length(lambda0)},
      {"fwhm", exact_length(fwhm)},
      {"z0", z0 ? exact_length(*z0) : "inf"},
      {"delta", exact_length(s.delta)},
      {"d", exact_length(d)},
      {"f", exact(f)},
      {"trunc", std::to_string(g.trunc)},
      {"z", exact_length(z)},
      {"slit_width", exact_length(slit_width)},
      {"scan_start", exact_length(scan_start)},
      {"scan_end", exact_length(scan_end)},
      {"scan_step", exact_length(scan_step)},
      {"spectral_samples", std::to_string(spectral_samples)},
      {"spectral_span", exact(spectral_span)},
  };
}

SimConfig parse_config(std::string_view text, SimConfig base) {
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("missing key before '='", line_no);
    base.set(key, line.substr(eq + 1), line_no);
  }
  return base;
}

SimConfig load_config(const std::filesystem::path& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

}  // namespace talbot
