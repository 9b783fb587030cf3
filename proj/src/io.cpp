#include "talbot/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace talbot {

std::string format_number(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.12g", v);
  return buf.data();
}

void write_header(std::ostream& os, const std::string& title, const SimConfig& cfg,
                  const std::vector<std::string>& notes) {
  os << "# " << title << '\n';
  for (const auto& n : notes) os << "# " << n << '\n';
  for (const auto& [key, value] : cfg.echo()) os << "#cfg " << key << " = " << value << '\n';
}

void write_scan_csv(std::ostream& os, const Pattern& raw, double magnification) {
  const double period = raw.meta.grating.d * magnification;
  const double peak = raw.values.empty() ? 0.0 : *std::max_element(raw.values.begin(), raw.values.end());
  os << "x_over_d,x_m,rate_normalized,rate_raw\n";
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double norm = peak > 0.0 ? raw.values[i] / peak : 0.0;
    os << format_number(raw.positions[i] / period) << ',' << format_number(raw.positions[i]) << ','
       << format_number(norm) << ',' << format_number(raw.values[i]) << '\n';
  }
}

void write_carpet_csv(std::ostream& os, const Carpet& c) {
  os << "z_m\\x_m";
  for (double x : c.x_axis) os << ',' << format_number(x);
  os << '\n';
  for (std::size_t iz = 0; iz < c.z_axis.size(); ++iz) {
    os << format_number(c.z_axis[iz]);
    for (std::size_t ix = 0; ix < c.x_axis.size(); ++ix) os << ',' << format_number(c.at(iz, ix));
    os << '\n';
  }
}

void write_mc_csv(std::ostream& os, const McPattern& mc, double period) {
  os << "x_over_d,counts,error\n";
  for (std::size_t i = 0; i < mc.positions.size(); ++i) {
    os << format_number(mc.positions[i] / period) << ',' << mc.counts[i] << ',' << format_number(mc.errors[i])
       << '\n';
  }
}

double oracle_peak(const std::vector<OracleRow>& rows) {
  double peak = 0.0;
  for (const auto& r : rows) peak = std::max(peak, std::abs(r.oracle));
  return peak;
}

void write_oracle_csv(std::ostream& os, const std::vector<OracleRow>& rows) {
  os << "x,analytic,oracle,relative_error\n";
  const double peak = oracle_peak(rows);
  for (const auto& r : rows) {
    const double rel = peak > 0.0 ? std::abs(r.analytic - r.oracle) / peak : 0.0;
    os << format_number(r.x) << ',' << format_number(r.analytic) << ',' << format_number(r.oracle) << ','
       << format_number(rel) << '\n';
  }
}

}  // namespace talbot
