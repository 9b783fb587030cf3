#pragma once

// CSV and report writers. Numbers use a fixed 12-significant-digit format so
// files are byte-identical across reruns.

#include <ostream>
#include <string>
#include <vector>

#include "talbot/config.hpp"
#include "talbot/model.hpp"
#include "talbot/photon_mc.hpp"

namespace talbot {

/// printf "%.12g"
std::string format_number(double v);

/// "# " prefixed free-form lines followed by "#cfg key = value" lines.
/// `sed -n 's/^#cfg //p'` recovers a loadable config file.
void write_header(std::ostream& os, const std::string& title, const SimConfig& cfg,
                  const std::vector<std::string>& notes = {});

/// Columns x_over_d, x_m, rate_normalized, rate_raw. `raw` holds the
/// unnormalized rates; x_over_d = X / (d * magnification).
void write_scan_csv(std::ostream& os, const Pattern& raw, double magnification);

/// First row: x axis; first column: z axis.
void write_carpet_csv(std::ostream& os, const Carpet& c);

/// Columns x_over_d, counts, error.
void write_mc_csv(std::ostream& os, const McPattern& mc, double period);

struct OracleRow {
  double x;
  double analytic;
  double oracle;
};

/// max |oracle| over the rows.
double oracle_peak(const std::vector<OracleRow>& rows);

/// Columns x, analytic, oracle, relative_error; the error is taken relative
/// to the oracle peak so dark fringes do not blow it up.
void write_oracle_csv(std::ostream& os, const std::vector<OracleRow>& rows);

}  // namespace talbot
