// talbot_sim: command-line front end for the near-field diffraction engine.
//
// Exit codes: 0 ok, 2 configuration/usage, 3 physics domain, 4 oracle
// resolution cap, 1 anything else.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "talbot/analysis.hpp"
#include "talbot/config.hpp"
#include "talbot/errors.hpp"
#include "talbot/fresnel_oracle.hpp"
#include "talbot/grating.hpp"
#include "talbot/io.hpp"
#include "talbot/photon_mc.hpp"
#include "talbot/propagation.hpp"

namespace {

using namespace talbot;

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kDomain = 3, kResolution = 4 };

struct GlobalOptions {
  std::string config_path;
  std::string out_path;
  std::optional<unsigned> threads;
  std::map<std::string, std::string> overrides;
};

// Registers one --<key> option per config key on `cmd`.
void add_config_flags(CLI::App* cmd, GlobalOptions& g) {
  for (const auto& key : config_keys()) {
    const std::string name(key.name);
    cmd->add_option_function<std::string>(
           "--" + name, [&g, name](const std::string& v) { g.overrides[name] = v; },
           std::string(key.help) + " [" + std::string(key.unit) + "]")
        ->group("Config keys (override --config)");
  }
}

SimConfig resolve_config(const GlobalOptions& g) {
  SimConfig cfg;
  if (!g.config_path.empty()) cfg = load_config(g.config_path, cfg);
  for (const auto& [key, value] : g.overrides) cfg.set(key, value);
  return cfg;
}

Exec resolve_exec(const GlobalOptions& g) {
  if (g.threads) return Exec{*g.threads};
  if (const char* env = std::getenv("TALBOT_SIM_THREADS")) {
    try {
      return Exec{static_cast<unsigned>(std::stoul(env))};
    } catch (const std::exception&) {
      throw ConfigError("TALBOT_SIM_THREADS must be a non-negative integer");
    }
  }
  return Exec{0};
}

// Writes to --out when given, stdout otherwise.
template <class Fn>
void with_output(const GlobalOptions& g, Fn&& fn) {
  if (g.out_path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(g.out_path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + g.out_path + "'");
  fn(out);
  if (!out) throw std::runtime_error("write failed: " + g.out_path);
}

double length_or(const std::string& text, double fallback) {
  return text.empty() ? fallback : parse_length(text);
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw DomainError("grid needs at least one point");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

std::string scan_note(const SimConfig& cfg) {
  return "slit position X is swept with the grating fixed; x_over_d = X / (d * (1 + z/z0)); rates are relative";
  (void)cfg;
}

int run_scan(const GlobalOptions& g) {
  const SimConfig cfg = resolve_config(g);
  const auto src = cfg.source();
  const auto grating = cfg.grating();
  const auto det = cfg.detection();
  ScanOptions opt;
  opt.spectral_samples = cfg.spectral_samples;
  opt.spectral_span = cfg.spectral_span;
  opt.norm = PatternNorm::raw;
  opt.exec = resolve_exec(g);
  const Pattern raw = scan(src, grating, det, opt);
  with_output(g, [&](std::ostream& os) {
    write_header(os, "talbot_sim scan", cfg, {scan_note(cfg)});
    write_scan_csv(os, raw, magnification(det.z, src.z0));
  });
  return kOk;
}

struct CarpetArgs {
  std::string x_min, x_max, z_min, z_max, lambda;
  int nx = 241;
  int nz = 201;
  bool normalize = false;
};

int run_carpet(const GlobalOptions& g, const CarpetArgs& a) {
  const SimConfig cfg = resolve_config(g);
  const auto src = cfg.source();
  const auto grating = cfg.grating();
  const double lambda = length_or(a.lambda, src.lambda0);
  const double lt = talbot_length(grating.d, lambda);
  const double z_hi = length_or(a.z_max, 2.0 * lt);
  const double z_lo = length_or(a.z_min, z_hi / a.nz);
  const auto xs = linspace(length_or(a.x_min, -grating.d), length_or(a.x_max, grating.d), a.nx);
  const auto zs = linspace(z_lo, z_hi, a.nz);
  const Carpet c = carpet(src, grating, xs, zs, lambda,
                          a.normalize ? CarpetNorm::per_column_max_one : CarpetNorm::raw, resolve_exec(g));
  with_output(g, [&](std::ostream& os) {
    write_header(os, "talbot_sim carpet", cfg,
                 {"lambda = " + format_number(lambda) + " m",
                  std::string("normalization = ") + (a.normalize ? "per-z-slice max one" : "raw")});
    write_carpet_csv(os, c);
  });
  return kOk;
}

struct MaskArgs {
  SlmProfile profile;
  std::string pitch;
};

int run_mask(const GlobalOptions& g, MaskArgs a) {
  const SimConfig cfg = resolve_config(g);
  const auto grating = cfg.grating();
  if (!a.pitch.empty()) a.profile.pixel_pitch = parse_length(a.pitch);
  const GrayImage img = render_slm_mask(grating, a.profile);
  const std::string path = g.out_path.empty() ? "slm_mask.pgm" : g.out_path;
  write_pgm(img, path);
  std::cout << "wrote " << path << " (" << img.width << "x" << img.height
            << "), period_px=" << format_number(grating.d / a.profile.pixel_pitch) << '\n';
  return kOk;
}

int run_mc(const GlobalOptions& g, std::uint64_t seed, double events) {
  const SimConfig cfg = resolve_config(g);
  McRun run;
  run.seed = seed;
  run.events_per_point = events;
  run.source = cfg.source();
  run.grating = cfg.grating();
  run.scan = cfg.detection();
  run.spectral_samples = cfg.spectral_samples;
  run.spectral_span = cfg.spectral_span;
  const McPattern mc = simulate_scan(run, resolve_exec(g));
  const double period = run.grating.d * magnification(run.scan.z, run.source.z0);
  with_output(g, [&](std::ostream& os) {
    write_header(os, "talbot_sim mc", cfg,
                 {scan_note(cfg), "seed = " + std::to_string(seed), "rng = " + std::string(kRngIdentifier),
                  "events_per_point = " + format_number(events)});
    write_mc_csv(os, mc, period);
  });
  return kOk;
}

struct OracleArgs {
  std::string x_min, x_max, lambda;
  int points = 41;
  double cap = 1e7;
};

int run_oracle(const GlobalOptions& g, const OracleArgs& a) {
  const SimConfig cfg = resolve_config(g);
  const auto src = cfg.source();
  const auto grating = cfg.grating();
  const double z = cfg.z;
  if (!(z > 0.0)) throw DomainError("z must be positive");
  const double lambda = length_or(a.lambda, src.lambda0);
  const auto xs = linspace(length_or(a.x_min, -grating.d), length_or(a.x_max, grating.d), a.points);
  OracleOptions opt;
  opt.max_steps = static_cast<std::int64_t>(a.cap);
  const double scale = oracle_intensity_scale(src, z);

  std::vector<OracleRow> rows(xs.size());
  parallel_for(xs.size(), resolve_exec(g), [&](std::size_t i) {
    rows[i] = {xs[i], scale * intensity(xs[i], lambda, src, grating, z),
               std::norm(fresnel_field(xs[i], lambda, src, grating, z, opt))};
  });
  const double peak = oracle_peak(rows);
  double max_err = 0.0;
  double se = 0.0;
  double so = 0.0;
  for (const auto& r : rows) {
    max_err = std::max(max_err, std::abs(r.analytic - r.oracle) / peak);
    se += (r.analytic - r.oracle) * (r.analytic - r.oracle);
    so += r.oracle * r.oracle;
  }
  with_output(g, [&](std::ostream& os) {
    write_header(os, "talbot_sim oracle", cfg,
                 {"analytic = (Z / z^2) * intensity; oracle = |fresnel_field|^2 over [-delta, delta]",
                  "relative_error = |analytic - oracle| / max(oracle)", "lambda = " + format_number(lambda) + " m"});
    write_oracle_csv(os, rows);
  });
  std::cout << "max_rel_err=" << format_number(max_err) << " rms_rel_err=" << format_number(std::sqrt(se / so))
            << '\n';
  return kOk;
}

struct AnalyzeArgs {
  std::string z_lo, z_hi;
  int steps = 51;
};

int run_analyze(const GlobalOptions& g, const AnalyzeArgs& a) {
  const SimConfig cfg = resolve_config(g);
  const auto src = cfg.source();
  const auto grating = cfg.grating();
  const auto det = cfg.detection();
  const Exec exec = resolve_exec(g);
  ScanOptions opt;
  opt.spectral_samples = cfg.spectral_samples;
  opt.spectral_span = cfg.spectral_span;
  opt.exec = exec;
  const Pattern p = scan(src, grating, det, opt);
  const double period = grating.d * magnification(det.z, src.z0);
  const double lt = talbot_length(grating.d, src.lambda0);

  std::ostringstream report;
  report << "visibility = " << format_number(visibility(p)) << '\n';
  try {
    report << "fringe_fraction = " << format_number(fringe_width_fraction(p, period)) << '\n';
  } catch (const DomainError& e) {
    report << "fringe_fraction = n/a  # " << e.what() << '\n';
  }
  try {
    RevivalOptions ro;
    ro.exec = exec;
    const auto r = revival_distance(src, grating, src.lambda0, length_or(a.z_lo, 0.5 * lt),
                                    length_or(a.z_hi, 1.5 * lt), a.steps, ro);
    report << "revival_mm = " << format_number(r.z * 1e3) << '\n';
    report << "revival_score = " << format_number(r.score) << '\n';
  } catch (const DomainError& e) {
    report << "revival_mm = n/a  # " << e.what() << '\n';
  }
  report << "talbot_length_mm = " << format_number(lt * 1e3) << '\n';
  report << "magnified_period_m = " << format_number(period) << '\n';

  with_output(g, [&](std::ostream& os) {
    write_header(os, "talbot_sim analyze", cfg, {scan_note(cfg)});
    os << report.str();
  });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Near-field (Talbot) diffraction simulator for a programmable grating"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "key = value config file");
  app.add_option("--out", g.out_path, "output file (stdout if omitted; mask default slm_mask.pgm)");
  app.add_option("--threads", g.threads, "worker threads (0 = all cores; env TALBOT_SIM_THREADS)");

  auto* scan_cmd = app.add_subcommand("scan", "slit scan CSV: x_over_d, x_m, rate_normalized, rate_raw");
  add_config_flags(scan_cmd, g);

  CarpetArgs carpet_args;
  auto* carpet_cmd = app.add_subcommand("carpet", "intensity over an (x, z) grid as a CSV matrix");
  add_config_flags(carpet_cmd, g);
  carpet_cmd->add_option("--x_min", carpet_args.x_min, "first x [length, default -d]");
  carpet_cmd->add_option("--x_max", carpet_args.x_max, "last x [length, default d]");
  carpet_cmd->add_option("--nx", carpet_args.nx, "x samples")->check(CLI::PositiveNumber);
  carpet_cmd->add_option("--z_min", carpet_args.z_min, "first z [length, default z_max/nz]");
  carpet_cmd->add_option("--z_max", carpet_args.z_max, "last z [length, default 2 d^2/lambda]");
  carpet_cmd->add_option("--nz", carpet_args.nz, "z samples")->check(CLI::PositiveNumber);
  carpet_cmd->add_option("--lambda", carpet_args.lambda, "wavelength [length, default lambda0]");
  carpet_cmd->add_flag("--normalize", carpet_args.normalize, "scale each z slice to max one");

  MaskArgs mask_args;
  auto* mask_cmd = app.add_subcommand("mask", "SLM grating mask as binary PGM");
  add_config_flags(mask_cmd, g);
  mask_cmd->add_option("--width_px", mask_args.profile.width_px, "SLM width [pixels]");
  mask_cmd->add_option("--height_px", mask_args.profile.height_px, "SLM height [pixels]");
  mask_cmd->add_option("--pitch", mask_args.pitch, "pixel pitch [length, default 36um]");
  mask_cmd->add_option("--gray_open", mask_args.profile.gray_open, "gray level of open columns [0-255]");
  mask_cmd->add_option("--gray_closed", mask_args.profile.gray_closed, "gray level of closed columns [0-255]");

  std::uint64_t seed = 0;
  double events = 1000.0;
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo photon counts CSV: x_over_d, counts, error");
  add_config_flags(mc_cmd, g);
  mc_cmd->add_option("--seed", seed, "64-bit RNG seed")->required();
  mc_cmd->add_option("--events", events, "expected counts at the pattern maximum");

  OracleArgs oracle_args;
  auto* oracle_cmd = app.add_subcommand("oracle", "analytic vs Fresnel quadrature CSV and max_rel_err summary");
  add_config_flags(oracle_cmd, g);
  oracle_cmd->add_option("--x_min", oracle_args.x_min, "first probe [length, default -d]");
  oracle_cmd->add_option("--x_max", oracle_args.x_max, "last probe [length, default d]");
  oracle_cmd->add_option("--points", oracle_args.points, "probe count")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--lambda", oracle_args.lambda, "wavelength [length, default lambda0]");
  oracle_cmd->add_option("--cap", oracle_args.cap, "quadrature step cap per probe");

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "visibility, fringe width fraction, revival distance report");
  add_config_flags(analyze_cmd, g);
  analyze_cmd->add_option("--z_lo", analyze_args.z_lo, "revival search start [length, default 0.5 d^2/lambda]");
  analyze_cmd->add_option("--z_hi", analyze_args.z_hi, "revival search end [length, default 1.5 d^2/lambda]");
  analyze_cmd->add_option("--steps", analyze_args.steps, "revival grid points (>= 16)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*scan_cmd) return run_scan(g);
    if (*carpet_cmd) return run_carpet(g, carpet_args);
    if (*mask_cmd) return run_mask(g, mask_args);
    if (*mc_cmd) return run_mc(g, seed, events);
    if (*oracle_cmd) return run_oracle(g, oracle_args);
    if (*analyze_cmd) return run_analyze(g, analyze_args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const ResolutionError& e) {
    std::cerr << "resolution error: " << e.what() << '\n';
    return kResolution;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
