#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "talbot/analysis.hpp"
#include "talbot/config.hpp"
#include "talbot/errors.hpp"
#include "talbot/fresnel_oracle.hpp"
#include "talbot/grating.hpp"
#include "talbot/model.hpp"
#include "talbot/photon_mc.hpp"
#include "talbot/propagation.hpp"

namespace py = pybind11;
using namespace talbot;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Near-field (Talbot) diffraction engine for a programmable binary grating";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ResolutionError>(m, "ResolutionError", PyExc_RuntimeError);

  py::class_<SourceSpec>(m, "SourceSpec")
      .def(py::init([](double lambda0, double beta, std::optional<double> z0, double delta) {
             SourceSpec s{lambda0, beta, z0, delta};
             s.validate();
             return s;
           }),
           py::arg("lambda0") = 810e-9, py::arg("beta") = 0.0, py::arg("z0") = py::none(),
           py::arg("delta") = 1e-3)
      .def_readwrite("lambda0", &SourceSpec::lambda0)
      .def_readwrite("beta", &SourceSpec::beta)
      .def_readwrite("z0", &SourceSpec::z0)
      .def_readwrite("delta", &SourceSpec::delta)
      .def_property_readonly("plane_wave", &SourceSpec::plane_wave)
      .def_property_readonly("divergence", &SourceSpec::divergence);

  py::class_<GratingSpec>(m, "GratingSpec")
      .def(py::init([](double d, double f, std::optional<int> trunc) {
             GratingSpec g{d, f, trunc ? *trunc : GratingSpec::default_trunc(f)};
             g.validate();
             return g;
           }),
           py::arg("d") = 360e-6, py::arg("f") = 0.1, py::arg("trunc") = py::none())
      .def_readwrite("d", &GratingSpec::d)
      .def_readwrite("f", &GratingSpec::f)
      .def_readwrite("trunc", &GratingSpec::trunc)
      .def_static("default_trunc", &GratingSpec::default_trunc);

  py::class_<DetectionSpec>(m, "DetectionSpec")
      .def(py::init([](double z, double slit_width, double scan_start, double scan_end, double scan_step) {
             DetectionSpec det{z, slit_width, scan_start, scan_end, scan_step};
             det.validate();
             return det;
           }),
           py::arg("z") = 0.16, py::arg("slit_width") = 115e-6, py::arg("scan_start") = -720e-6,
           py::arg("scan_end") = 720e-6, py::arg("scan_step") = 12e-6)
      .def_readwrite("z", &DetectionSpec::z)
      .def_readwrite("slit_width", &DetectionSpec::slit_width)
      .def_readwrite("scan_start", &DetectionSpec::scan_start)
      .def_readwrite("scan_end", &DetectionSpec::scan_end)
      .def_readwrite("scan_step", &DetectionSpec::scan_step)
      .def("positions", [](const DetectionSpec& d) { return to_array(d.positions()); });

  py::class_<Pattern>(m, "Pattern")
      .def_property_readonly("positions", [](const Pattern& p) { return to_array(p.positions); })
      .def_property_readonly("values", [](const Pattern& p) { return to_array(p.values); })
      .def_property_readonly("normalized", [](const Pattern& p) { return p.norm == PatternNorm::max_one; })
      .def("__len__", &Pattern::size);

  py::class_<Carpet>(m, "Carpet")
      .def_property_readonly("x_axis", [](const Carpet& c) { return to_array(c.x_axis); })
      .def_property_readonly("z_axis", [](const Carpet& c) { return to_array(c.z_axis); })
      .def_property_readonly("values", [](const Carpet& c) {
        py::array_t<double> a({c.z_axis.size(), c.x_axis.size()});
        std::copy(c.values.begin(), c.values.end(), a.mutable_data());
        return a;
      });

  py::class_<SlmProfile>(m, "SlmProfile")
      .def(py::init<>())
      .def_readwrite("width_px", &SlmProfile::width_px)
      .def_readwrite("height_px", &SlmProfile::height_px)
      .def_readwrite("pixel_pitch", &SlmProfile::pixel_pitch)
      .def_readwrite("gray_open", &SlmProfile::gray_open)
      .def_readwrite("gray_closed", &SlmProfile::gray_closed);

  m.def("talbot_length", &talbot_length, py::arg("d"), py::arg("wavelength"));
  m.def("effective_distance", &effective_distance, py::arg("z"), py::arg("z0") = py::none());
  m.def("magnification", &magnification, py::arg("z"), py::arg("z0") = py::none());
  m.def("source_distance_for", &source_distance_for, py::arg("z"), py::arg("effective"));
  m.def("beta_from_fwhm", &beta_from_fwhm, py::arg("fwhm"));
  m.def(
      "spectral_grid",
      [](const SourceSpec& s, int samples, double span) {
        std::vector<std::pair<double, double>> out;
        for (const auto& e : spectral_grid(s, samples, span)) out.emplace_back(e.lambda, e.weight);
        return out;
      },
      py::arg("source"), py::arg("samples") = 41, py::arg("span_sigmas") = 3.0);
  m.def("reference_source", &ReferenceSetup::source, "Source of the reference experiment (derived z0)");
  m.def("reference_grating", &ReferenceSetup::grating, py::arg("f"));
  m.def("reference_detection", &ReferenceSetup::detection);

  m.def("fourier_coefficient", &fourier_coefficient, py::arg("n"), py::arg("f"));
  m.def("binary_transmission", &binary_transmission, py::arg("x"), py::arg("grating"));
  m.def("truncated_transmission", &truncated_transmission, py::arg("x"), py::arg("grating"));
  m.def(
      "render_slm_mask",
      [](const GratingSpec& g, const SlmProfile& p) {
        const GrayImage img = render_slm_mask(g, p);
        py::array_t<std::uint8_t> a({img.height, img.width});
        std::copy(img.pixels.begin(), img.pixels.end(), a.mutable_data());
        return a;
      },
      py::arg("grating"), py::arg("profile") = SlmProfile{});

  m.def("intensity", &intensity, py::arg("x"), py::arg("wavelength"), py::arg("source"), py::arg("grating"),
        py::arg("z"));
  m.def("slit_rate", &slit_rate, py::arg("X"), py::arg("wavelength"), py::arg("source"), py::arg("grating"),
        py::arg("detection"));
  m.def(
      "polychromatic_rate",
      [](double X, const SourceSpec& s, const GratingSpec& g, const DetectionSpec& det, int samples, double span) {
        const auto grid = spectral_grid(s, samples, span);
        return polychromatic_rate(X, s, g, det, grid);
      },
      py::arg("X"), py::arg("source"), py::arg("grating"), py::arg("detection"), py::arg("samples") = 41,
      py::arg("span_sigmas") = 3.0);
  m.def(
      "scan",
      [](const SourceSpec& s, const GratingSpec& g, const DetectionSpec& det, int samples, bool normalize,
         unsigned threads) {
        ScanOptions opt;
        opt.spectral_samples = samples;
        opt.norm = normalize ? PatternNorm::max_one : PatternNorm::raw;
        opt.exec = Exec{threads};
        py::gil_scoped_release release;
        return scan(s, g, det, opt);
      },
      py::arg("source"), py::arg("grating"), py::arg("detection"), py::arg("samples") = 41,
      py::arg("normalize") = true, py::arg("threads") = 1);
  m.def(
      "carpet",
      [](const SourceSpec& s, const GratingSpec& g, const std::vector<double>& xs, const std::vector<double>& zs,
         double lambda, bool normalize, unsigned threads) {
        py::gil_scoped_release release;
        return carpet(s, g, xs, zs, lambda, normalize ? CarpetNorm::per_column_max_one : CarpetNorm::raw,
                      Exec{threads});
      },
      py::arg("source"), py::arg("grating"), py::arg("x_grid"), py::arg("z_grid"), py::arg("wavelength"),
      py::arg("normalize") = false, py::arg("threads") = 1);

  m.def(
      "fresnel_field",
      [](double x, double lambda, const SourceSpec& s, const GratingSpec& g, double z, std::int64_t max_steps) {
        OracleOptions opt;
        opt.max_steps = max_steps;
        py::gil_scoped_release release;
        return fresnel_field(x, lambda, s, g, z, opt);
      },
      py::arg("x"), py::arg("wavelength"), py::arg("source"), py::arg("grating"), py::arg("z"),
      py::arg("max_steps") = 10'000'000);
  m.def("oracle_intensity_scale", &oracle_intensity_scale, py::arg("source"), py::arg("z"));

  m.def(
      "simulate_scan",
      [](std::uint64_t seed, double events, const SourceSpec& s, const GratingSpec& g, const DetectionSpec& det,
         int samples) {
        McRun run;
        run.seed = seed;
        run.events_per_point = events;
        run.source = s;
        run.grating = g;
        run.scan = det;
        run.spectral_samples = samples;
        McPattern mc;
        {
          py::gil_scoped_release release;
          mc = simulate_scan(run);
        }
        py::dict out;
        out["positions"] = to_array(mc.positions);
        out["counts"] = mc.counts;
        out["errors"] = to_array(mc.errors);
        out["expected"] = to_array(mc.expected);
        out["seed"] = mc.seed;
        return out;
      },
      py::arg("seed"), py::arg("events_per_point"), py::arg("source"), py::arg("grating"), py::arg("detection"),
      py::arg("samples") = 41);

  m.def("visibility", &visibility, py::arg("pattern"));
  m.def("fringe_width_fraction", &fringe_width_fraction, py::arg("pattern"), py::arg("period"));
  m.def(
      "revival_distance",
      [](const SourceSpec& s, const GratingSpec& g, double lambda, double z_lo, double z_hi, int steps) {
        py::gil_scoped_release release;
        return revival_distance(s, g, lambda, z_lo, z_hi, steps).z;
      },
      py::arg("source"), py::arg("grating"), py::arg("wavelength"), py::arg("z_lo"), py::arg("z_hi"),
      py::arg("steps") = 51);

  m.def("parse_length", &parse_length, py::arg("text"));
}
