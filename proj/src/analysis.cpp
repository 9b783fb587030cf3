#include "talbot/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "talbot/errors.hpp"
#include "talbot/grating.hpp"
#include "talbot/propagation.hpp"

namespace talbot {

double visibility(const Pattern& p) {
  if (p.values.empty()) throw DomainError("visibility of an empty pattern");
  const auto [lo, hi] = std::minmax_element(p.values.begin(), p.values.end());
  if (*lo < 0.0) throw DomainError("visibility: negative pattern value");
  if (!(*hi > 0.0)) throw DomainError("visibility of an all-zero pattern");
  return (*hi - *lo) / (*hi + *lo);
}

std::vector<double> fringe_widths(const Pattern& p) {
  p.check();
  std::vector<double> widths;
  if (p.size() < 2) return widths;
  const auto [lo, hi] = std::minmax_element(p.values.begin(), p.values.end());
  if (*hi == *lo) return widths;
  const double level = 0.5 * (*hi + *lo);
  const auto& x = p.positions;
  const auto& v = p.values;

  auto crossing = [&](std::size_t i) {
    return x[i] + (level - v[i]) / (v[i + 1] - v[i]) * (x[i + 1] - x[i]);
  };
  double rise = 0.0;
  bool rising_seen = false;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (v[i] < level && v[i + 1] >= level) {
      rise = crossing(i);
      rising_seen = true;
    } else if (v[i] >= level && v[i + 1] < level && rising_seen) {
      widths.push_back(crossing(i) - rise);
      rising_seen = false;
    }
  }
  return widths;
}

double fringe_width_fraction(const Pattern& p, double period) {
  if (!(period > 0.0)) throw DomainError("period must be positive");
  const auto widths = fringe_widths(p);
  if (widths.size() < 2) throw DomainError("insufficient fringes");
  const double mean = std::accumulate(widths.begin(), widths.end(), 0.0) / static_cast<double>(widths.size());
  return mean / period;
}

namespace {

std::size_t samples_for(const GratingSpec& g, const RevivalOptions& opt) {
  return opt.samples_per_period ? opt.samples_per_period : 8 * static_cast<std::size_t>(g.trunc + 1);
}

// Mean-removed copy and its L2 norm.
double center(std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double& e : v) {
    e -= mean;
    ss += e * e;
  }
  return std::sqrt(ss);
}

class RevivalScorer {
 public:
  RevivalScorer(const SourceSpec& src, const GratingSpec& g, double lambda, const RevivalOptions& opt)
      : src_(src), g_(g), lambda_(lambda), K_(samples_for(g, opt)), reference_(K_), coeffs_(fourier_coefficients(g)),
        roots_(K_) {
    // The magnified grating image sampled at x_j / M = j d / K does not depend on z.
    for (std::size_t j = 0; j < K_; ++j) {
      const double t = truncated_transmission(static_cast<double>(j) * g.d / static_cast<double>(K_), g);
      reference_[j] = t * t;
      roots_[j] = std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(K_));
    }
    ref_norm_ = center(reference_);
  }

  double operator()(double z) const {
    // At x_j = j M d / K the field is sum_n A_n e^{i n^2 phi} e^{2 pi i n j / K}.
    const double phi = kPi * lambda_ * effective_distance(z, src_.z0) / (g_.d * g_.d);
    const long n_max = g_.trunc;
    const long K = static_cast<long>(K_);
    std::vector<std::complex<double>> c(coeffs_.size());
    for (long n = -n_max; n <= n_max; ++n) {
      const double arg = std::remainder(static_cast<double>(n * n) * phi, kTwoPi);
      c[static_cast<std::size_t>(n + n_max)] = coeffs_[static_cast<std::size_t>(n + n_max)] * std::polar(1.0, arg);
    }
    std::vector<double> image(K_);
    for (long j = 0; j < K; ++j) {
      std::complex<double> field = 0.0;
      for (long n = -n_max; n <= n_max; ++n) {
        const long r = ((n * j) % K + K) % K;
        field += c[static_cast<std::size_t>(n + n_max)] * roots_[static_cast<std::size_t>(r)];
      }
      image[static_cast<std::size_t>(j)] = std::norm(field);
    }
    const double image_norm = center(image);
    if (ref_norm_ < 1e-12 || image_norm < 1e-12 * std::sqrt(static_cast<double>(K_))) return 0.0;
    double best = -1.0;
    for (std::size_t s = 0; s < K_; ++s) {
      double acc = 0.0;
      for (std::size_t j = 0; j < K_; ++j) acc += image[j] * reference_[(j + s) % K_];
      best = std::max(best, acc);
    }
    return best / (image_norm * ref_norm_);
  }

 private:
  SourceSpec src_;
  GratingSpec g_;
  double lambda_;
  std::size_t K_;
  std::vector<double> reference_;
  std::vector<double> coeffs_;
  std::vector<std::complex<double>> roots_;
  double ref_norm_ = 0.0;
};

}  // namespace

double revival_score(const SourceSpec& src, const GratingSpec& g, double lambda, double z,
                     const RevivalOptions& opt) {
  src.validate();
  g.validate();
  return RevivalScorer(src, g, lambda, opt)(z);
}

RevivalResult revival_distance(const SourceSpec& src, const GratingSpec& g, double lambda, double z_lo,
                               double z_hi, int steps, const RevivalOptions& opt) {
  src.validate();
  g.validate();
  if (!(z_lo > 0.0) || !(z_lo < z_hi)) throw DomainError("revival search needs 0 < z_lo < z_hi");
  if (steps < 16) throw DomainError("revival search needs at least 16 steps");

  const RevivalScorer score(src, g, lambda, opt);
  const double dz = (z_hi - z_lo) / static_cast<double>(steps - 1);
  std::vector<double> scores(static_cast<std::size_t>(steps));
  parallel_for(scores.size(), opt.exec,
               [&](std::size_t i) { scores[i] = score(z_lo + static_cast<double>(i) * dz); });

  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  if (*hi - *lo < 1e-6) throw DomainError("no revival found");
  const auto best = static_cast<std::size_t>(hi - scores.begin());

  // Golden-section search for the maximum inside the neighbouring nodes.
  double a = z_lo + static_cast<double>(best == 0 ? 0 : best - 1) * dz;
  double b = z_lo + static_cast<double>(std::min(best + 1, scores.size() - 1)) * dz;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = score(c);
  double fd = score(d);
  while (b - a > opt.tolerance) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = score(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = score(d);
    }
  }
  RevivalResult result{0.5 * (a + b), 0.0};
  result.score = score(result.z);
  if (*hi > result.score) result = {z_lo + static_cast<double>(best) * dz, *hi};
  return result;
}

}  // namespace talbot
