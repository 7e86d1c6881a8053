#pragma once

#include "tensoropt/core/errors.hpp"
#include "tensoropt/optimizer/run.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace tensoropt::bench {

class FitError : public Error {
 public:
  using Error::Error;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  int k_lo = 0;
  int k_hi = 0;
  double rms = 0.0;  // residual RMS in log space
  int points = 0;
};

struct WindowPolicy {
  int drop_first = 2;
  double floor_factor = 100.0;     // drop gap <= floor_factor · eps_mach · max(1, |f*|)
  double f_star = 1.0;
  std::optional<double> shift;     // abscissa log(k + shift); default p + 1
};

/// Ordinary least squares y = a + b x; returns {b, a, rms}.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw FitError("least_squares: need >= 2 paired points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("least_squares: abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / static_cast<double>(n));
  return f;
}

/// Slope of log(gap) against log(k + shift) over the points that survive the
/// window policy: the first `drop_first` entries are skipped, as are gaps that
/// are non-finite or at the numerical floor. Needs at least 5 points.
inline RateFit fit_rate(const std::vector<int>& k, const std::vector<double>& gap, int p,
                        const WindowPolicy& policy = {}) {
  if (k.size() != gap.size()) throw FitError("fit_rate: k and gap lengths differ");
  const double shift = policy.shift.value_or(p + 1.0);
  const double floor = policy.floor_factor * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(policy.f_star));
  std::vector<double> lx, ly;
  RateFit fit;
  for (std::size_t i = static_cast<std::size_t>(std::max(policy.drop_first, 0)); i < k.size(); ++i) {
    const double g = gap[i];
    if (!std::isfinite(g) || g <= floor) continue;
    const double a = k[i] + shift;
    if (!(a > 0.0) || k[i] < 1) continue;
    if (lx.empty()) fit.k_lo = k[i];
    fit.k_hi = k[i];
    lx.push_back(std::log(a));
    ly.push_back(std::log(g));
  }
  if (lx.size() < 5) {
    throw FitError("fit_rate: only " + std::to_string(lx.size()) + " points above the numerical floor (need 5)");
  }
  const LineFit lf = least_squares(lx, ly);
  fit.slope = lf.slope;
  fit.intercept = lf.intercept;
  fit.rms = lf.rms;
  fit.points = static_cast<int>(lx.size());
  return fit;
}

inline RateFit fit_rate(const RunTrace& trace, int p, WindowPolicy policy = {}) {
  std::vector<int> k;
  std::vector<double> g;
  for (const auto& r : trace.records) {
    k.push_back(r.k);
    g.push_back(r.gap);
  }
  if (trace.f_star) policy.f_star = *trace.f_star;
  return fit_rate(k, g, p, policy);
}

}  // namespace tensoropt::bench
