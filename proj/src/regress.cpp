#include "kevt/regress.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "kevt/error.hpp"

namespace kevt {
namespace {

double checked_log(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw InvalidInput(std::string(what) + " must be positive and finite for a log fit");
  return std::log(v);
}

}  // namespace

LinFit ols(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidInput("ols: xs and ys differ in length");
  const std::size_t n = xs.size();
  if (n < 2) throw DegenerateInput("ols needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw DegenerateInput("ols: all x values are equal");

  LinFit fit;
  fit.m = sxy / sxx;
  fit.b = my - fit.m * mx;
  fit.residuals.resize(n);
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    fit.residuals[i] = ys[i] - fit.predict(xs[i]);
    sse += fit.residuals[i] * fit.residuals[i];
  }
  // Constant y is a perfect (flat) fit.
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  if (syy > 0.0 && sse <= 1e-24 * syy) fit.r_squared = 1.0;
  return fit;
}

LinFit estimate_g_exponent_average(std::span<const int> ks, std::span<const double> mu2s) {
  if (ks.size() != mu2s.size()) throw InvalidInput("ks and mu2s differ in length");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < 1) throw InvalidInput("window lengths must be >= 1");
    x.push_back(std::log(static_cast<double>(ks[i])));
    y.push_back(checked_log(mu2s[i], "mu2"));
  }
  return ols(x, y);
}

LambdaEstimate estimate_lambda_exceedance(std::span<const int> ks, std::span<const double> mu2s,
                                          double xi) {
  if (xi == 0.0) throw InvalidInput("shape xi must be nonzero");
  if (ks.size() != mu2s.size()) throw InvalidInput("ks and mu2s differ in length");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < 1) throw InvalidInput("window lengths must be >= 1");
    x.push_back(static_cast<double>(ks[i] - 1));
    y.push_back(checked_log(mu2s[i], "mu2"));
  }
  LambdaEstimate est;
  est.fit = ols(x, y);
  est.lambda = std::exp(-est.fit.m / xi);
  est.theta = 1.0 - 1.0 / est.lambda;
  return est;
}

LinFit estimate_log_g(std::span<const int> ks, std::span<const double> sigma2s,
                      std::span<const double> theta2s, double xi, double sigma1, double theta1) {
  if (ks.size() != sigma2s.size() || ks.size() != theta2s.size())
    throw InvalidInput("ks, sigma2s and theta2s differ in length");
  const double ls1 = checked_log(sigma1, "sigma1");
  const double lt1 = checked_log(theta1, "theta1");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < 1) throw InvalidInput("window lengths must be >= 1");
    x.push_back(static_cast<double>(ks[i] - 1));
    y.push_back((checked_log(sigma2s[i], "sigma2") - ls1) -
                xi * (checked_log(theta2s[i], "theta2") - lt1));
  }
  return ols(x, y);
}

LinFit fit_tail_power_law(std::span<const double> values, double quantile_floor) {
  if (!(quantile_floor >= 0.0 && quantile_floor < 1.0))
    throw InvalidInput("quantile floor must lie in [0, 1)");
  std::vector<double> v(values.begin(), values.end());
  if (v.empty()) throw InsufficientData("empty sample");
  std::sort(v.begin(), v.end(), std::greater<>());
  const double n = static_cast<double>(v.size());
  // Floor: type-7 quantile of the sample.
  const double h = quantile_floor * (n - 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  // v is descending; ascending index i maps to v[size-1-i].
  const double qlo = v[v.size() - 1 - lo];
  const double qhi = v[v.size() - 1 - hi];
  const double floor_value = qlo + (h - static_cast<double>(lo)) * (qhi - qlo);

  std::vector<double> x, y;
  for (std::size_t j = 0; j < v.size() && v[j] > floor_value; ++j) {
    x.push_back(checked_log(v[j], "tail value"));
    y.push_back(std::log(static_cast<double>(j + 1) / n));
  }
  if (x.size() < kMinTailPoints)
    throw InsufficientData("tail fit needs at least " + std::to_string(kMinTailPoints) +
                           " points above the floor");
  return ols(x, y);
}

}  // namespace kevt
