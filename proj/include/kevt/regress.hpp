#pragma once

#include <span>
#include <vector>

namespace kevt {

/// y = m x + b by ordinary least squares.
struct LinFit {
  double m = 0.0;
  double b = 0.0;
  double r_squared = 0.0;
  std::vector<double> residuals;

  std::size_t n() const noexcept { return residuals.size(); }
  double predict(double x) const noexcept { return m * x + b; }
};

LinFit ols(std::span<const double> xs, std::span<const double> ys);

/// Fit of log mu2 against log k: slope is the power-law exponent of
/// g(k, T) for k-averages, intercept estimates log mu1.
LinFit estimate_g_exponent_average(std::span<const int> ks, std::span<const double> mu2s);

struct LambdaEstimate {
  double lambda = 0.0;
  double theta = 0.0;
  LinFit fit;
};

/// Fit of log mu2 against k - 1 for k-exceedances at an invariant set.
/// lambda = exp(-m / xi), theta = 1 - 1/lambda.
LambdaEstimate estimate_lambda_exceedance(std::span<const int> ks, std::span<const double> mu2s,
                                          double xi);

/// Fit of log g(k) = log(sigma2/sigma1) - xi log(theta2/theta1) against k - 1.
/// The predictor is g(k) = exp(b + m (k - 1)).
LinFit estimate_log_g(std::span<const int> ks, std::span<const double> sigma2s,
                      std::span<const double> theta2s, double xi, double sigma1, double theta1);

/// Fit of log P(X >= x_(j)) = log(j/n) against log x_(j) over the order
/// statistics above the `quantile_floor` empirical quantile. The slope
/// estimates minus the tail exponent (-1/xi for a Frechet tail).
LinFit fit_tail_power_law(std::span<const double> values, double quantile_floor = 0.95);

inline constexpr std::size_t kMinTailPoints = 50;

}  // namespace kevt
