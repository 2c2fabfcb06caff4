#pragma once

#include <array>
#include <optional>
#include <span>

namespace kevt {

/// Generalized extreme value parameters. Support is
/// {y : 1 + xi (y - mu) / sigma > 0}.
struct GevParams {
  double mu = 0.0;
  double sigma = 1.0;
  double xi = 0.0;
};

/// Below this |xi| the Gumbel form is used.
inline constexpr double kGumbelSwitch = 1e-8;

double gev_cdf(const GevParams& p, double y);

/// Log density; -inf outside the support.
double gev_log_pdf(const GevParams& p, double y);

/// z_p with G(z_p) = 1 - prob, i.e. the level exceeded with probability
/// `prob` per block (return period 1/prob blocks).
double return_level(const GevParams& p, double prob);

/// Parameters of G^theta, theta in (0, 1].
GevParams power_transform(const GevParams& p, double theta);

/// Parameters of t -> G(gamma t), gamma > 0.
GevParams rescale_transform(const GevParams& p, double gamma);

/// Negative log-likelihood; +inf when any sample falls outside the support
/// or sigma <= 0.
double gev_nll(const GevParams& p, std::span<const double> sample);

struct FitResult {
  GevParams params;
  double neg_log_likelihood = 0.0;
  bool converged = false;
  std::size_t n_samples = 0;
  /// Asymptotic standard errors of (mu, sigma, xi) from the observed
  /// information, when the Hessian is positive definite.
  std::optional<std::array<double, 3>> stderrs;

  /// Shape at or below -1/2: likelihood regularity does not hold.
  bool irregular_shape() const noexcept { return params.xi <= -0.5; }
};

/// Maximum-likelihood GEV fit of block maxima by downhill simplex over
/// (mu, log sigma, xi), started from Gumbel moment estimates.
/// Throws InsufficientData below kMinFitSamples samples, DegenerateInput for constant data.
FitResult fit_gev_mle(std::span<const double> maxima);

inline constexpr std::size_t kMinFitSamples = 5;

/// xi mu / sigma; close to 1 for pure Frechet maxima without a shift.
double frechet_consistency(const GevParams& p);

}  // namespace kevt
