#pragma once

#include <cstdint>
#include <string>

#include "kevt/dynamics.hpp"
#include "kevt/evt.hpp"
#include "kevt/observables.hpp"

namespace kevt {

enum class Tail { Frechet, Weibull };

/// Which result produced a prediction.
///  LemmaA/LemmaB: caller-supplied g and extremal indices.
///  Thm5a/Thm5b:   k-exceedances at an invariant set, g = lambda^-(k-1)alpha.
///  Thm7:          k-averages at a non-recurrent point, g = k^(xi-1), theta ratio 1/k.
///  Thm8:          k-averages at the doubling-map fixed point.
enum class Rule { LemmaA, LemmaB, Thm5a, Thm5b, Thm7, Thm8 };

std::string to_string(Rule r);

/// Base GEV fit of the series plus the scaling data relating its
/// normalizing thresholds to those of the windowed functional:
/// w_n = g u_n.
struct ScalingInput {
  GevParams base;
  double theta1 = 1.0;
  double theta2 = 1.0;
  double g = 1.0;
  Tail tail = Tail::Frechet;
};

struct ScalingPrediction {
  GevParams derived;
  double theta2 = 1.0;
  double g_used = 1.0;
  Rule rule = Rule::LemmaA;
};

/// mu2 = g mu1 r^xi1, sigma2 = g sigma1 r^xi1, xi2 = xi1 with r = theta2/theta1.
ScalingPrediction predict_frechet(const ScalingInput& in);

/// mu2 = sigma1/xi1 (g - 1) + mu1 - (g sigma1/xi1)(1 - r^xi1),
/// sigma2 = g sigma1 r^xi1, xi2 = xi1.
ScalingPrediction predict_weibull(const ScalingInput& in);

/// lambda^-(k-1) alpha.
double g_invariant_exceedance(double lambda, double alpha, int k);

/// k^(xi-1).
double g_generic_average(double xi, int k);

/// Tail constant of the k-average at the doubling fixed point:
/// P(Y0 >= u) ~ c1(k) (k u)^(-1/alpha), with z = 2^-alpha,
/// c1(k) = 2 ((1 - z^k)/(1 - z))^(1/alpha) + sum_{j=1}^{k-1} ((1 - z^j)/(1 - z))^(1/alpha).
double c1_constant(double alpha, int k);

/// (1/k) (c1(k)/2)^alpha.
double g_double0_average(double alpha, int k);

/// Extremal index of the k-average at the doubling fixed point,
/// ((1 - z^k)/(1 - z))^(1/alpha) / c1(k); equals 1/2 at k = 1.
double ei_double0_average(double alpha, int k);

struct TailOracleResult {
  double p_exceed = 0.0;
  double theta_ratio = 0.0;
  std::size_t n_exceed = 0;
};

/// Monte-Carlo estimate of P(Y0 > u) and P(Y0 > u, Y0 o T <= u)/P(Y0 > u) for
/// Y0 the k-average of d(x, 0)^-alpha along exact doubling-map orbits, x
/// uniform. Requires k u > 2^(2 k alpha).
TailOracleResult tail_measure_oracle(double alpha, int k, double u, std::size_t n_samples,
                                     std::uint64_t seed);

/// Picks the applicable result for (map, observable, functional) and
/// predicts the GEV of the windowed series from the base-series fit. Both
/// extremal indices come from theoretical_ei.
ScalingPrediction predict_for_functional(const MapModel& map, const Observable& obs,
                                         Functional f, const GevParams& base);

}  // namespace kevt
