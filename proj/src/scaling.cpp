#include "kevt/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kevt/ei.hpp"
#include "kevt/error.hpp"
#include "kevt/rng.hpp"

namespace kevt {

std::string to_string(Rule r) {
  switch (r) {
    case Rule::LemmaA: return "LemmaA";
    case Rule::LemmaB: return "LemmaB";
    case Rule::Thm5a: return "Thm5a";
    case Rule::Thm5b: return "Thm5b";
    case Rule::Thm7: return "Thm7";
    case Rule::Thm8: return "Thm8";
  }
  return "?";
}

namespace {

void check_common(const ScalingInput& in) {
  if (!(in.g > 0.0)) throw InvalidInput("scaling factor g must be positive");
  if (!(in.theta1 > 0.0 && in.theta1 <= 1.0) || !(in.theta2 > 0.0 && in.theta2 <= 1.0))
    throw InvalidInput("extremal indices must lie in (0, 1]");
  if (!(in.base.sigma > 0.0)) throw InvalidInput("base scale must be positive");
}

// (1 - z^j)/(1 - z) evaluated as expm1 ratios so large j and z near 1 stay accurate.
double geometric_ratio(double alpha, int j) {
  const double lz = -alpha * std::numbers::ln2;
  return std::expm1(static_cast<double>(j) * lz) / std::expm1(lz);
}

}  // namespace

ScalingPrediction predict_frechet(const ScalingInput& in) {
  if (!(in.base.xi > 0.0)) throw WrongTail("Frechet scaling requires xi1 > 0");
  check_common(in);
  const double f = in.g * std::pow(in.theta2 / in.theta1, in.base.xi);
  return {{in.base.mu * f, in.base.sigma * f, in.base.xi}, in.theta2, in.g, Rule::LemmaA};
}

ScalingPrediction predict_weibull(const ScalingInput& in) {
  if (!(in.base.xi < 0.0)) throw WrongTail("Weibull scaling requires xi1 < 0");
  check_common(in);
  const auto& b = in.base;
  const double r = std::pow(in.theta2 / in.theta1, b.xi);
  const double mu2 = b.sigma / b.xi * (in.g - 1.0) + b.mu - (in.g * b.sigma / b.xi) * (1.0 - r);
  return {{mu2, in.g * b.sigma * r, b.xi}, in.theta2, in.g, Rule::LemmaB};
}

double g_invariant_exceedance(double lambda, double alpha, int k) {
  if (!(lambda > 1.0)) throw InvalidInput("expansion rate must exceed 1");
  if (alpha == 0.0) throw InvalidInput("alpha must be nonzero");
  if (k < 1) throw InvalidInput("window length k must be >= 1");
  return std::pow(lambda, -(k - 1) * alpha);
}

double g_generic_average(double xi, int k) {
  if (!(xi > 0.0)) throw WrongTail("generic average scaling requires xi > 0");
  if (k < 1) throw InvalidInput("window length k must be >= 1");
  return std::pow(static_cast<double>(k), xi - 1.0);
}

double c1_constant(double alpha, int k) {
  if (!(alpha > 0.0)) throw InvalidInput("alpha must be positive");
  if (k < 1) throw InvalidInput("window length k must be >= 1");
  const double inv = 1.0 / alpha;
  double c = 2.0 * std::pow(geometric_ratio(alpha, k), inv);
  for (int j = 1; j < k; ++j) c += std::pow(geometric_ratio(alpha, j), inv);
  return c;
}

double g_double0_average(double alpha, int k) {
  return std::pow(c1_constant(alpha, k) / 2.0, alpha) / static_cast<double>(k);
}

double ei_double0_average(double alpha, int k) {
  if (!(alpha > 0.0)) throw InvalidInput("alpha must be positive");
  if (k < 1) throw InvalidInput("window length k must be >= 1");
  const double theta = std::pow(geometric_ratio(alpha, k), 1.0 / alpha) / c1_constant(alpha, k);
  return std::clamp(theta, std::numeric_limits<double>::min(), 1.0);
}

TailOracleResult tail_measure_oracle(double alpha, int k, double u, std::size_t n_samples,
                                     std::uint64_t seed) {
  if (!(alpha > 0.0)) throw InvalidInput("alpha must be positive");
  if (k < 1) throw InvalidInput("window length k must be >= 1");
  if (n_samples == 0) throw InvalidInput("n_samples must be positive");
  if (!(k * u > std::pow(2.0, 2.0 * k * alpha)))
    throw InvalidInput("threshold outside the asymptotic regime: need k u > 2^(2 k alpha)");

  const auto phi = [alpha](double x) {
    double d = std::min(x, 1.0 - x);
    if (d <= 0.0) d = kSaturationDistance;
    return alpha == 1.0 ? 1.0 / d : std::pow(d, -alpha);
  };
  const CounterStream rng(seed, 0);
  const std::size_t kk = static_cast<std::size_t>(k);
  std::vector<double> vals(kk + 1);
  std::size_t exceed = 0;
  std::size_t starts = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    double x = rng.uniform(i / 2, static_cast<unsigned>(i % 2));
    for (std::size_t j = 0; j <= kk; ++j) {
      vals[j] = phi(x);
      x = wrap_unit(2.0 * x);
    }
    double y0 = 0.0;
    for (std::size_t j = 0; j < kk; ++j) y0 += vals[j];
    const double y1 = (y0 - vals[0] + vals[kk]) / static_cast<double>(k);
    y0 /= static_cast<double>(k);
    if (y0 > u) {
      ++exceed;
      if (y1 <= u) ++starts;
    }
  }
  if (exceed == 0) throw InsufficientData("no oracle samples exceeded the threshold");
  return {static_cast<double>(exceed) / static_cast<double>(n_samples),
          static_cast<double>(starts) / static_cast<double>(exceed), exceed};
}

ScalingPrediction predict_for_functional(const MapModel& map, const Observable& obs,
                                         Functional f, const GevParams& base) {
  const TargetSet& target = target_of(obs);
  const double alpha = alpha_of(obs);
  const bool frechet_tail = is_frechet(obs);
  const Functional base_f = Functional::exceedance(1);
  const double theta1 = theoretical_ei(map, target, base_f, obs);
  const double theta2 = theoretical_ei(map, target, f, obs);

  ScalingInput in{base, theta1, theta2, 1.0, frechet_tail ? Tail::Frechet : Tail::Weibull};
  Rule rule;
  if (f.k == 1 || f.kind == Functional::Kind::Exceedance) {
    // Exceedances are only covered at invariant sets; theoretical_ei threw otherwise
    // unless k == 1.
    const bool invariant =
        std::holds_alternative<SynchronyDiagonal>(target) ||
        is_fixed_point(map, std::get<PointTarget>(target).x0);
    in.g = invariant ? g_invariant_exceedance(expansion_rate(map, target), alpha, f.k) : 1.0;
    rule = frechet_tail ? Rule::Thm5a : Rule::Thm5b;
  } else if (std::holds_alternative<PointTarget>(target) &&
             !is_fixed_point(map, std::get<PointTarget>(target).x0)) {
    in.g = g_generic_average(base.xi, f.k);
    rule = Rule::Thm7;
  } else {
    in.g = g_double0_average(alpha, f.k);
    rule = Rule::Thm8;
  }
  ScalingPrediction p = frechet_tail ? predict_frechet(in) : predict_weibull(in);
  p.rule = rule;
  return p;
}

}  // namespace kevt
