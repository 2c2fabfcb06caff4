#include "kevt/evt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "kevt/error.hpp"
#include "kevt/optim.hpp"

namespace kevt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_gumbel(double xi) noexcept { return std::fabs(xi) < kGumbelSwitch; }

}  // namespace

double gev_cdf(const GevParams& p, double y) {
  const double z = (y - p.mu) / p.sigma;
  if (is_gumbel(p.xi)) return std::exp(-std::exp(-z));
  const double t = 1.0 + p.xi * z;
  if (t <= 0.0) return p.xi > 0.0 ? 0.0 : 1.0;
  return std::exp(-std::pow(t, -1.0 / p.xi));
}

double gev_log_pdf(const GevParams& p, double y) {
  if (!(p.sigma > 0.0)) return -kInf;
  const double z = (y - p.mu) / p.sigma;
  if (is_gumbel(p.xi)) return -std::log(p.sigma) - z - std::exp(-z);
  const double t = 1.0 + p.xi * z;
  if (t <= 0.0) return -kInf;
  const double lt = std::log(t);
  return -std::log(p.sigma) - (1.0 + 1.0 / p.xi) * lt - std::exp(-lt / p.xi);
}

double return_level(const GevParams& p, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) throw InvalidInput("return level probability must lie in (0, 1)");
  const double yp = -std::log1p(-prob);
  if (is_gumbel(p.xi)) return p.mu - p.sigma * std::log(yp);
  return p.mu - p.sigma / p.xi * (1.0 - std::pow(yp, -p.xi));
}

GevParams power_transform(const GevParams& p, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw InvalidInput("theta must lie in (0, 1]");
  if (is_gumbel(p.xi)) return {p.mu + p.sigma * std::log(theta), p.sigma, p.xi};
  const double tx = std::pow(theta, p.xi);
  return {p.mu - p.sigma / p.xi * (1.0 - tx), p.sigma * tx, p.xi};
}

GevParams rescale_transform(const GevParams& p, double gamma) {
  if (!(gamma > 0.0)) throw InvalidInput("rescale factor must be positive");
  return {p.mu / gamma, p.sigma / gamma, p.xi};
}

double gev_nll(const GevParams& p, std::span<const double> sample) {
  if (!(p.sigma > 0.0) || !std::isfinite(p.mu) || !std::isfinite(p.xi)) return kInf;
  const double n = static_cast<double>(sample.size());
  const double inv_sigma = 1.0 / p.sigma;
  if (is_gumbel(p.xi)) {
    double s = 0.0;
    for (double y : sample) {
      const double z = (y - p.mu) * inv_sigma;
      s += z + std::exp(-z);
    }
    return n * std::log(p.sigma) + s;
  }
  const double inv_xi = 1.0 / p.xi;
  double sum_log = 0.0;
  double sum_pow = 0.0;
  for (double y : sample) {
    const double t = 1.0 + p.xi * (y - p.mu) * inv_sigma;
    if (!(t > 0.0)) return kInf;
    const double lt = std::log(t);
    sum_log += lt;
    sum_pow += std::exp(-inv_xi * lt);
  }
  const double v = n * std::log(p.sigma) + (1.0 + inv_xi) * sum_log + sum_pow;
  return std::isfinite(v) ? v : kInf;
}

namespace {

std::optional<std::array<double, 3>> observed_stderrs(const GevParams& p,
                                                      std::span<const double> sample) {
  const Eigen::Vector3d x0(p.mu, p.sigma, p.xi);
  const Eigen::Vector3d h(1e-4 * p.sigma, 1e-4 * p.sigma, 1e-4);
  auto f = [&](const Eigen::Vector3d& x) { return gev_nll({x[0], x[1], x[2]}, sample); };
  const double f0 = f(x0);
  Eigen::Matrix3d hess;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      Eigen::Vector3d ei = Eigen::Vector3d::Zero(), ej = Eigen::Vector3d::Zero();
      ei[i] = h[i];
      ej[j] = h[j];
      double v;
      if (i == j) {
        v = (f(x0 + ei) - 2.0 * f0 + f(x0 - ei)) / (h[i] * h[i]);
      } else {
        v = (f(x0 + ei + ej) - f(x0 + ei - ej) - f(x0 - ei + ej) + f(x0 - ei - ej)) /
            (4.0 * h[i] * h[j]);
      }
      hess(i, j) = hess(j, i) = v;
    }
  }
  if (!hess.allFinite()) return std::nullopt;
  const Eigen::LDLT<Eigen::Matrix3d> ldlt(hess);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      (ldlt.vectorD().array() <= 0.0).any())
    return std::nullopt;
  const Eigen::Matrix3d cov = ldlt.solve(Eigen::Matrix3d::Identity());
  std::array<double, 3> se{};
  for (int i = 0; i < 3; ++i) {
    if (!(cov(i, i) > 0.0)) return std::nullopt;
    se[static_cast<std::size_t>(i)] = std::sqrt(cov(i, i));
  }
  return se;
}

}  // namespace

FitResult fit_gev_mle(std::span<const double> maxima) {
  const std::size_t n = maxima.size();
  if (n < kMinFitSamples)
    throw InsufficientData("GEV fit needs at least " + std::to_string(kMinFitSamples) + " samples");
  for (double y : maxima)
    if (!std::isfinite(y)) throw InvalidInput("GEV fit input contains non-finite values");

  double mean = 0.0;
  for (double y : maxima) mean += y;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double y : maxima) var += (y - mean) * (y - mean);
  var /= static_cast<double>(n - 1);
  if (!(var > 0.0)) throw DegenerateInput("GEV fit input is constant");

  const double sigma0 = std::sqrt(var) * std::sqrt(6.0) / std::numbers::pi;
  const double mu0 = mean - 0.5772 * sigma0;
  double xi0 = 0.1;
  if (!std::isfinite(gev_nll({mu0, sigma0, xi0}, maxima))) xi0 = 0.0;

  auto objective = [&](const Eigen::VectorXd& v) {
    return gev_nll({v[0], std::exp(v[1]), v[2]}, maxima);
  };
  const Eigen::Vector3d start(mu0, std::log(sigma0), xi0);
  const Eigen::Vector3d steps(0.5 * sigma0, 0.3, 0.1);
  NelderMeadOptions opts;
  opts.ftol = 1e-8;

  NelderMeadResult r = nelder_mead(objective, start, steps, opts);
  // Fresh simplex at the optimum guards against premature collapse.
  {
    const Eigen::Vector3d small(0.1 * std::exp(r.x[1]), 0.05, 0.02);
    NelderMeadResult again = nelder_mead(objective, r.x, small, opts);
    if (again.fx <= r.fx) r = again;
    else r.converged = r.converged && again.converged;
  }
  if (!r.converged || !std::isfinite(r.fx)) {
    const Eigen::Vector3d perturbed(mu0 + 0.25 * sigma0, std::log(sigma0) + 0.2, xi0 + 0.1);
    NelderMeadResult retry = nelder_mead(objective, perturbed, steps, opts);
    if (retry.fx < r.fx || (retry.converged && retry.fx <= r.fx + 1e-8 * std::fabs(r.fx))) r = retry;
  }

  FitResult out;
  out.params = {r.x[0], std::exp(r.x[1]), r.x[2]};
  out.neg_log_likelihood = r.fx;
  out.converged = r.converged && std::isfinite(r.fx);
  out.n_samples = n;
  if (out.converged) out.stderrs = observed_stderrs(out.params, maxima);
  return out;
}

double frechet_consistency(const GevParams& p) {
  if (!(p.xi > 0.0)) throw WrongTail("Frechet consistency requires xi > 0");
  return p.xi * p.mu / p.sigma;
}

}  // namespace kevt
