#include "kevt/observables.hpp"

#include <cmath>
#include <deque>
#include <string>

#include "kevt/error.hpp"

namespace kevt {

Observable frechet(double alpha, TargetSet target) {
  if (!(alpha > 0.0)) throw InvalidInput("Frechet observable requires alpha > 0");
  return FrechetObservable{alpha, std::move(target)};
}

Observable weibull(double C, double alpha, TargetSet target) {
  if (!(C > 0.0)) throw InvalidInput("Weibull observable requires C > 0");
  if (!(alpha < 0.0)) throw InvalidInput("Weibull observable requires alpha < 0");
  return WeibullObservable{C, alpha, std::move(target)};
}

const TargetSet& target_of(const Observable& obs) noexcept {
  return std::visit([](const auto& o) -> const TargetSet& { return o.target; }, obs);
}

double alpha_of(const Observable& obs) noexcept {
  return std::visit([](const auto& o) { return o.alpha; }, obs);
}

bool is_frechet(const Observable& obs) noexcept {
  return std::holds_alternative<FrechetObservable>(obs);
}

Functional Functional::exceedance(int k) {
  if (k < 1) throw InvalidInput("window length k must be >= 1");
  return {Kind::Exceedance, k};
}

Functional Functional::average(int k) {
  if (k < 1) throw InvalidInput("window length k must be >= 1");
  return {Kind::Average, k};
}

double distance_to_set(const double* x, Eigen::Index dim, const TargetSet& target) {
  if (const auto* p = std::get_if<PointTarget>(&target)) {
    if (p->x0.size() != dim)
      throw InvalidInput("point dimension " + std::to_string(dim) +
                         " does not match target dimension " + std::to_string(p->x0.size()));
    if (dim == 1) return circle_gap(x[0], p->x0[0]);
    double s = 0.0;
    for (Eigen::Index c = 0; c < dim; ++c) {
      const double g = circle_gap(x[c], p->x0[c]);
      s += g * g;
    }
    return std::sqrt(s);
  }
  if (dim < 2) throw InvalidInput("synchrony diagonal needs at least two coordinates");
  // Offsets from x[0] make points with equal coordinates exactly zero.
  double mean = 0.0;
  for (Eigen::Index c = 1; c < dim; ++c) mean += x[c] - x[0];
  mean /= static_cast<double>(dim);
  double s = 0.0;
  for (Eigen::Index c = 0; c < dim; ++c) {
    const double e = (x[c] - x[0]) - mean;
    s += e * e;
  }
  return std::sqrt(s);
}

double distance_to_set(const StatePoint& x, const TargetSet& target) {
  return distance_to_set(x.data(), x.size(), target);
}

namespace {

double value_at_distance(const Observable& obs, double d) {
  if (const auto* f = std::get_if<FrechetObservable>(&obs)) {
    if (!(f->alpha > 0.0)) throw InvalidInput("Frechet observable requires alpha > 0");
    return f->alpha == 1.0 ? 1.0 / d : std::pow(d, -f->alpha);
  }
  const auto& w = std::get<WeibullObservable>(obs);
  if (!(w.alpha < 0.0 && w.C > 0.0)) throw InvalidInput("Weibull observable requires alpha < 0, C > 0");
  return w.C - std::pow(d, -w.alpha);
}

}  // namespace

double evaluate(const Observable& obs, const StatePoint& x) {
  const double d = distance_to_set(x, target_of(obs));
  if (d == 0.0) throw OnTarget("observable evaluated on its target set");
  return value_at_distance(obs, d);
}

double evaluate_saturated(const Observable& obs, const double* x, Eigen::Index dim) {
  const double d = distance_to_set(x, dim, target_of(obs));
  return value_at_distance(obs, d > 0.0 ? d : kSaturationDistance);
}

std::vector<double> observe(const Observable& obs, const Trajectory& traj) {
  std::vector<double> out(static_cast<std::size_t>(traj.rows()));
  for (Eigen::Index s = 0; s < traj.rows(); ++s)
    out[static_cast<std::size_t>(s)] = evaluate_saturated(obs, traj.row(s).data(), traj.cols());
  return out;
}

std::vector<double> functional_series(std::span<const double> values, Functional f) {
  if (f.k < 1) throw InvalidInput("window length k must be >= 1");
  const auto k = static_cast<std::size_t>(f.k);
  if (values.size() < k) throw InvalidInput("series shorter than the window length");
  const std::size_t n_out = values.size() - k + 1;
  std::vector<double> out(n_out);
  if (k == 1) {
    out.assign(values.begin(), values.end());
    return out;
  }
  if (f.kind == Functional::Kind::Average) {
    // Direct window sums: heavy-tailed series make running sums lose the
    // small values after a large one leaves the window.
    for (std::size_t i = 0; i < n_out; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < k; ++j) s += values[i + j];
      out[i] = s / static_cast<double>(k);
    }
    return out;
  }
  // Monotone deque of indices with increasing values.
  std::deque<std::size_t> q;
  for (std::size_t i = 0; i < values.size(); ++i) {
    while (!q.empty() && values[q.back()] >= values[i]) q.pop_back();
    q.push_back(i);
    if (q.front() + k <= i) q.pop_front();
    if (i + 1 >= k) out[i + 1 - k] = values[q.front()];
  }
  return out;
}

std::pair<double, double> example61_analytic(double x0, double alpha) {
  if (!(x0 > 0.0 && x0 < 0.5)) throw Unsupported("x0 must lie in (0, 1/2)");
  if (!(alpha > 0.0)) throw InvalidInput("alpha must be positive");
  return {2.0 * x0 / 3.0, std::pow(3.0, alpha) * std::pow(x0, -alpha)};
}

}  // namespace kevt
