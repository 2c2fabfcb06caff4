#include "kevt/ei.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kevt/error.hpp"
#include "kevt/scaling.hpp"

namespace kevt {
namespace {

struct IntervalSums {
  std::size_t n_exceed = 0;
  std::size_t n_times = 0;
  double max_t = 0.0;
  double s1 = 0.0;   // sum T
  double s2 = 0.0;   // sum T^2
  double s1c = 0.0;  // sum (T - 1)
  double s2c = 0.0;  // sum (T - 1)(T - 2)

  void add(std::span<const double> x, double u) {
    std::size_t last = 0;
    bool seen = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!(x[i] > u)) continue;
      ++n_exceed;
      if (seen) {
        const double t = static_cast<double>(i - last);
        ++n_times;
        max_t = std::max(max_t, t);
        s1 += t;
        s2 += t * t;
        s1c += t - 1.0;
        s2c += (t - 1.0) * (t - 2.0);
      }
      last = i;
      seen = true;
    }
  }

  EIEstimate finish(double u) const {
    if (n_times < 1) throw InsufficientData("Ferro-Segers estimator needs at least two exceedances");
    const double nt = static_cast<double>(n_times);
    double theta = max_t <= 2.0 ? 2.0 * s1 * s1 / (nt * s2) : 2.0 * s1c * s1c / (nt * s2c);
    theta = std::clamp(theta, std::numeric_limits<double>::min(), 1.0);
    return {theta, EIEstimate::Method::FerroSegers, n_exceed, u, 0};
  }
};

struct RatioCounts {
  std::size_t exceed = 0;
  std::size_t starts = 0;

  void add(std::span<const double> x, double u, int q) {
    const auto uq = static_cast<std::size_t>(q);
    if (x.size() <= uq) return;
    for (std::size_t i = 0; i + uq < x.size(); ++i) {
      if (!(x[i] > u)) continue;
      ++exceed;
      bool quiet = true;
      for (std::size_t j = 1; j <= uq && quiet; ++j) quiet = !(x[i + j] > u);
      if (quiet) ++starts;
    }
  }
};

}  // namespace

EIEstimate ferro_segers(std::span<const double> series, double threshold) {
  IntervalSums s;
  s.add(series, threshold);
  return s.finish(threshold);
}

EIEstimate ferro_segers(const std::vector<std::vector<double>>& segments, double threshold) {
  IntervalSums s;
  for (const auto& seg : segments) s.add(seg, threshold);
  return s.finish(threshold);
}

EIEstimate cluster_ratio(const std::vector<std::vector<double>>& segments, double threshold,
                         int q) {
  if (q < 0) throw InvalidInput("gap length q must be nonnegative");
  RatioCounts c;
  for (const auto& seg : segments) c.add(seg, threshold, q);
  if (c.exceed == 0) throw InsufficientData("no exceedances of the threshold");
  const double theta = std::clamp(static_cast<double>(c.starts) / static_cast<double>(c.exceed),
                                  std::numeric_limits<double>::min(), 1.0);
  return {theta, EIEstimate::Method::ClusterRatio, c.exceed, threshold, q};
}

EIEstimate cluster_ratio(std::span<const double> series, double threshold, int q) {
  if (q < 0) throw InvalidInput("gap length q must be nonnegative");
  if (series.size() <= static_cast<std::size_t>(q))
    throw InvalidInput("series must be longer than the gap length q");
  return cluster_ratio(std::vector<std::vector<double>>{{series.begin(), series.end()}}, threshold,
                       q);
}

double theoretical_ei(const MapModel& map, const TargetSet& target, Functional f,
                      const Observable& obs) {
  if (f.k < 1) throw InvalidInput("window length k must be >= 1");
  const bool base = f.k == 1;
  const bool exceed = f.kind == Functional::Kind::Exceedance;

  if (const auto* c = std::get_if<CoupledMap>(&map.variant())) {
    if (!std::holds_alternative<SynchronyDiagonal>(target) || !(base || exceed))
      throw Unsupported("coupled maps: only exceedances on the synchrony diagonal are covered");
    const double lambda = expansion_rate(map, target);
    return 1.0 - 1.0 / std::pow(lambda, c->m - 1);
  }
  if (std::holds_alternative<SynchronyDiagonal>(target))
    throw Unsupported("synchrony diagonal target requires a coupled map");

  const auto& x0 = std::get<PointTarget>(target).x0;
  if (x0.size() != map.dimension()) throw InvalidInput("target dimension mismatch");
  if (is_fixed_point(map, x0)) {
    const double lambda = expansion_rate(map, target);
    if (base || exceed) return 1.0 - 1.0 / lambda;
    const auto* fr = std::get_if<FrechetObservable>(&obs);
    const bool doubling_zero =
        std::holds_alternative<DoublingMap>(map.variant()) && circle_gap(x0[0], 0.0) < 1e-12;
    if (fr && doubling_zero) return ei_double0_average(fr->alpha, f.k);
    throw Unsupported("averages at invariant sets are covered only for the doubling map at 0");
  }
  if (base) return 1.0;
  if (!exceed && is_frechet(obs)) return 1.0 / f.k;
  throw Unsupported("k-exceedances at a non-recurrent point have no closed-form extremal index");
}

double empirical_quantile(std::span<const double> values, double level) {
  if (values.empty()) throw InsufficientData("quantile of an empty sample");
  if (!(level >= 0.0 && level <= 1.0)) throw InvalidInput("quantile level must lie in [0, 1]");
  std::vector<double> v(values.begin(), values.end());
  const double h = level * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(lo), v.end());
  const double a = v[lo];
  double b = a;
  if (hi != lo) b = *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(hi), v.end());
  return a + (h - static_cast<double>(lo)) * (b - a);
}

double empirical_quantile(const std::vector<std::vector<double>>& segments, double level) {
  std::vector<double> all;
  for (const auto& s : segments) all.insert(all.end(), s.begin(), s.end());
  return empirical_quantile(all, level);
}

}  // namespace kevt
