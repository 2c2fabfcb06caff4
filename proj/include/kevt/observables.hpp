#pragma once

#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "kevt/state.hpp"

namespace kevt {

/// phi(x) = d(x, S)^-alpha, alpha > 0.
struct FrechetObservable {
  double alpha;
  TargetSet target;
};

/// phi(x) = C - d(x, S)^|alpha|, stored with alpha < 0 and C > 0.
struct WeibullObservable {
  double C;
  double alpha;
  TargetSet target;
};

using Observable = std::variant<FrechetObservable, WeibullObservable>;

Observable frechet(double alpha, TargetSet target);
Observable weibull(double C, double alpha, TargetSet target);

const TargetSet& target_of(const Observable& obs) noexcept;
double alpha_of(const Observable& obs) noexcept;
bool is_frechet(const Observable& obs) noexcept;

/// Sliding-window functional over k consecutive values.
struct Functional {
  enum class Kind { Exceedance, Average };
  Kind kind;
  int k;

  static Functional exceedance(int k);
  static Functional average(int k);
};

/// Point targets use the wrapped Euclidean metric; the diagonal uses the
/// norm of x minus its coordinate mean.
double distance_to_set(const StatePoint& x, const TargetSet& target);
double distance_to_set(const double* x, Eigen::Index dim, const TargetSet& target);

/// Throws OnTarget when d(x, S) == 0.
double evaluate(const Observable& obs, const StatePoint& x);

/// As `evaluate`, but an on-target point returns the observable at
/// kSaturationDistance instead of throwing.
double evaluate_saturated(const Observable& obs, const double* x, Eigen::Index dim);

inline constexpr double kSaturationDistance = 0x1.0p-64;

/// Observable applied to every row of a trajectory (saturating on target).
std::vector<double> observe(const Observable& obs, const Trajectory& traj);

/// Window min (Exceedance) or mean (Average) over entries i..i+k-1.
/// Output length is values.size() - k + 1.
std::vector<double> functional_series(std::span<const double> values, Functional f);

/// Global maximizer and maximum of min{phi(x), phi(2x mod 1)} for
/// phi = d(x, x0)^-alpha on the doubling map, x0 in (0, 1/2).
std::pair<double, double> example61_analytic(double x0, double alpha);

}  // namespace kevt
