#pragma once

#include <algorithm>
#include <cmath>
#include <variant>

#include <Eigen/Core>

namespace kevt {

/// Phase-space point: coordinates in [0,1) on the circle, torus or cube.
using StatePoint = Eigen::VectorXd;

/// One trajectory, one row per time step, one column per coordinate.
using Trajectory = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Reduce into [0,1). Guards the x - floor(x) == 1.0 rounding case for tiny
/// negative inputs.
inline double wrap_unit(double x) noexcept {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

/// Wrap-around distance between two coordinates on the unit circle.
inline double circle_gap(double a, double b) noexcept {
  const double d = std::fabs(a - b);
  return std::min(d, 1.0 - d);
}

struct PointTarget {
  StatePoint x0;
};

/// The synchrony subspace {x_1 = ... = x_m} of a coupled system.
struct SynchronyDiagonal {};

using TargetSet = std::variant<PointTarget, SynchronyDiagonal>;

inline TargetSet point_target(double x0) {
  StatePoint p(1);
  p[0] = x0;
  return PointTarget{p};
}

inline TargetSet point_target(StatePoint x0) { return PointTarget{std::move(x0)}; }

}  // namespace kevt
