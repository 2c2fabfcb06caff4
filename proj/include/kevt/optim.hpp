#pragma once

#include <functional>

#include <Eigen/Core>

namespace kevt {

struct NelderMeadOptions {
  int max_evaluations = 20000;
  /// Stop when f(worst) - f(best) <= ftol * (|f(best)| + ftol).
  double ftol = 1e-8;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double fx = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Downhill simplex minimization with standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2). Objective
/// values of +inf mark infeasible points and are simply never accepted.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, const Eigen::VectorXd& steps,
                             const NelderMeadOptions& opts = {});

}  // namespace kevt
