#include "kevt/optim.hpp"

#include <cmath>
#include <limits>
#include <algorithm>
#include <numeric>
#include <vector>

#include "kevt/error.hpp"

namespace kevt {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, const Eigen::VectorXd& steps,
                             const NelderMeadOptions& opts) {
  const Eigen::Index n = x0.size();
  if (n == 0 || steps.size() != n) throw InvalidInput("nelder_mead: bad dimensions");

  Eigen::MatrixXd simplex(n, n + 1);
  std::vector<double> fv(static_cast<std::size_t>(n + 1));
  int evals = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evals;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  simplex.col(0) = x0;
  fv[0] = eval(x0);
  for (Eigen::Index i = 0; i < n; ++i) {
    simplex.col(i + 1) = x0;
    simplex(i, i + 1) += steps[i];
    fv[static_cast<std::size_t>(i + 1)] = eval(simplex.col(i + 1));
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n + 1));
  bool converged = false;
  while (evals < opts.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return fv[static_cast<std::size_t>(a)] < fv[static_cast<std::size_t>(b)];
    });
    const Eigen::Index best = order.front();
    const Eigen::Index worst = order.back();
    const Eigen::Index second = order[order.size() - 2];
    const double fb = fv[static_cast<std::size_t>(best)];
    const double fw = fv[static_cast<std::size_t>(worst)];
    const double fs = fv[static_cast<std::size_t>(second)];

    if (std::isfinite(fw) && fw - fb <= opts.ftol * (std::fabs(fb) + opts.ftol)) {
      converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i <= n; ++i)
      if (i != worst) centroid += simplex.col(i);
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd xr = centroid + (centroid - simplex.col(worst));
    const double fr = eval(xr);
    if (fr < fb) {
      const Eigen::VectorXd xe = centroid + 2.0 * (xr - centroid);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex.col(worst) = xe;
        fv[static_cast<std::size_t>(worst)] = fe;
      } else {
        simplex.col(worst) = xr;
        fv[static_cast<std::size_t>(worst)] = fr;
      }
      continue;
    }
    if (fr < fs) {
      simplex.col(worst) = xr;
      fv[static_cast<std::size_t>(worst)] = fr;
      continue;
    }
    // Outside contraction when the reflected point beats the worst,
    // inside contraction otherwise.
    const bool outside = fr < fw;
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                       : Eigen::VectorXd(centroid + 0.5 * (simplex.col(worst) - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : fw)) {
      simplex.col(worst) = xc;
      fv[static_cast<std::size_t>(worst)] = fc;
      continue;
    }
    for (Eigen::Index i = 0; i <= n; ++i) {
      if (i == best) continue;
      simplex.col(i) = simplex.col(best) + 0.5 * (simplex.col(i) - simplex.col(best));
      fv[static_cast<std::size_t>(i)] = eval(simplex.col(i));
    }
  }

  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i <= n; ++i)
    if (fv[static_cast<std::size_t>(i)] < fv[static_cast<std::size_t>(best)]) best = i;
  return {simplex.col(best), fv[static_cast<std::size_t>(best)], evals, converged};
}

}  // namespace kevt
