#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kevt/dynamics.hpp"
#include "kevt/observables.hpp"

namespace kevt {

struct EIEstimate {
  enum class Method { FerroSegers, ClusterRatio, Theoretical };

  double theta = 1.0;
  Method method = Method::Theoretical;
  std::size_t n_exceedances = 0;
  double threshold = 0.0;
  int q = 0;  // gap length, ClusterRatio only
};

/// Ferro-Segers intervals estimator with the usual bias correction when
/// some interexceedance time exceeds 2. Needs at least two exceedances.
EIEstimate ferro_segers(std::span<const double> series, double threshold);

/// Pools interexceedance times within each segment (trajectory) without
/// bridging segment boundaries.
EIEstimate ferro_segers(const std::vector<std::vector<double>>& segments, double threshold);

/// Fraction of exceedances X_i > u followed by q non-exceedances; only
/// indices i <= len - q - 1 are counted.
EIEstimate cluster_ratio(std::span<const double> series, double threshold, int q);
EIEstimate cluster_ratio(const std::vector<std::vector<double>>& segments, double threshold, int q);

/// Closed-form extremal index for the covered cases:
///  - exceedances (any k) and the base series at a fixed point: 1 - 1/lambda;
///    on the synchrony diagonal: 1 - 1/lambda^(m-1);
///  - base series and averages at a non-recurrent (non-fixed) point: 1/k;
///  - averages at the fixed point 0 of the doubling map: ei_double0_average.
/// Anything else throws Unsupported.
double theoretical_ei(const MapModel& map, const TargetSet& target, Functional f,
                      const Observable& obs);

/// Type-7 (linear interpolation) empirical quantile, level in [0, 1].
double empirical_quantile(std::span<const double> values, double level);
double empirical_quantile(const std::vector<std::vector<double>>& segments, double level);

}  // namespace kevt
