#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kevt/blocks.hpp"
#include "kevt/config.hpp"
#include "kevt/dynamics.hpp"
#include "kevt/ei.hpp"
#include "kevt/evt.hpp"
#include "kevt/observables.hpp"
#include "kevt/scaling.hpp"

namespace kevt {

/// Simulate, observe, window, block, fit, estimate the extremal index and
/// predict from the k = 1 fit, for every k in [k_min, k_max].
struct ExperimentConfig {
  MapModel map = MapModel::doubling();
  Observable observable = frechet(1.0, point_target(0.0));
  Functional::Kind functional = Functional::Kind::Exceedance;
  int k_min = 1;
  int k_max = 10;
  SimConfig sim;
  std::size_t block_length = 1000;
  /// Threshold for the Ferro-Segers estimate, as a quantile of the windowed series.
  double ei_quantile = 0.99;

  void validate() const;
};

struct ExperimentRow {
  int k = 1;
  std::optional<FitResult> fit;
  std::optional<EIEstimate> ei;
  std::optional<ScalingPrediction> prediction;
  std::string error;  // fit / estimate failures, recorded rather than thrown
};

struct ExperimentResult {
  std::optional<FitResult> anchor;  // k = 1 fit every prediction starts from
  std::vector<ExperimentRow> rows;

  bool all_fits_failed() const;
  const ExperimentRow* row(int k) const;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Observable series of every trajectory of the ensemble.
std::vector<std::vector<double>> observe_ensemble(const MapModel& map, const Observable& obs,
                                                  const SimConfig& sim);

/// Builds a config from flat keys (see README for the schema). Missing keys
/// keep their defaults.
ExperimentConfig experiment_config_from(const KeyValues& kv);
MapModel map_from(const KeyValues& kv);
Observable observable_from(const KeyValues& kv, const MapModel& map);

/// params_by_k.csv: k, mu_mle, sigma_mle, xi_mle, theta_fs, mu_pred,
/// sigma_pred, xi_pred, theta_pred, g. Missing values are left empty.
void write_params_by_k(std::ostream& os, const ExperimentResult& result);

}  // namespace kevt
