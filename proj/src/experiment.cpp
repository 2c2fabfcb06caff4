#include "kevt/experiment.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "kevt/error.hpp"

namespace kevt {

void ExperimentConfig::validate() const {
  sim.validate();
  if (block_length == 0) throw InvalidInput("block_length must be positive");
  if (k_min < 1 || k_max < k_min) throw InvalidInput("k range must satisfy 1 <= k_min <= k_max");
  if (static_cast<std::size_t>(k_max) > std::max<std::size_t>(1, block_length / 10))
    throw InvalidInput("k_max must not exceed block_length / 10");
  if (static_cast<std::size_t>(sim.trajectory_length) < block_length + static_cast<std::size_t>(k_max) - 1)
    throw InvalidInput("trajectory too short for one block of the widest window");
  if (!(ei_quantile > 0.0 && ei_quantile < 1.0)) throw InvalidInput("ei_quantile must lie in (0, 1)");
}

bool ExperimentResult::all_fits_failed() const {
  for (const auto& r : rows)
    if (r.fit && r.fit->converged) return false;
  return true;
}

const ExperimentRow* ExperimentResult::row(int k) const {
  for (const auto& r : rows)
    if (r.k == k) return &r;
  return nullptr;
}

std::vector<std::vector<double>> observe_ensemble(const MapModel& map, const Observable& obs,
                                                  const SimConfig& sim) {
  sim.validate();
  std::vector<std::vector<double>> out(static_cast<std::size_t>(sim.n_trajectories));
  parallel_for(sim.n_trajectories, [&](int i) {
    out[static_cast<std::size_t>(i)] = observe(obs, simulate_trajectory(map, sim, i));
  });
  return out;
}

namespace {

struct WindowedFit {
  std::optional<FitResult> fit;
  std::optional<EIEstimate> ei;
  std::string error;
};

WindowedFit fit_window(const std::vector<std::vector<double>>& base, Functional f,
                       const ExperimentConfig& cfg) {
  WindowedFit out;
  std::vector<std::vector<double>> windowed(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) windowed[i] = functional_series(base[i], f);
  try {
    const BlockMaxSeries bm = block_maxima(windowed, cfg.block_length);
    out.fit = fit_gev_mle(bm.maxima);
    if (!out.fit->converged) out.error = "MLE did not converge";
  } catch (const Error& e) {
    out.error = std::string("fit: ") + e.what();
  }
  try {
    const double u = empirical_quantile(windowed, cfg.ei_quantile);
    out.ei = ferro_segers(windowed, u);
  } catch (const Error& e) {
    out.error += (out.error.empty() ? "" : "; ") + std::string("ei: ") + e.what();
  }
  return out;
}

Functional make_functional(Functional::Kind kind, int k) {
  return kind == Functional::Kind::Exceedance ? Functional::exceedance(k) : Functional::average(k);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto base = observe_ensemble(cfg.map, cfg.observable, cfg.sim);

  ExperimentResult result;
  const WindowedFit anchor = fit_window(base, Functional::exceedance(1), cfg);
  if (anchor.fit && anchor.fit->converged) result.anchor = anchor.fit;

  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    const Functional f = make_functional(cfg.functional, k);
    ExperimentRow row;
    row.k = k;
    const WindowedFit w = k == 1 ? anchor : fit_window(base, f, cfg);
    row.fit = w.fit;
    row.ei = w.ei;
    row.error = w.error;
    if (result.anchor) {
      try {
        row.prediction = predict_for_functional(cfg.map, cfg.observable, f, result.anchor->params);
      } catch (const Error& e) {
        row.error += (row.error.empty() ? "" : "; ") + std::string("predict: ") + e.what();
      }
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

MapModel map_from(const KeyValues& kv) {
  const std::string name = kv.get("map", "doubling");
  if (name == "doubling") return MapModel::doubling();
  if (name == "beta") return MapModel::beta(kv.get_double("beta", 3.0));
  if (name == "toral") {
    const auto m = kv.get_doubles("matrix", {2, 1, 1, 1});
    if (m.size() != 4) throw InvalidInput("matrix needs four entries a,b,c,d");
    for (double v : m)
      if (v != std::floor(v)) throw InvalidInput("toral matrix entries must be integers");
    return MapModel::toral(static_cast<int>(m[0]), static_cast<int>(m[1]), static_cast<int>(m[2]),
                           static_cast<int>(m[3]));
  }
  if (name == "coupled")
    return MapModel::coupled(kv.get_double("beta", 3.0), kv.get_double("gamma", 0.1),
                             static_cast<int>(kv.get_int("m", 3)));
  throw InvalidInput("unknown map '" + name + "'");
}

Observable observable_from(const KeyValues& kv, const MapModel& map) {
  const std::string target_kind =
      kv.get("target", std::holds_alternative<CoupledMap>(map.variant()) ? "diagonal" : "point");
  TargetSet target;
  if (target_kind == "diagonal") {
    target = SynchronyDiagonal{};
  } else if (target_kind == "point") {
    const auto x0 = kv.get_doubles("x0", std::vector<double>(static_cast<std::size_t>(map.dimension()), 0.0));
    StatePoint p(static_cast<Eigen::Index>(x0.size()));
    for (std::size_t i = 0; i < x0.size(); ++i) p[static_cast<Eigen::Index>(i)] = x0[i];
    target = PointTarget{p};
  } else {
    throw InvalidInput("unknown target '" + target_kind + "'");
  }
  const std::string kind = kv.get("observable", "frechet");
  if (kind == "frechet") return frechet(kv.get_double("alpha", 1.0), target);
  if (kind == "weibull") return weibull(kv.get_double("C", 1.0), kv.get_double("alpha", -0.4), target);
  throw InvalidInput("unknown observable '" + kind + "'");
}

ExperimentConfig experiment_config_from(const KeyValues& kv) {
  ExperimentConfig cfg;
  cfg.map = map_from(kv);
  cfg.observable = observable_from(kv, cfg.map);
  const std::string fn = kv.get("functional", "exceedance");
  if (fn == "exceedance") cfg.functional = Functional::Kind::Exceedance;
  else if (fn == "average") cfg.functional = Functional::Kind::Average;
  else throw InvalidInput("unknown functional '" + fn + "'");
  cfg.k_min = static_cast<int>(kv.get_int("k_min", cfg.k_min));
  cfg.k_max = static_cast<int>(kv.get_int("k_max", cfg.k_max));
  cfg.sim.n_trajectories = static_cast<int>(kv.get_int("n_trajectories", cfg.sim.n_trajectories));
  cfg.sim.trajectory_length = static_cast<int>(kv.get_int("trajectory_length", cfg.sim.trajectory_length));
  cfg.sim.noise_amplitude = kv.get_double("noise", cfg.sim.noise_amplitude);
  cfg.sim.master_seed = static_cast<std::uint64_t>(kv.get_int("seed", 0));
  cfg.block_length = static_cast<std::size_t>(kv.get_int("block_length", static_cast<long long>(cfg.block_length)));
  cfg.ei_quantile = kv.get_double("ei_quantile", cfg.ei_quantile);
  return cfg;
}

void write_params_by_k(std::ostream& os, const ExperimentResult& result) {
  os << "k,mu_mle,sigma_mle,xi_mle,theta_fs,mu_pred,sigma_pred,xi_pred,theta_pred,g\n";
  const auto old = os.precision(12);
  for (const auto& r : result.rows) {
    os << r.k << ',';
    if (r.fit) os << r.fit->params.mu << ',' << r.fit->params.sigma << ',' << r.fit->params.xi << ',';
    else os << ",,,";
    if (r.ei) os << r.ei->theta;
    os << ',';
    if (r.prediction) {
      const auto& p = *r.prediction;
      os << p.derived.mu << ',' << p.derived.sigma << ',' << p.derived.xi << ',' << p.theta2 << ','
         << p.g_used;
    } else {
      os << ",,,,";
    }
    os << '\n';
  }
  os.precision(old);
}

}  // namespace kevt
