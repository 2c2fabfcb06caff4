#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kevt/error.hpp"
#include "kevt/experiment.hpp"
#include "kevt/regress.hpp"

using namespace kevt;

namespace {

ExperimentConfig small_doubling() {
  ExperimentConfig cfg;
  cfg.k_min = 1;
  cfg.k_max = 4;
  cfg.sim.n_trajectories = 60;
  cfg.sim.trajectory_length = 5000;
  cfg.sim.master_seed = 2;
  cfg.block_length = 100;
  return cfg;
}

}  // namespace

TEST_CASE("config validation") {
  ExperimentConfig cfg = small_doubling();
  CHECK_NOTHROW(cfg.validate());
  cfg.k_max = 11;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg = small_doubling();
  cfg.k_min = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg = small_doubling();
  cfg.sim.trajectory_length = 100;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg = small_doubling();
  cfg.ei_quantile = 1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}

TEST_CASE("window k = 1 prediction equals the fit") {
  ExperimentConfig cfg = small_doubling();
  cfg.k_max = 1;
  const auto r = run_experiment(cfg);
  REQUIRE(r.rows.size() == 1);
  const auto& row = r.rows[0];
  REQUIRE(row.fit);
  REQUIRE(row.prediction);
  CHECK(row.prediction->derived.mu == doctest::Approx(row.fit->params.mu).epsilon(1e-14));
  CHECK(row.prediction->derived.sigma == doctest::Approx(row.fit->params.sigma).epsilon(1e-14));
  CHECK(row.prediction->derived.xi == row.fit->params.xi);
}

TEST_CASE("small doubling experiment produces a full table") {
  const auto r = run_experiment(small_doubling());
  CHECK_FALSE(r.all_fits_failed());
  REQUIRE(r.anchor);
  REQUIRE(r.rows.size() == 4);
  for (const auto& row : r.rows) {
    CHECK(row.error.empty());
    REQUIRE(row.ei);
    CHECK(row.ei->theta > 0.2);
    CHECK(row.ei->theta <= 1.0);
    REQUIRE(row.prediction);
    CHECK(row.prediction->rule == Rule::Thm5a);
  }
  CHECK(r.row(3) == &r.rows[2]);
  CHECK(r.row(9) == nullptr);

  std::ostringstream os;
  write_params_by_k(os, r);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "k,mu_mle,sigma_mle,xi_mle,theta_fs,mu_pred,sigma_pred,xi_pred,theta_pred,g");
  int n = 0;
  while (std::getline(is, line)) {
    ++n;
    CHECK(std::count(line.begin(), line.end(), ',') == 9);
  }
  CHECK(n == 4);
}

TEST_CASE("same seed, same experiment") {
  const auto a = run_experiment(small_doubling());
  const auto b = run_experiment(small_doubling());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].fit->params.mu == b.rows[i].fit->params.mu);
    CHECK(a.rows[i].ei->theta == b.rows[i].ei->theta);
  }
}

TEST_CASE("per-k failures are recorded without aborting") {
  // exceedances at a non-recurrent point have no closed-form prediction
  ExperimentConfig cfg = small_doubling();
  cfg.observable = frechet(1.0, point_target(1.0 / M_PI));
  const auto r = run_experiment(cfg);
  REQUIRE(r.rows.size() == 4);
  CHECK(r.rows[0].error.empty());
  CHECK(r.rows[0].prediction);
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    CHECK(r.rows[i].fit);
    CHECK_FALSE(r.rows[i].prediction);
    CHECK(r.rows[i].error.find("predict") != std::string::npos);
  }
}

TEST_CASE("doubling pipeline recovers the expansion rate") {
  ExperimentConfig cfg;
  cfg.k_min = 1;
  cfg.k_max = 6;
  cfg.sim.n_trajectories = 500;
  cfg.sim.trajectory_length = 10000;
  cfg.sim.master_seed = 31;
  const auto r = run_experiment(cfg);
  std::vector<int> ks;
  std::vector<double> mus;
  for (const auto& row : r.rows) {
    REQUIRE(row.fit);
    ks.push_back(row.k);
    mus.push_back(row.fit->params.mu);
  }
  const double xi = r.anchor->params.xi;
  CHECK(std::fabs(frechet_consistency(r.anchor->params) - 1.0) < 0.15);
  const auto est = estimate_lambda_exceedance(ks, mus, xi);
  CHECK(est.lambda >= 1.8);
  CHECK(est.lambda <= 2.2);
}

TEST_CASE("configuration from key-value text") {
  std::istringstream in(
      "# coupled run\n"
      "map = coupled\n"
      "beta = 3\n"
      "gamma = 0.1\n"
      "m = 3\n"
      "alpha = 1\n"
      "functional = exceedance\n"
      "k_max = 4\n"
      "n_trajectories = 10\n"
      "trajectory_length = 2000\n"
      "seed = 9\n"
      "block_length = 100\n");
  const auto kv = KeyValues::parse(in);
  const auto cfg = experiment_config_from(kv);
  CHECK(cfg.map.dimension() == 3);
  CHECK(std::holds_alternative<SynchronyDiagonal>(target_of(cfg.observable)));
  CHECK(cfg.k_max == 4);
  CHECK(cfg.sim.master_seed == 9);
  CHECK(cfg.block_length == 100);
  CHECK(kv.unused().empty());

  KeyValues bad;
  bad.set("map", "tent");
  CHECK_THROWS_AS(map_from(bad), InvalidInput);
  KeyValues tor;
  tor.set("map", "toral");
  tor.set("matrix", "2, 1, 1, 1");
  CHECK(map_from(tor).name() == "toral");
  tor.set("matrix", "2, 1.5, 1, 1");
  CHECK_THROWS_AS(map_from(tor), InvalidInput);
  KeyValues wb;
  wb.set("observable", "weibull");
  wb.set("alpha", "-0.4");
  CHECK_FALSE(is_frechet(observable_from(wb, MapModel::doubling())));
  KeyValues fn;
  fn.set("functional", "median");
  CHECK_THROWS_AS(experiment_config_from(fn), InvalidInput);
}

TEST_CASE("key-value parser") {
  std::istringstream in("a = 1\n  # comment\n\nb=x, y \nlist = 1, 2.5,3\n");
  const auto kv = KeyValues::parse(in);
  CHECK(kv.get_int("a", 0) == 1);
  CHECK(kv.get("b", "") == "x, y");
  CHECK(kv.get_doubles("list", {}) == std::vector<double>{1, 2.5, 3});
  CHECK(kv.get_double("missing", 4.5) == 4.5);
  CHECK_THROWS_AS(kv.get_double("b", 0.0), InvalidInput);
  CHECK_THROWS_AS(kv.get_int("list", 0), InvalidInput);
  std::istringstream one("zz = 1\n");
  const KeyValues untouched = KeyValues::parse(one);
  CHECK(untouched.unused() == std::vector<std::string>{"zz"});
  std::istringstream bad("novalue\n");
  CHECK_THROWS_AS(KeyValues::parse(bad), InvalidInput);
  CHECK_THROWS_AS(KeyValues::load("/nonexistent.cfg"), InvalidInput);
}
