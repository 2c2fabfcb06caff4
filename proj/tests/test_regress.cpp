#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "kevt/dynamics.hpp"
#include "kevt/error.hpp"
#include "kevt/experiment.hpp"
#include "kevt/regress.hpp"

using namespace kevt;

TEST_CASE("ordinary least squares") {
  const std::vector<double> x{0, 1, 2}, y{1, 3, 5};
  auto f = ols(x, y);
  CHECK(f.m == doctest::Approx(2.0));
  CHECK(f.b == doctest::Approx(1.0));
  CHECK(f.r_squared == 1.0);
  CHECK(f.n() == 3);
  CHECK(f.predict(10.0) == doctest::Approx(21.0));

  const std::vector<double> flat{4, 4, 4};
  f = ols(x, flat);
  CHECK(f.m == 0.0);
  CHECK(f.b == 4.0);
  CHECK(f.r_squared == 1.0);

  // noise orthogonal to both 1 and x leaves slope and intercept unchanged
  const std::vector<double> x4{0, 1, 2, 3};
  const std::vector<double> y4b{1 + 0.3, 3 - 0.3, 5 - 0.3, 7 + 0.3};
  const auto a = ols(x4, y4b);
  CHECK(a.m == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(a.b == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.r_squared < 1.0);
  double rs = 0.0;
  for (double r : a.residuals) rs += r;
  CHECK(std::fabs(rs) < 1e-12);

  CHECK_THROWS_AS(ols(std::vector<double>{1}, std::vector<double>{1}), DegenerateInput);
  CHECK_THROWS_AS(ols(std::vector<double>{1, 1}, std::vector<double>{1, 2}), DegenerateInput);
  CHECK_THROWS_AS(ols(std::vector<double>{1, 2}, std::vector<double>{1}), InvalidInput);
}

TEST_CASE("average scaling exponent") {
  const std::vector<int> ks{1, 2, 3, 4, 6, 8, 10};
  std::vector<double> mu2;
  for (int k : ks) mu2.push_back(5.0 * std::pow(k, -0.7));
  auto f = estimate_g_exponent_average(ks, mu2);
  CHECK(f.m == doctest::Approx(-0.7).epsilon(1e-12));
  CHECK(f.b == doctest::Approx(std::log(5.0)).epsilon(1e-12));

  mu2.clear();
  for (int k : ks) mu2.push_back(3.0 / k);
  f = estimate_g_exponent_average(ks, mu2);
  CHECK(std::fabs(f.m + 1.0) < 1e-10);

  mu2[2] = -1.0;
  CHECK_THROWS_AS(estimate_g_exponent_average(ks, mu2), InvalidInput);
  const std::vector<int> one{1, 1};
  CHECK_THROWS_AS(estimate_g_exponent_average(one, std::vector<double>{1.0, 2.0}), DegenerateInput);
}

TEST_CASE("expansion rate from exceedance locations") {
  const std::vector<int> ks{1, 2, 3, 4, 5, 6};
  for (double lambda : {2.0, 2.7, 1.3}) {
    for (double xi : {1.0, 0.2}) {
      std::vector<double> mu2;
      for (int k : ks) mu2.push_back(7.0 * std::pow(lambda, -(k - 1) * xi));
      const auto e = estimate_lambda_exceedance(ks, mu2, xi);
      CHECK(e.lambda == doctest::Approx(lambda).epsilon(1e-10));
      CHECK(e.theta == doctest::Approx(1.0 - 1.0 / lambda).epsilon(1e-10));
      CHECK(e.fit.b == doctest::Approx(std::log(7.0)).epsilon(1e-10));
    }
  }
  std::vector<double> mu2{8, 4, 2, 1, 0.5, 0.25};
  const auto e = estimate_lambda_exceedance(ks, mu2, 1.0);
  CHECK(e.lambda == doctest::Approx(2.0));
  CHECK(e.theta == doctest::Approx(0.5));
  CHECK_THROWS_AS(estimate_lambda_exceedance(ks, mu2, 0.0), InvalidInput);
}

TEST_CASE("log g recovery") {
  const std::vector<int> ks{1, 2, 3, 4, 5};
  const double s1 = 3.0, t1 = 0.5, xi = 0.8, lambda = 2.0;
  std::vector<double> s2, t2(ks.size(), t1);
  for (int k : ks) s2.push_back(s1 * std::pow(lambda, -(k - 1) * xi));
  auto f = estimate_log_g(ks, s2, t2, xi, s1, t1);
  CHECK(f.m == doctest::Approx(-xi * std::log(lambda)).epsilon(1e-12));
  CHECK(std::fabs(f.b) < 1e-12);

  s2.clear();
  t2.clear();
  for (int k : ks) {
    s2.push_back(s1 / k);
    t2.push_back(t1 / k);
  }
  f = estimate_log_g(ks, s2, t2, 1.0, s1, t1);
  CHECK(std::fabs(f.m) < 1e-12);
  CHECK(std::fabs(f.b) < 1e-12);

  // fixture with an intercept offset: fitting against sigma1 = 1 recovers log sigma1
  std::vector<double> s3;
  for (int k : ks) s3.push_back(2.5 * std::pow(1.7, -(k - 1) * 0.3));
  f = estimate_log_g(ks, s3, std::vector<double>(ks.size(), 1.0), 0.3, 1.0, 1.0);
  CHECK(std::fabs(f.b - std::log(2.5)) < 1e-3);

  CHECK_THROWS_AS(estimate_log_g(ks, s2, t2, 1.0, 0.0, t1), InvalidInput);
  t2[0] = 0.0;
  CHECK_THROWS_AS(estimate_log_g(ks, s2, t2, 1.0, s1, t1), InvalidInput);
}

TEST_CASE("power-law tail slope") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> pareto(100000);
  for (auto& x : pareto) x = std::pow(1.0 - u(gen), -1.0 / 5.0);
  const auto f = fit_tail_power_law(pareto, 0.95);
  CHECK(std::fabs(f.m + 5.0) < 0.3);
  CHECK(f.n() >= 4900);

  CHECK_THROWS_AS(fit_tail_power_law(std::vector<double>(1000, 2.0), 0.95), InsufficientData);
  CHECK_THROWS_AS(fit_tail_power_law(std::vector<double>(200, 2.0), 1.0), InvalidInput);
  CHECK_THROWS_AS(fit_tail_power_law(std::vector<double>{}, 0.5), InsufficientData);
}

TEST_CASE("tail slope of the doubling-map observable") {
  SimConfig cfg;
  cfg.n_trajectories = 20;
  cfg.trajectory_length = 10000;
  cfg.master_seed = 4;
  std::vector<double> pooled;
  for (auto& s : observe_ensemble(MapModel::doubling(), frechet(0.2, point_target(0.0)), cfg))
    pooled.insert(pooled.end(), s.begin(), s.end());
  const auto f = fit_tail_power_law(pooled, 0.95);
  CHECK(std::fabs(f.m + 5.0) < 0.3);
}
