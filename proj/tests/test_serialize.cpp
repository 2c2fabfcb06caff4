#include <doctest.h>

#include <sstream>

#include "kevt/error.hpp"
#include "kevt/serialize.hpp"

using namespace kevt;

TEST_CASE("fit JSON round trip") {
  FitResult f;
  f.params = {1.5, 0.25, -0.125};
  f.neg_log_likelihood = 42.0;
  f.converged = true;
  f.n_samples = 300;
  const auto j = to_json(f);
  for (const char* key : {"mu", "sigma", "xi", "nll", "converged", "n"}) CHECK(j.contains(key));
  CHECK(j.size() == 6);
  const FitResult g = fit_from_json(nlohmann::json::parse(j.dump()));
  CHECK(g.params.mu == 1.5);
  CHECK(g.params.sigma == 0.25);
  CHECK(g.params.xi == -0.125);
  CHECK(g.n_samples == 300);
  CHECK(g.converged);
  CHECK_THROWS_AS(fit_from_json(nlohmann::json{{"mu", 1.0}}), DataError);
}

TEST_CASE("prediction, linear fit and estimate JSON") {
  ScalingPrediction p{{1.0, 2.0, 0.5}, 0.25, 0.7, Rule::Thm7};
  const auto j = to_json(4, p);
  CHECK(j.at("k") == 4);
  CHECK(j.at("rule") == "Thm7");
  CHECK(j.at("mu2") == 1.0);
  CHECK(j.at("sigma2") == 2.0);
  CHECK(j.at("xi2") == 0.5);
  CHECK(j.at("theta2") == 0.25);
  CHECK(j.at("g") == 0.7);

  LinFit l;
  l.m = -0.7;
  l.b = 3.4;
  l.r_squared = 0.9;
  l.residuals = {0.1, -0.1, 0.0};
  const auto lj = to_json(l);
  CHECK(lj.at("m") == -0.7);
  CHECK(lj.at("b") == 3.4);
  CHECK(lj.at("r2") == 0.9);
  CHECK(lj.at("n") == 3);

  EIEstimate e{0.4, EIEstimate::Method::ClusterRatio, 12, 3.0, 2};
  const auto ej = to_json(e);
  CHECK(ej.at("method") == "ClusterRatio");
  CHECK(ej.at("q") == 2);
  e.method = EIEstimate::Method::FerroSegers;
  CHECK_FALSE(to_json(e).contains("q"));
}

TEST_CASE("value CSV round trip") {
  const std::vector<double> v{1.0, 0.1, 1e-300, 123456.789, -2.5};
  std::stringstream ss;
  write_values_csv(ss, v);
  CHECK(ss.str().rfind("value\n", 0) == 0);
  CHECK(read_values_csv(ss) == v);

  std::istringstream multi("a,value\n1,2\n3,4\n");
  CHECK(read_values_csv(multi) == std::vector<double>{2, 4});
  std::istringstream single("x\r\n5\r\n\r\n6\r\n");
  CHECK(read_values_csv(single) == std::vector<double>{5, 6});
  std::istringstream nocol("a,b\n1,2\n");
  CHECK_THROWS_AS(read_values_csv(nocol), DataError);
  std::istringstream junk("value\n1\nzz\n");
  CHECK_THROWS_AS(read_values_csv(junk), DataError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_values_csv(empty), DataError);
  CHECK_THROWS_AS(read_values_csv(std::string("/nonexistent.csv")), DataError);
}

TEST_CASE("return level CSV") {
  ReturnLevelTable t;
  t.rows.push_back({0.9, 10.0, 1, 0.5, 1.5, 1.1, 0.9, 0.8, 1.0});
  std::ostringstream os;
  write_return_levels_csv(os, t);
  CHECK(os.str() ==
        "level,return_period,z_mle,mle_lo,mle_hi,z_pred,z_emp,emp_lo,emp_hi\n"
        "0.9,10,1,0.5,1.5,1.1,0.9,0.8,1\n");
}
