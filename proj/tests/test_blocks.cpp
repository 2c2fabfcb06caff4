#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "kevt/blocks.hpp"
#include "kevt/error.hpp"

using namespace kevt;

TEST_CASE("block maxima") {
  const std::vector<double> v{1, 3, 2, 5, 4, 0};
  auto b = block_maxima(v, 2);
  CHECK(b.maxima == std::vector<double>{3, 5, 4});
  CHECK(b.block_length == 2);
  CHECK(b.n_blocks == 3);
  CHECK(b.n_series == 1);

  const std::vector<double> w{1, 3, 2, 5, 4, 0, 9};
  CHECK(block_maxima(w, 2).maxima == std::vector<double>{3, 5, 4});
  CHECK(block_maxima(w, 1).maxima == w);
  CHECK_THROWS_AS(block_maxima(std::vector<double>{1, 2}, 3), InsufficientData);
  CHECK_THROWS_AS(block_maxima(v, 0), InvalidInput);
}

TEST_CASE("block maxima over segments") {
  const std::vector<std::vector<double>> segs{{1, 3, 2, 5, 7}, {0, 4, 6, 1, 2}};
  const auto b = block_maxima(segs, 2, "two");
  CHECK(b.maxima == std::vector<double>{3, 5, 4, 6});
  CHECK(b.n_blocks == 2);
  CHECK(b.n_series == 2);
  CHECK(b.source_label == "two");
  CHECK_THROWS_AS(block_maxima(std::vector<std::vector<double>>{}, 2), InsufficientData);
  CHECK_THROWS_AS(block_maxima(std::vector<std::vector<double>>{{1, 2}, {1, 2, 3}}, 2), InvalidInput);
}

TEST_CASE("empirical return levels") {
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  const std::vector<double> half{0.5};
  CHECK(empirical_return_levels(v, 1, half)[0] == doctest::Approx(500.5));
  const std::vector<double> ok{0.995};
  CHECK(empirical_return_levels(v, 1, ok)[0] == doctest::Approx(995.005));
  const std::vector<double> too_far{0.999};
  CHECK_THROWS_AS(empirical_return_levels(v, 1, too_far), InsufficientData);
  const std::vector<double> bad{1.0};
  CHECK_THROWS_AS(empirical_return_levels(v, 1, bad), InvalidInput);
}

TEST_CASE("model quantiles and the level grid") {
  const GevParams p{0.0, 1.0, 0.0};
  CHECK(model_quantile(p, std::exp(-1.0)) == doctest::Approx(0.0).epsilon(1e-12));
  const auto lv = default_levels();
  CHECK(lv.front() == 0.8);
  CHECK(lv.back() == 0.9999);
  CHECK(std::is_sorted(lv.begin(), lv.end()));
}

TEST_CASE("return level comparison table") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const GevParams truth{1.0, 0.5, 0.1};
  std::vector<double> big(4000), small(200);
  for (auto& y : big) y = return_level(truth, 1.0 - u(gen));
  for (auto& y : small) y = return_level(truth, 1.0 - u(gen));
  const FitResult fit = fit_gev_mle(small);
  const BlockMaxSeries emp = block_maxima(big, 1);

  BootstrapOptions opts;
  opts.empirical_resamples = 200;
  opts.parametric_resamples = 100;
  opts.seed = 3;
  const std::vector<double> lv{0.5, 0.9, 0.99};
  const auto t = compare_return_levels(fit, fit.params, emp, lv, opts);
  REQUIRE(t.rows.size() == 3);
  for (const auto& r : t.rows) {
    CHECK(r.z_pred == r.z_mle);
    CHECK(r.return_period == doctest::Approx(1.0 / (1.0 - r.level)));
    CHECK(r.emp_lo <= r.z_emp);
    CHECK(r.z_emp <= r.emp_hi);
    CHECK(r.mle_lo <= r.mle_hi);
    CHECK(r.mle_lo < r.z_mle * 1.5);
    // the true quantile falls in the empirical band
    const double z = model_quantile(truth, r.level);
    CHECK(z > r.emp_lo - 0.1);
    CHECK(z < r.emp_hi + 0.1);
  }
  CHECK(t.rows[0].z_emp < t.rows[2].z_emp);

  // same seed, same table
  const auto t2 = compare_return_levels(fit, fit.params, emp, lv, opts);
  CHECK(t2.rows[2].emp_lo == t.rows[2].emp_lo);
  CHECK(t2.rows[2].mle_hi == t.rows[2].mle_hi);

  const std::vector<double> extreme{0.9999};
  CHECK_THROWS_AS(compare_return_levels(fit, fit.params, emp, extreme, opts), InsufficientData);
  opts.confidence = 1.0;
  CHECK_THROWS_AS(compare_return_levels(fit, fit.params, emp, lv, opts), InvalidInput);
}
