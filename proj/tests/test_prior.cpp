#include <cmath>
#include <random>

#include "darom/prior.hpp"
#include "doctest.h"

using namespace darom;

TEST_SUITE_BEGIN("prior");

TEST_CASE("log-density of the all-ones weight vector is zero") {
  const PriorModel prior = PriorModel::independent_log_normal(9, 2.0);
  CHECK(prior.log_density(Vector::Ones(9)) == 0.0);
}

TEST_CASE("nonpositive weights are inadmissible") {
  const PriorModel prior = PriorModel::independent_log_normal(3, 2.0);
  Vector x = Vector::Ones(3);
  x[1] = 0.0;
  CHECK(prior.log_density(x) == -std::numeric_limits<double>::infinity());
  x[1] = -1.0;
  CHECK(prior.log_density(x) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("the Gaussian KL prior peaks at zero") {
  const PriorModel prior = PriorModel::standard_gaussian_kl(5);
  const double at_zero = prior.log_density(Vector::Zero(5));
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 20; ++rep) {
    CHECK(prior.log_density(prior.sample(rng)) <= at_zero);
  }
}

TEST_CASE("samples follow the log-normal marginal") {
  const double sigma0 = 2.0;
  const PriorModel prior = PriorModel::independent_log_normal(2, sigma0);
  std::mt19937_64 rng(9);
  double sum_log = 0.0, sum_log_sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const Vector x = prior.sample(rng);
    for (int c = 0; c < 2; ++c) {
      const double lx = std::log(x[c]);
      sum_log += lx;
      sum_log_sq += lx * lx;
    }
  }
  const double mean = sum_log / (2 * n);
  const double var = sum_log_sq / (2 * n) - mean * mean;
  CHECK(mean == doctest::Approx(0.0).epsilon(0.02));
  CHECK(std::sqrt(var) == doctest::Approx(sigma0).epsilon(0.02));
}

TEST_CASE("analytic marginal standard deviations") {
  const PriorModel log_normal = PriorModel::independent_log_normal(2, 2.0);
  const double s2 = 4.0;
  CHECK(log_normal.marginal_std(0) ==
        doctest::Approx(std::sqrt((std::exp(s2) - 1.0) * std::exp(s2))));
  const PriorModel gauss = PriorModel::standard_gaussian_kl(3);
  CHECK(gauss.marginal_std(2) == 1.0);
}

TEST_SUITE_END();
