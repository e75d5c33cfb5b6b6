#include <doctest.h>

#include <cmath>

#include "abdr/errors.hpp"
#include "abdr/glm.hpp"
#include "abdr/sim.hpp"
#include "oracles.hpp"

using namespace abdr;

TEST_CASE("treated fraction matches the assignment intercept") {
  DgpParams params;
  params.n = 100000;
  params.alpha1 = 0.0;  // assignment ignores the covariate
  RngStream rng(400);
  Dataset ds = generate_dgp(params, rng);
  double frac = static_cast<double>(ds.treated_count()) / static_cast<double>(ds.n());
  CHECK(frac == doctest::Approx(expit(2.0)).epsilon(0.006));
}

TEST_CASE("a tiny outcome noise makes the outcome nearly deterministic") {
  DgpParams params;
  params.n = 500;
  params.y_noise_scale = 1e-9;
  RngStream rng(401);
  Dataset ds = generate_dgp(params, rng);
  for (const auto& r : ds.records) {
    double mean = 10.0 + 5.0 * r.d + 0.2 * r.x[0];
    CHECK(std::fabs(r.y - mean) < 1e-6);
  }
  params.y_noise_scale = 0.0;
  CHECK_THROWS_AS(generate_dgp(params, rng), DomainError);
  params.y_noise_scale = 1.0;
  params.n = 1;
  CHECK_THROWS_AS(generate_dgp(params, rng), DomainError);
}

TEST_CASE("least squares on generated data recovers the outcome model") {
  DgpParams params;
  params.n = 1000000;
  RngStream rng(402);
  Dataset ds = generate_dgp(params, rng);

  // independent reference fit on intercept + d + x
  oracles::Matrix x(ds.n());
  std::vector<double> y(ds.n()), w(ds.n(), 1.0);
  for (std::size_t i = 0; i < ds.n(); ++i) {
    const auto& r = ds.records[i];
    x[i] = {1.0, static_cast<double>(r.d), r.x[0]};
    y[i] = r.y;
  }
  auto beta = oracles::wls(x, y, w);
  CHECK(beta[0] == doctest::Approx(10.0).epsilon(0.002));
  CHECK(beta[1] == doctest::Approx(5.0).epsilon(0.004));
  CHECK(beta[2] == doctest::Approx(0.2).epsilon(0.01));

  // empirical moments of the covariate and the outcome noise
  double xm = 0.0, xv = 0.0;
  for (const auto& r : ds.records) xm += r.x[0];
  xm /= static_cast<double>(ds.n());
  for (const auto& r : ds.records) xv += (r.x[0] - xm) * (r.x[0] - xm);
  xv /= static_cast<double>(ds.n());
  CHECK(std::fabs(xm) < 0.02);
  CHECK(xv == doctest::Approx(10.0).epsilon(0.01));

  double rv = 0.0;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    const auto& r = ds.records[i];
    double resid = r.y - (beta[0] + beta[1] * r.d + beta[2] * r.x[0]);
    rv += resid * resid;
  }
  rv /= static_cast<double>(ds.n());
  CHECK(rv == doctest::Approx(5.0).epsilon(0.01));
}

TEST_CASE("a single-run study fills every configuration row") {
  DgpParams params;
  params.n = 300;
  EstimatorConfig config;
  config.bootstrap_reps = 40;
  config.resample_size = 100;
  SimulationReport rep = run_simulation_study(1, params, config, RngStream(17));
  REQUIRE(rep.rows.size() == 5);
  CHECK(rep.rows[0].name == "BOR1");
  CHECK(rep.rows[4].name == "BDR3");
  CHECK(rep.runs == 1);
  CHECK(rep.true_ate == 5.0);
  for (const auto& row : rep.rows) {
    REQUIRE(row.estimates.size() == 1);
    CHECK(row.average_estimate == row.estimates[0]);
    CHECK(row.empirical_variance == 0.0);
    double bias = row.average_estimate - 5.0;
    CHECK(row.mse == bias * bias);
    CHECK(std::fabs(bias) < 3.0);  // loose single-run sanity bound
  }
  CHECK_THROWS_AS(run_simulation_study(0, params, config, RngStream(1)), DomainError);
}

TEST_CASE("a small study shows the expected bias pattern") {
  DgpParams params;
  params.n = 500;
  EstimatorConfig config;
  config.bootstrap_reps = 60;
  config.resample_size = 200;
  SimulationReport rep = run_simulation_study(30, params, config, RngStream(2718));

  const auto& bor1 = rep.rows[0];
  const auto& bor2 = rep.rows[1];
  const auto& bdr1 = rep.rows[2];
  CHECK(std::fabs(bor1.average_estimate - 5.0) < 0.15);
  CHECK(std::fabs(bdr1.average_estimate - 5.0) < 0.15);
  // omitting the covariate without reweighting leaves a visible bias
  CHECK(bor2.average_estimate - 5.0 > 0.15);
  CHECK(bor2.mse > bor1.mse);

  // summary identities
  for (const auto& row : rep.rows) {
    double mean = 0.0;
    for (double e : row.estimates) mean += e;
    mean /= static_cast<double>(row.estimates.size());
    CHECK(row.average_estimate == doctest::Approx(mean).epsilon(1e-12));
    double bias = row.average_estimate - 5.0;
    CHECK(row.mse == doctest::Approx(row.empirical_variance + bias * bias)
                         .epsilon(1e-12));
  }
}

TEST_CASE("study results do not depend on the thread count") {
  DgpParams params;
  params.n = 200;
  EstimatorConfig config;
  config.bootstrap_reps = 25;
  config.resample_size = 50;
  SimulationReport a = run_simulation_study(6, params, config, RngStream(99));
  config.threads = 3;
  SimulationReport b = run_simulation_study(6, params, config, RngStream(99));
  for (std::size_t r = 0; r < a.rows.size(); ++r)
    for (std::size_t i = 0; i < a.rows[r].estimates.size(); ++i)
      CHECK(a.rows[r].estimates[i] == b.rows[r].estimates[i]);
}
