#include "abdr/sim.hpp"

#include <array>

#include "abdr/bayes_boot.hpp"
#include "abdr/errors.hpp"
#include "abdr/glm.hpp"
#include "abdr/parallel.hpp"
#include "abdr/propensity.hpp"

namespace abdr {

Dataset generate_dgp(const DgpParams& params, RngStream& rng) {
  if (params.n < 2) throw DomainError("dgp n must be >= 2");
  if (params.x_scale <= 0.0 || params.y_noise_scale <= 0.0)
    throw DomainError("dgp scales must be > 0");
  Dataset ds;
  ds.covariate_names = {"x"};
  ds.records.reserve(static_cast<std::size_t>(params.n));
  for (int i = 0; i < params.n; ++i) {
    ObservationRecord r;
    double x = rng.normal(0.0, params.x_scale);
    double pi = expit(params.alpha0 + params.alpha1 * x);
    r.d = rng.uniform() < pi ? 1 : 0;
    r.y = rng.normal(params.beta0 + params.beta1 * r.d + params.beta2 * x,
                     params.y_noise_scale);
    r.x = {x};
    ds.records.push_back(std::move(r));
  }
  return ds;
}

namespace {

constexpr std::array<const char*, 5> kConfigNames = {"BOR1", "BOR2", "BDR1",
                                                     "BDR2", "BDR3"};

}  // namespace

SimulationReport run_simulation_study(int runs, const DgpParams& params,
                                      const EstimatorConfig& config,
                                      RngStream rng) {
  if (runs < 1) throw DomainError("runs must be >= 1");
  const int L = config.bootstrap_reps;
  const int V = config.resample_size;

  PriorSpec prior;
  if (config.prior) {
    prior = *config.prior;
  } else {
    prior.kind = PriorSpec::Kind::NormalOnCoefficient;
    prior.mean = params.beta1;
    prior.sd = 1.0;
    prior.faith_k = 1.0;
  }
  prior.target_coefficient = 1;  // treatment column in every design below

  SimulationReport report;
  report.runs = runs;
  report.n = params.n;
  report.true_ate = params.beta1;
  for (const char* name : kConfigNames)
    report.rows.push_back({name, 0.0, 0.0, 0.0,
                           std::vector<double>(static_cast<std::size_t>(runs))});

  parallel_for(static_cast<std::size_t>(runs), config.threads, [&](std::size_t run) {
    RngStream run_rng = rng.substream(run);
    RngStream data_rng = run_rng.substream(0);
    Dataset data = generate_dgp(params, data_rng);
    Eigen::VectorXd y = data.outcomes();

    // Correct propensity model: logit on the covariate.
    PropensityFit ps = estimate_propensity(data, 1);

    // Random scores, one Uniform(0,1) per unit.
    RngStream score_rng = run_rng.substream(1);
    Eigen::VectorXd random_scores(static_cast<Eigen::Index>(data.n()));
    for (Eigen::Index i = 0; i < random_scores.size(); ++i)
      random_scores[i] = score_rng.uniform();
    Eigen::VectorXd kappa_random = kappa_weights(data, random_scores);

    auto full = DesignBuilder::from_dataset(data, 1, true, true);
    auto reduced = DesignBuilder::from_dataset(data, 1, true, false);

    struct Config {
      const DesignBuilder* builder;
      const Eigen::VectorXd* kappa;  // nullptr = unit weights
    };
    const std::array<Config, 5> configs = {{{&full, nullptr},
                                            {&reduced, nullptr},
                                            {&reduced, &ps.kappa},
                                            {&full, &kappa_random},
                                            {&reduced, &kappa_random}}};

    for (std::size_t c = 0; c < configs.size(); ++c) {
      RngStream chain_rng = run_rng.substream(2 + c);
      DesignMatrix design = configs[c].builder->build(data);
      std::optional<Eigen::VectorXd> kappa;
      if (configs[c].kappa) kappa = *configs[c].kappa;
      PosteriorDraws pn = posterior_sample(design, y, kappa, L,
                                           chain_rng.substream(0), 1);
      PosteriorDraws pm = muliere_secchi_resample(pn, prior, L,
                                                  chain_rng.substream(1));
      ATEDistribution ate = posterior_predictive_ate(
          pm, data, *configs[c].builder, Family::Gaussian, V, L,
          chain_rng.substream(2));
      report.rows[c].estimates[run] = ate.mean;
    }
  });

  for (auto& row : report.rows) {
    double mean = 0.0;
    for (double e : row.estimates) mean += e;
    mean /= static_cast<double>(runs);
    double var = 0.0;
    for (double e : row.estimates) var += (e - mean) * (e - mean);
    var /= static_cast<double>(runs);
    row.average_estimate = mean;
    row.empirical_variance = var;
    double bias = mean - params.beta1;
    row.mse = var + bias * bias;
  }
  return report;
}

}  // namespace abdr
