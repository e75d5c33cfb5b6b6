#include "abdr/estimators.hpp"

#include <cmath>

#include "abdr/errors.hpp"
#include "abdr/parallel.hpp"
#include "abdr/propensity.hpp"

namespace abdr {

namespace {

// Fixed substream ids so every stage has its own independent stream.
enum StreamId : std::uint64_t {
  kStreamPosterior = 0,
  kStreamPriorMix = 1,
  kStreamPredictive = 2,
  kStreamIpw = 3,
  kStreamFrequentist = 4,
};

PriorSpec prior_for(const EstimatorConfig& config, int treatment_column) {
  PriorSpec p = *config.prior;
  p.target_coefficient = treatment_column;
  return p;
}

/// Shared OR/DR/naive pipeline: empirical posterior, optional prior
/// mixing, posterior predictive ATE. When no prior is configured the
/// empirical draws feed the predictive step directly.
ATEDistribution bayes_pipeline(const Dataset& dataset, const DesignBuilder& builder,
                               const std::optional<Eigen::VectorXd>& kappa,
                               const EstimatorConfig& config, RngStream rng,
                               const KappaRefit& refit = nullptr) {
  DesignMatrix design = builder.build(dataset);
  Eigen::VectorXd y = dataset.outcomes();
  PosteriorDraws pn =
      posterior_sample(design, y, kappa, config.bootstrap_reps,
                       rng.substream(kStreamPosterior), config.threads, refit);
  const PosteriorDraws* source = &pn;
  PosteriorDraws pm;
  if (config.prior) {
    pm = muliere_secchi_resample(pn, prior_for(config, builder.treatment_column()),
                                 static_cast<int>(pn.draws.rows()),
                                 rng.substream(kStreamPriorMix));
    source = &pm;
  }
  return posterior_predictive_ate(*source, dataset, builder, Family::Gaussian,
                                  config.resample_size, config.bootstrap_reps,
                                  rng.substream(kStreamPredictive));
}

ATEDistribution ipw_distribution(const Dataset& dataset, const PropensityFit& ps,
                                 const EstimatorConfig& config, RngStream rng) {
  const int n = static_cast<int>(dataset.n());
  std::vector<double> samples(static_cast<std::size_t>(config.bootstrap_reps));
  parallel_for(samples.size(), config.threads, [&](std::size_t l) {
    RngStream local = rng.substream(l);
    Eigen::VectorXd w = draw_dirichlet_weights(n, local).w;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto& r = dataset.records[static_cast<std::size_t>(i)];
      double pi = ps.scores[i];
      acc += r.d == 1 ? w[i] * r.y / pi : -w[i] * r.y / (1.0 - pi);
    }
    samples[l] = acc / static_cast<double>(n);
  });
  return summarize_ate(std::move(samples));
}

MatchResult match_for_config(const Dataset& dataset, const EstimatorConfig& config) {
  PropensityFit ps = estimate_propensity(dataset, config.degree);
  return nearest_neighbor_match(ps, dataset, config.match.ratio,
                                config.match.with_replacement,
                                config.match.caliper);
}

}  // namespace

EstimateReport estimate_or(const Dataset& dataset, const EstimatorConfig& config) {
  require_valid(dataset);
  EstimateReport report;
  report.kind = EstimatorKind::OR;
  auto builder = DesignBuilder::from_dataset(dataset, config.degree, true, true);
  report.bayes = bayes_pipeline(dataset, builder, std::nullopt, config,
                                RngStream(config.rng_seed));
  if (config.with_frequentist)
    report.frequentist = frequentist_bootstrap(dataset, config, EstimatorKind::OR);
  return report;
}

EstimateReport estimate_ipw(const Dataset& dataset, const EstimatorConfig& config) {
  require_valid(dataset);
  EstimateReport report;
  report.kind = EstimatorKind::IPW;
  PropensityFit ps = estimate_propensity(dataset, config.degree);
  report.bayes = ipw_distribution(dataset, ps, config,
                                  RngStream(config.rng_seed).substream(kStreamIpw));
  if (config.with_frequentist)
    report.frequentist = frequentist_bootstrap(dataset, config, EstimatorKind::IPW);
  return report;
}

EstimateReport estimate_dr(const Dataset& dataset, const EstimatorConfig& config) {
  require_valid(dataset);
  EstimateReport report;
  report.kind = EstimatorKind::DR;
  PropensityFit ps = estimate_propensity(dataset, config.degree);
  auto builder = DesignBuilder::from_dataset(dataset, config.degree, true, true);

  KappaRefit refit;
  if (config.reestimate_ps) {
    DesignMatrix ps_design = ps.builder.build(dataset);
    Eigen::VectorXd d = dataset.treatments();
    refit = [&dataset, ps_design, d](const Eigen::VectorXd& w, RngStream&) {
      GlmFit fit = fit_weighted_logistic(ps_design, d, w);
      Eigen::VectorXd scores = predict(fit, ps_design);
      return kappa_weights(dataset, scores);
    };
  }
  report.bayes = bayes_pipeline(dataset, builder,
                                std::optional<Eigen::VectorXd>(ps.kappa), config,
                                RngStream(config.rng_seed), refit);
  if (config.with_frequentist)
    report.frequentist = frequentist_bootstrap(dataset, config, EstimatorKind::DR);
  return report;
}

EstimateReport estimate_naive(const Dataset& dataset, const EstimatorConfig& config,
                              bool use_matching) {
  require_valid(dataset);
  EstimateReport report;
  report.kind = use_matching ? EstimatorKind::NaiveMatched : EstimatorKind::NaiveFull;
  const Dataset* data = &dataset;
  Dataset trimmed;
  if (use_matching) {
    trimmed = match_for_config(dataset, config).trimmed_dataset;
    require_valid(trimmed);
    data = &trimmed;
  }
  auto builder = DesignBuilder::from_dataset(*data, 1, true, false);
  report.bayes = bayes_pipeline(*data, builder, std::nullopt, config,
                                RngStream(config.rng_seed));
  if (config.with_frequentist)
    report.frequentist = frequentist_bootstrap(dataset, config, report.kind);
  return report;
}

EstimateReport estimate(const Dataset& dataset, const EstimatorConfig& config,
                        EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::OR: return estimate_or(dataset, config);
    case EstimatorKind::IPW: return estimate_ipw(dataset, config);
    case EstimatorKind::DR: return estimate_dr(dataset, config);
    case EstimatorKind::NaiveMatched: return estimate_naive(dataset, config, true);
    case EstimatorKind::NaiveFull: return estimate_naive(dataset, config, false);
  }
  throw DomainError("unknown estimator kind");
}

double point_estimate(const Dataset& dataset, const EstimatorConfig& config,
                      EstimatorKind kind) {
  Eigen::VectorXd y = dataset.outcomes();
  auto contrast_mean = [&](const DesignBuilder& builder, const GlmFit& fit,
                           const Dataset& data) {
    Eigen::RowVectorXd row1(builder.q()), row0(builder.q());
    double acc = 0.0;
    for (const auto& r : data.records) {
      builder.build_row(1, r.x, row1);
      builder.build_row(0, r.x, row0);
      acc += (row1 - row0).dot(fit.coefficients.transpose());
    }
    return acc / static_cast<double>(data.n());
  };

  switch (kind) {
    case EstimatorKind::OR: {
      auto builder = DesignBuilder::from_dataset(dataset, config.degree, true, true);
      DesignMatrix design = builder.build(dataset);
      GlmFit fit = fit_weighted_linear(design, y, Eigen::VectorXd::Ones(design.n()));
      return contrast_mean(builder, fit, dataset);
    }
    case EstimatorKind::IPW: {
      PropensityFit ps = estimate_propensity(dataset, config.degree);
      double acc = 0.0;
      for (std::size_t i = 0; i < dataset.n(); ++i) {
        const auto& r = dataset.records[i];
        double pi = ps.scores[static_cast<Eigen::Index>(i)];
        acc += r.d == 1 ? r.y / pi : -r.y / (1.0 - pi);
      }
      return acc / static_cast<double>(dataset.n());
    }
    case EstimatorKind::DR: {
      PropensityFit ps = estimate_propensity(dataset, config.degree);
      auto builder = DesignBuilder::from_dataset(dataset, config.degree, true, true);
      DesignMatrix design = builder.build(dataset);
      GlmFit fit = fit_weighted_linear(design, y, ps.kappa);
      return contrast_mean(builder, fit, dataset);
    }
    case EstimatorKind::NaiveMatched: {
      Dataset trimmed = match_for_config(dataset, config).trimmed_dataset;
      require_valid(trimmed);
      auto builder = DesignBuilder::from_dataset(trimmed, 1, true, false);
      DesignMatrix design = builder.build(trimmed);
      GlmFit fit = fit_weighted_linear(design, trimmed.outcomes(),
                                       Eigen::VectorXd::Ones(design.n()));
      return fit.coefficients[builder.treatment_column()];
    }
    case EstimatorKind::NaiveFull: {
      auto builder = DesignBuilder::from_dataset(dataset, 1, true, false);
      DesignMatrix design = builder.build(dataset);
      GlmFit fit = fit_weighted_linear(design, y, Eigen::VectorXd::Ones(design.n()));
      return fit.coefficients[builder.treatment_column()];
    }
  }
  throw DomainError("unknown estimator kind");
}

FrequentistResult frequentist_bootstrap(const Dataset& dataset,
                                        const EstimatorConfig& config,
                                        EstimatorKind kind) {
  require_valid(dataset);
  FrequentistResult result;
  result.reps = config.frequentist_reps;
  result.point = point_estimate(dataset, config, kind);

  const std::size_t n = dataset.n();
  std::vector<double> estimates(static_cast<std::size_t>(config.frequentist_reps));
  RngStream root = RngStream(config.rng_seed).substream(kStreamFrequentist);
  parallel_for(estimates.size(), config.threads, [&](std::size_t b) {
    RngStream local = root.substream(b);
    for (int attempt = 0;; ++attempt) {
      std::vector<std::size_t> rows(n);
      for (std::size_t i = 0; i < n; ++i) rows[i] = local.uniform_index(n);
      Dataset resample = dataset.subset(rows);
      try {
        require_valid(resample);
        estimates[b] = point_estimate(resample, config, kind);
        break;
      } catch (const Error& e) {
        if (attempt >= 1)
          throw Error("frequentist bootstrap resample " + std::to_string(b) +
                      " failed twice: " + e.what());
      }
    }
  });

  double mean = 0.0;
  for (double e : estimates) mean += e;
  mean /= static_cast<double>(estimates.size());
  double ss = 0.0;
  for (double e : estimates) ss += (e - mean) * (e - mean);
  result.se = estimates.size() > 1
                  ? std::sqrt(ss / static_cast<double>(estimates.size() - 1))
                  : 0.0;
  return result;
}

}  // namespace abdr
