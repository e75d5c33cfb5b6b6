#pragma once

#include <optional>

#include "abdr/bayes_boot.hpp"
#include "abdr/matching.hpp"
#include "abdr/types.hpp"

namespace abdr {

struct FrequentistResult {
  double point = 0.0;
  double se = 0.0;
  int reps = 0;
};

struct EstimateReport {
  EstimatorKind kind = EstimatorKind::DR;
  ATEDistribution bayes;
  std::optional<FrequentistResult> frequentist;
};

/// Outcome-regression estimator: Bayesian bootstrap over the unweighted
/// Gaussian model, posterior predictive ATE.
EstimateReport estimate_or(const Dataset& dataset, const EstimatorConfig& config);

/// Horvitz-Thompson weighting estimator, Bayesian-bootstrapped by drawing
/// Dirichlet weights into the weighted sum.
EstimateReport estimate_ipw(const Dataset& dataset, const EstimatorConfig& config);

/// Full doubly-robust pipeline: propensity fit, kappa weights, weighted
/// Bayesian bootstrap, optional prior mixing, posterior predictive ATE.
EstimateReport estimate_dr(const Dataset& dataset, const EstimatorConfig& config);

/// Intercept-plus-treatment regression only; optionally run on the
/// nearest-neighbour matched (trimmed) dataset.
EstimateReport estimate_naive(const Dataset& dataset, const EstimatorConfig& config,
                              bool use_matching);

/// Dispatch on config.estimator_kind / the given kind.
EstimateReport estimate(const Dataset& dataset, const EstimatorConfig& config,
                        EstimatorKind kind);

/// Classical row-resampling bootstrap of the non-Bayesian point estimator:
/// point is the full-sample estimate, se the standard deviation over
/// config.frequentist_reps resamples.
FrequentistResult frequentist_bootstrap(const Dataset& dataset,
                                        const EstimatorConfig& config,
                                        EstimatorKind kind);

/// Non-Bayesian point estimate for one dataset (unit bootstrap weights,
/// kappa as the estimator requires).
double point_estimate(const Dataset& dataset, const EstimatorConfig& config,
                      EstimatorKind kind);

}  // namespace abdr
