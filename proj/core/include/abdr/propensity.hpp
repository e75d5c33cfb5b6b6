#pragma once

#include <array>
#include <cstddef>

#include <Eigen/Core>

#include "abdr/glm.hpp"
#include "abdr/types.hpp"

namespace abdr {

/// Fitted treatment-assignment model: logistic fit, per-unit scores
/// (clamped into (0,1)), and the inverse-probability kappa weights.
struct PropensityFit {
  GlmFit glm;
  DesignBuilder builder;       // intercept + covariate basis, no treatment
  Eigen::VectorXd scores;      // pi_hat, in [1e-6, 1 - 1e-6]
  Eigen::VectorXd kappa;       // >= 1
};

/// Clamp range applied to fitted scores before any weight is formed.
constexpr double kScoreClampLo = 1e-6;
constexpr double kScoreClampHi = 1.0 - 1e-6;

/// Inverse-probability weight: 1/score for treated, 1/(1-score) for
/// controls. Always >= 1. Throws DomainError for scores outside (0,1).
double kappa_weight(int d, double score);

/// Kappa weights for a whole dataset from arbitrary scores; scores are
/// clamped into [1e-6, 1-1e-6] first so weights stay finite.
Eigen::VectorXd kappa_weights(const Dataset& dataset,
                              const Eigen::VectorXd& scores);

/// Fit the propensity model (unit weights, polynomial basis of the given
/// degree) and form scores and kappa weights.
PropensityFit estimate_propensity(const Dataset& dataset, int degree = 1);

/// Overlap diagnostics: score ranges per arm, units outside the common
/// support, and a 20-bin score histogram per arm.
struct OverlapSummary {
  double treated_min = 0.0, treated_max = 0.0;
  double control_min = 0.0, control_max = 0.0;
  double support_lo = 0.0, support_hi = 0.0;  // common support bounds
  std::size_t off_support_treated = 0;
  std::size_t off_support_control = 0;
  static constexpr int kBins = 20;  // equal-width bins on (0,1)
  std::array<std::size_t, kBins> treated_bins{};
  std::array<std::size_t, kBins> control_bins{};
};

OverlapSummary overlap_report(const PropensityFit& fit, const Dataset& dataset);

}  // namespace abdr
