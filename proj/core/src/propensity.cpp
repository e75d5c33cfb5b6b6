#include "abdr/propensity.hpp"

#include <algorithm>
#include <limits>

#include "abdr/errors.hpp"

namespace abdr {

double kappa_weight(int d, double score) {
  if (!(score > 0.0 && score < 1.0))
    throw DomainError("propensity score must lie strictly inside (0,1)");
  return d == 1 ? 1.0 / score : 1.0 / (1.0 - score);
}

Eigen::VectorXd kappa_weights(const Dataset& dataset,
                              const Eigen::VectorXd& scores) {
  if (scores.size() != static_cast<Eigen::Index>(dataset.n()))
    throw DomainError("score vector length does not match dataset size");
  Eigen::VectorXd kappa(scores.size());
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    double s = std::clamp(scores[i], kScoreClampLo, kScoreClampHi);
    kappa[i] = kappa_weight(dataset.records[static_cast<std::size_t>(i)].d, s);
  }
  return kappa;
}

PropensityFit estimate_propensity(const Dataset& dataset, int degree) {
  require_valid(dataset);
  PropensityFit fit;
  fit.builder = DesignBuilder::from_dataset(dataset, degree,
                                            /*include_treatment=*/false,
                                            /*include_covariates=*/true);
  DesignMatrix design = fit.builder.build(dataset);
  Eigen::VectorXd response = dataset.treatments();
  Eigen::VectorXd unit = Eigen::VectorXd::Ones(design.n());
  fit.glm = fit_weighted_logistic(design, response, unit);
  fit.scores = predict(fit.glm, design);
  for (Eigen::Index i = 0; i < fit.scores.size(); ++i)
    fit.scores[i] = std::clamp(fit.scores[i], kScoreClampLo, kScoreClampHi);
  fit.kappa = kappa_weights(dataset, fit.scores);
  return fit;
}

OverlapSummary overlap_report(const PropensityFit& fit, const Dataset& dataset) {
  OverlapSummary s;
  s.treated_min = s.control_min = std::numeric_limits<double>::infinity();
  s.treated_max = s.control_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dataset.n(); ++i) {
    double sc = fit.scores[static_cast<Eigen::Index>(i)];
    int bin = std::min(OverlapSummary::kBins - 1,
                       static_cast<int>(sc * OverlapSummary::kBins));
    if (dataset.records[i].d == 1) {
      s.treated_min = std::min(s.treated_min, sc);
      s.treated_max = std::max(s.treated_max, sc);
      ++s.treated_bins[static_cast<std::size_t>(bin)];
    } else {
      s.control_min = std::min(s.control_min, sc);
      s.control_max = std::max(s.control_max, sc);
      ++s.control_bins[static_cast<std::size_t>(bin)];
    }
  }
  s.support_lo = std::max(s.treated_min, s.control_min);
  s.support_hi = std::min(s.treated_max, s.control_max);
  for (std::size_t i = 0; i < dataset.n(); ++i) {
    double sc = fit.scores[static_cast<Eigen::Index>(i)];
    if (sc < s.support_lo || sc > s.support_hi) {
      if (dataset.records[i].d == 1)
        ++s.off_support_treated;
      else
        ++s.off_support_control;
    }
  }
  return s;
}

}  // namespace abdr
