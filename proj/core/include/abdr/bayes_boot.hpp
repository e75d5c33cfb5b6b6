#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "abdr/glm.hpp"
#include "abdr/rng.hpp"
#include "abdr/types.hpp"

namespace abdr {

/// Per-unit bootstrap weights, standardized to mean one (sum = n).
struct BootstrapWeights {
  Eigen::VectorXd w;
};

/// n independent Exponential(1) draws divided by their mean; equivalent in
/// distribution to n times a flat Dirichlet vector.
BootstrapWeights draw_dirichlet_weights(int n, RngStream& rng);

enum class DrawsLabel { PN, PM };

/// Sampled parameter vectors, one per row.
struct PosteriorDraws {
  Eigen::MatrixXd draws;  // L x q
  DrawsLabel label = DrawsLabel::PN;
};

/// Optional per-replicate kappa recomputation (for sensitivity analysis
/// that refits the propensity model under the replicate's weights).
using KappaRefit =
    std::function<Eigen::VectorXd(const Eigen::VectorXd& weights, RngStream& rng)>;

/// Test seam: source of per-replicate bootstrap weights. The default
/// draws standardized exponentials.
using WeightSource = std::function<Eigen::VectorXd(int n, RngStream& rng)>;

/// Empirical bootstrap posterior of the outcome-model coefficients: for
/// each replicate, draw fresh Dirichlet weights, combine them with the
/// kappa weights (identically one when absent), and refit the Gaussian
/// model. Replicate l uses rng.substream(l), so results are identical
/// under any thread count. A replicate whose fit fails is redrawn once;
/// a second failure aborts with the replicate index.
PosteriorDraws posterior_sample(const DesignMatrix& design,
                                const Eigen::VectorXd& response,
                                const std::optional<Eigen::VectorXd>& kappa,
                                int replicates, RngStream rng, int threads = 1,
                                const KappaRefit& kappa_refit = nullptr,
                                const WeightSource& weight_source = nullptr);

/// Mix a parametric prior into the empirical posterior: each of the m
/// proposals comes from the prior with probability k/(k+L) (perturbing
/// only the target coefficient; the other coordinates are copied from a
/// uniformly chosen empirical row), otherwise from a uniformly chosen
/// empirical row. The proposals are then resampled m times with
/// probabilities proportional to Gamma((L+k)/m, 1) weights.
PosteriorDraws muliere_secchi_resample(const PosteriorDraws& pn,
                                       const PriorSpec& prior, int m,
                                       RngStream rng);

/// Posterior predictive ATE samples with summary statistics.
struct ATEDistribution {
  std::vector<double> samples;
  double mean = 0.0;
  double sd = 0.0;
  std::pair<double, double> credible_interval_95{0.0, 0.0};
};

/// Compute mean, sd (n-1 normalized) and the empirical 2.5/97.5 percentile
/// interval from the samples.
ATEDistribution summarize_ate(std::vector<double> samples);

/// For each of M draws: pick one parameter row uniformly from `pm`, pick V
/// covariate vectors uniformly with replacement from the dataset, and
/// average the predicted treated-minus-control contrast. With an identity
/// link and no treatment interactions every sample equals the drawn
/// treatment coefficient exactly.
ATEDistribution posterior_predictive_ate(const PosteriorDraws& pm,
                                         const Dataset& dataset,
                                         const DesignBuilder& builder,
                                         Family family, int V, int M,
                                         RngStream rng);

}  // namespace abdr
