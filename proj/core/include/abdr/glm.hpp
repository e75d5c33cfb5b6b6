#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "abdr/types.hpp"

namespace abdr {

enum class Family { Logistic, Gaussian };

/// Model matrix with an intercept in the first column. `warnings` carries
/// non-fatal notes attached at construction (e.g. degenerate basis terms).
struct DesignMatrix {
  Eigen::MatrixXd values;  // n x q
  std::vector<std::string> column_names;
  std::vector<std::string> warnings;

  Eigen::Index n() const { return values.rows(); }
  Eigen::Index q() const { return values.cols(); }
};

struct GlmFit {
  Eigen::VectorXd coefficients;
  Family family = Family::Gaussian;
  bool converged = true;
  int iterations = 0;
};

/// Builds design matrices and single prediction rows with a fixed column
/// layout: intercept, optional treatment, then per-covariate polynomial
/// terms. Degree-1 terms are the raw covariates; higher powers are taken
/// on the centered, unit-variance covariate so the columns stay well
/// scaled. Centering constants are frozen at construction so rows built
/// for new covariate values are consistent with the fitted design.
class DesignBuilder {
 public:
  static DesignBuilder from_dataset(const Dataset& dataset, int degree,
                                    bool include_treatment,
                                    bool include_covariates);

  DesignMatrix build(const Dataset& dataset) const;

  /// Fill one design row for treatment status d and covariate vector x.
  void build_row(int d, std::span<const double> x,
                 Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> row) const;

  int q() const { return q_; }
  /// Column index of the treatment term, or -1 when absent.
  int treatment_column() const { return include_treatment_ ? 1 : -1; }
  const std::vector<std::string>& column_names() const { return names_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  int degree_ = 1;
  bool include_treatment_ = true;
  bool include_covariates_ = true;
  int q_ = 1;
  std::vector<double> center_;
  std::vector<double> scale_;
  std::vector<std::string> names_;
  std::vector<std::string> warnings_;
};

/// Intercept + treatment + polynomial covariate basis, the standard
/// outcome-model design.
DesignMatrix expand_basis(const Dataset& dataset, int degree);

/// Weighted least squares via the weighted normal equations (one linear
/// solve). Coefficients are invariant to rescaling the weight vector.
GlmFit fit_weighted_linear(const DesignMatrix& design,
                           const Eigen::VectorXd& response,
                           const Eigen::VectorXd& weights);

/// Weighted Bernoulli likelihood maximised by IRLS. Stops when the
/// relative deviance change drops below 1e-8 (100 iterations max, then
/// converged=false). A coefficient exceeding 30 in absolute value raises
/// SeparationError naming the covariate.
GlmFit fit_weighted_logistic(const DesignMatrix& design,
                             const Eigen::VectorXd& response,
                             const Eigen::VectorXd& weights);

/// Mean predictions: probabilities for Logistic, the linear predictor for
/// Gaussian.
Eigen::VectorXd predict(const GlmFit& fit, const DesignMatrix& design);

/// Numerically stable logistic function.
double expit(double z);

}  // namespace abdr
