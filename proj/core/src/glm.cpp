#include "abdr/glm.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

#include "abdr/errors.hpp"

namespace abdr {

namespace {
constexpr double kDevianceTol = 1e-8;
constexpr int kMaxIterations = 100;
constexpr double kCoefficientCap = 30.0;
constexpr double kProbFloor = 1e-10;
}  // namespace

double expit(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  double e = std::exp(z);
  return e / (1.0 + e);
}

DesignBuilder DesignBuilder::from_dataset(const Dataset& dataset, int degree,
                                          bool include_treatment,
                                          bool include_covariates) {
  if (degree < 1) throw DomainError("basis degree must be >= 1");
  DesignBuilder b;
  b.degree_ = degree;
  b.include_treatment_ = include_treatment;
  b.include_covariates_ = include_covariates;
  b.names_.push_back("(intercept)");
  if (include_treatment) b.names_.push_back("d");

  if (include_covariates) {
    const std::size_t p = dataset.p();
    const double n = static_cast<double>(dataset.n());
    b.center_.assign(p, 0.0);
    b.scale_.assign(p, 1.0);
    for (std::size_t j = 0; j < p; ++j) {
      double mean = 0.0;
      for (const auto& r : dataset.records) mean += r.x[j];
      mean /= n;
      double var = 0.0;
      bool constant = true;
      for (const auto& r : dataset.records) {
        double c = r.x[j] - mean;
        var += c * c;
        constant = constant && r.x[j] == dataset.records[0].x[j];
      }
      var /= n;
      b.center_[j] = mean;
      if (!constant && var > 0.0) {
        b.scale_[j] = std::sqrt(var);
      } else {
        b.scale_[j] = 1.0;
        if (degree > 1)
          b.warnings_.push_back("covariate '" + dataset.covariate_names[j] +
                                "' is constant; polynomial terms are rank deficient");
      }
      for (int t = 1; t <= degree; ++t) {
        std::string name = dataset.covariate_names[j];
        if (t > 1) name += "^" + std::to_string(t);
        b.names_.push_back(std::move(name));
      }
    }
  }
  b.q_ = static_cast<int>(b.names_.size());
  return b;
}

void DesignBuilder::build_row(
    int d, std::span<const double> x,
    Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> row) const {
  Eigen::Index c = 0;
  row[c++] = 1.0;
  if (include_treatment_) row[c++] = static_cast<double>(d);
  if (include_covariates_) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      row[c++] = x[j];
      if (degree_ > 1) {
        double z = (x[j] - center_[j]) / scale_[j];
        double zp = z;
        for (int t = 2; t <= degree_; ++t) {
          zp *= z;
          row[c++] = zp;
        }
      }
    }
  }
}

DesignMatrix DesignBuilder::build(const Dataset& dataset) const {
  DesignMatrix m;
  m.column_names = names_;
  m.warnings = warnings_;
  m.values.resize(static_cast<Eigen::Index>(dataset.n()), q_);
  for (std::size_t i = 0; i < dataset.n(); ++i) {
    const auto& r = dataset.records[i];
    build_row(r.d, r.x, m.values.row(static_cast<Eigen::Index>(i)));
  }
  return m;
}

DesignMatrix expand_basis(const Dataset& dataset, int degree) {
  return DesignBuilder::from_dataset(dataset, degree, true, true).build(dataset);
}

namespace {

void check_dims(const DesignMatrix& design, const Eigen::VectorXd& response,
                const Eigen::VectorXd& weights) {
  if (design.n() != response.size() || design.n() != weights.size())
    throw DomainError("design, response and weight dimensions disagree");
  if ((weights.array() <= 0.0).any())
    throw DomainError("all weights must be strictly positive");
}

/// Solve the weighted normal equations; throws SingularFitError on rank
/// deficiency.
Eigen::VectorXd solve_wls(const DesignMatrix& design,
                          const Eigen::VectorXd& response,
                          const Eigen::VectorXd& weights) {
  const Eigen::Index q = design.q();
  Eigen::MatrixXd xtw = design.values.transpose() * weights.asDiagonal();
  Eigen::MatrixXd xtwx = xtw * design.values;
  Eigen::VectorXd xtwy = xtw * response;

  Eigen::LDLT<Eigen::MatrixXd> ldlt(xtwx);
  Eigen::VectorXd dvec = ldlt.vectorD();
  double dmax = dvec.maxCoeff();
  if (ldlt.info() != Eigen::Success || dmax <= 0.0 ||
      dvec.minCoeff() <= 1e-12 * dmax) {
    std::string msg = "rank-deficient weighted design (q=" + std::to_string(q) + ")";
    throw SingularFitError(msg);
  }
  return ldlt.solve(xtwy);
}

}  // namespace

GlmFit fit_weighted_linear(const DesignMatrix& design,
                           const Eigen::VectorXd& response,
                           const Eigen::VectorXd& weights) {
  check_dims(design, response, weights);
  GlmFit fit;
  fit.family = Family::Gaussian;
  fit.coefficients = solve_wls(design, response, weights);
  fit.converged = true;
  fit.iterations = 1;
  return fit;
}

GlmFit fit_weighted_logistic(const DesignMatrix& design,
                             const Eigen::VectorXd& response,
                             const Eigen::VectorXd& weights) {
  check_dims(design, response, weights);
  const Eigen::Index n = design.n();
  const Eigen::Index q = design.q();

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(q);
  Eigen::VectorXd eta(n), prob(n), irls_w(n), z(n);
  double deviance = std::numeric_limits<double>::infinity();
  GlmFit fit;
  fit.family = Family::Logistic;
  fit.converged = false;

  for (int it = 1; it <= kMaxIterations; ++it) {
    eta.noalias() = design.values * beta;
    double dev = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double p = expit(eta[i]);
      p = std::min(1.0 - kProbFloor, std::max(kProbFloor, p));
      prob[i] = p;
      double v = p * (1.0 - p);
      irls_w[i] = weights[i] * v;
      z[i] = eta[i] + (response[i] - p) / v;
      dev -= 2.0 * weights[i] *
             (response[i] * std::log(p) + (1.0 - response[i]) * std::log(1.0 - p));
    }

    Eigen::VectorXd beta_new = solve_wls(design, z, irls_w);

    double cap = beta_new.cwiseAbs().maxCoeff();
    if (cap > kCoefficientCap) {
      Eigen::Index worst = 0;
      beta_new.cwiseAbs().maxCoeff(&worst);
      throw SeparationError("logistic fit diverged; possible separation on '" +
                            design.column_names[static_cast<std::size_t>(worst)] +
                            "'");
    }

    double step = (beta_new - beta).cwiseAbs().maxCoeff();
    beta = beta_new;
    fit.iterations = it;
    if (std::abs(deviance - dev) < kDevianceTol * (std::abs(dev) + 0.1) ||
        step < 1e-10) {
      fit.converged = true;
      break;
    }
    deviance = dev;
  }
  fit.coefficients = beta;
  return fit;
}

Eigen::VectorXd predict(const GlmFit& fit, const DesignMatrix& design) {
  if (design.q() != fit.coefficients.size())
    throw DomainError("design column count does not match coefficient length");
  Eigen::VectorXd eta = design.values * fit.coefficients;
  if (fit.family == Family::Gaussian) return eta;
  for (Eigen::Index i = 0; i < eta.size(); ++i) eta[i] = expit(eta[i]);
  return eta;
}

}  // namespace abdr
