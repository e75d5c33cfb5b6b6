#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace abdr {

/// One observed unit: outcome, binary treatment, covariate vector.
struct ObservationRecord {
  double y = 0.0;
  int d = 0;  // treatment indicator, 0 or 1
  std::vector<double> x;
};

/// Ordered collection of records plus covariate names. Immutable by
/// convention after construction; safe to share across threads.
struct Dataset {
  std::vector<ObservationRecord> records;
  std::vector<std::string> covariate_names;

  std::size_t n() const { return records.size(); }
  std::size_t p() const { return covariate_names.size(); }

  std::size_t treated_count() const;
  std::size_t control_count() const;

  Eigen::VectorXd outcomes() const;
  Eigen::VectorXd treatments() const;
  /// n x p covariate matrix.
  Eigen::MatrixXd covariates() const;

  /// Subset by original row indices, preserving the given order.
  Dataset subset(const std::vector<std::size_t>& rows) const;
};

/// One failed invariant, with the offending row indices when applicable.
struct Violation {
  std::string message;
  std::vector<std::size_t> rows;
};

/// Check all Dataset invariants. Empty result means the dataset is valid
/// for estimation (consistent dimensions, finite values, d in {0,1},
/// both arms populated). Violations are returned, never thrown.
std::vector<Violation> validate(const Dataset& dataset);

/// Throw ValidationError if validate() reports anything.
void require_valid(const Dataset& dataset);

enum class EstimatorKind { OR, IPW, DR, NaiveMatched, NaiveFull };

std::string to_string(EstimatorKind kind);
std::optional<EstimatorKind> estimator_kind_from_string(const std::string& name);

/// Parametric prior mixed into the bootstrap posterior. Only the target
/// coefficient is perturbed by prior-origin proposals; the remaining
/// coordinates are copied from a uniformly chosen empirical draw.
struct PriorSpec {
  enum class Kind { NormalOnCoefficient, PointMass };
  Kind kind = Kind::NormalOnCoefficient;
  int target_coefficient = 1;  // column index into the coefficient vector
  double mean = 0.0;
  double sd = 1.0;      // ignored for PointMass
  double faith_k = 1.0; // pseudo-count weight of the prior, >= 1
};

/// Matching settings used by the naive-matched estimator and the CLI.
struct MatchSettings {
  int ratio = 1;
  bool with_replacement = false;
  std::optional<double> caliper;
};

/// Knobs shared by every estimator front end.
struct EstimatorConfig {
  EstimatorKind estimator_kind = EstimatorKind::DR;
  int bootstrap_reps = 1000;   // M (and L, the posterior chain length)
  int resample_size = 1000;    // V, covariate resamples per ATE draw
  std::optional<PriorSpec> prior;
  std::uint64_t rng_seed = 1;
  int degree = 1;              // polynomial basis degree for both models
  bool reestimate_ps = false;  // refit the PS inside each replicate
  bool with_frequentist = false;
  int frequentist_reps = 1000; // B
  int threads = 1;
  MatchSettings match;
};

}  // namespace abdr
