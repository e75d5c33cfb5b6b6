#include "abdr/types.hpp"

#include <cmath>

#include "abdr/errors.hpp"

namespace abdr {

std::size_t Dataset::treated_count() const {
  std::size_t c = 0;
  for (const auto& r : records) c += (r.d == 1);
  return c;
}

std::size_t Dataset::control_count() const {
  std::size_t c = 0;
  for (const auto& r : records) c += (r.d == 0);
  return c;
}

Eigen::VectorXd Dataset::outcomes() const {
  Eigen::VectorXd y(static_cast<Eigen::Index>(n()));
  for (std::size_t i = 0; i < n(); ++i) y[static_cast<Eigen::Index>(i)] = records[i].y;
  return y;
}

Eigen::VectorXd Dataset::treatments() const {
  Eigen::VectorXd d(static_cast<Eigen::Index>(n()));
  for (std::size_t i = 0; i < n(); ++i) d[static_cast<Eigen::Index>(i)] = records[i].d;
  return d;
}

Eigen::MatrixXd Dataset::covariates() const {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n()), static_cast<Eigen::Index>(p()));
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t j = 0; j < p(); ++j)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = records[i].x[j];
  return x;
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  Dataset out;
  out.covariate_names = covariate_names;
  out.records.reserve(rows.size());
  for (std::size_t r : rows) out.records.push_back(records[r]);
  return out;
}

std::vector<Violation> validate(const Dataset& dataset) {
  std::vector<Violation> out;

  Violation bad_dim{"covariate dimension differs from covariate_names length", {}};
  Violation bad_d{"treatment indicator not in {0,1}", {}};
  Violation bad_finite{"non-finite outcome or covariate value", {}};
  for (std::size_t i = 0; i < dataset.n(); ++i) {
    const auto& r = dataset.records[i];
    if (r.x.size() != dataset.p()) bad_dim.rows.push_back(i);
    if (r.d != 0 && r.d != 1) bad_d.rows.push_back(i);
    bool finite = std::isfinite(r.y);
    for (double v : r.x) finite = finite && std::isfinite(v);
    if (!finite) bad_finite.rows.push_back(i);
  }
  if (!bad_dim.rows.empty()) out.push_back(std::move(bad_dim));
  if (!bad_d.rows.empty()) out.push_back(std::move(bad_d));
  if (!bad_finite.rows.empty()) out.push_back(std::move(bad_finite));

  if (dataset.n() == 0) {
    out.push_back({"dataset is empty", {}});
  } else {
    if (dataset.treated_count() == 0) out.push_back({"no treated units", {}});
    if (dataset.control_count() == 0) out.push_back({"no control units", {}});
  }
  return out;
}

void require_valid(const Dataset& dataset) {
  auto violations = validate(dataset);
  if (violations.empty()) return;
  std::string msg = "invalid dataset:";
  for (const auto& v : violations) {
    msg += " " + v.message;
    if (!v.rows.empty()) {
      msg += " (rows";
      std::size_t shown = 0;
      for (std::size_t r : v.rows) {
        msg += " " + std::to_string(r);
        if (++shown == 5) {
          msg += " ...";
          break;
        }
      }
      msg += ")";
    }
    msg += ";";
  }
  throw ValidationError(msg);
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::OR: return "or";
    case EstimatorKind::IPW: return "ipw";
    case EstimatorKind::DR: return "dr";
    case EstimatorKind::NaiveMatched: return "naive-matched";
    case EstimatorKind::NaiveFull: return "naive-full";
  }
  return "?";
}

std::optional<EstimatorKind> estimator_kind_from_string(const std::string& name) {
  if (name == "or") return EstimatorKind::OR;
  if (name == "ipw") return EstimatorKind::IPW;
  if (name == "dr") return EstimatorKind::DR;
  if (name == "naive-matched") return EstimatorKind::NaiveMatched;
  if (name == "naive-full" || name == "naive") return EstimatorKind::NaiveFull;
  return std::nullopt;
}

}  // namespace abdr
