#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "abdr/estimators.hpp"
#include "abdr/propensity.hpp"
#include "abdr/sim.hpp"
#include "abdr/types.hpp"

namespace abdr {

/// Bumped when the JSON artifact layout changes incompatibly.
constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const EstimatorConfig& config);
nlohmann::json to_json(const PriorSpec& prior);
nlohmann::json to_json(const ATEDistribution& dist, bool include_samples);
nlohmann::json to_json(const OverlapSummary& summary);
nlohmann::json to_json(const DgpParams& params);

/// One EstimateReport entry (kind, posterior summary, optional
/// frequentist comparison).
nlohmann::json to_json(const EstimateReport& report, bool include_samples);

/// Full estimate artifact: schema version, seed, config, one entry per
/// estimator, optional percent-of-baseline conveniences.
nlohmann::json estimate_artifact(const std::vector<EstimateReport>& reports,
                                 const EstimatorConfig& config,
                                 bool include_samples,
                                 std::optional<double> baseline_mean);

/// Full simulation artifact: schema version, seed, config, dgp, rows.
nlohmann::json simulation_artifact(const SimulationReport& report,
                                   const DgpParams& params,
                                   const EstimatorConfig& config);

/// Aligned text table with one row per simulation configuration
/// (Av. Est. / Emp. Var. / MSE), footer carrying seed and config.
std::string simulation_table(const SimulationReport& report,
                             const EstimatorConfig& config);

/// Aligned text table with one row per estimator: posterior mean, s.d.,
/// 95% credible interval, and frequentist est./s.e. when present.
std::string estimate_table(const std::vector<EstimateReport>& reports,
                           const std::vector<std::string>& labels,
                           const EstimatorConfig& config,
                           std::optional<double> baseline_mean);

/// 20-bin histogram with an empirical density polyline, written as a
/// self-contained SVG. The config JSON is embedded in a <desc> element so
/// the artifact is regenerable from its own metadata.
std::string svg_histogram(const std::vector<std::vector<double>>& sample_sets,
                          const std::vector<std::string>& labels,
                          const std::string& title,
                          const std::string& metadata_json);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace abdr
