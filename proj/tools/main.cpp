// Command-line front end: simulate, estimate, match, difference, report.

#include <filesystem>
#include <fstream>
#include <map>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "abdr/csv.hpp"
#include "abdr/errors.hpp"
#include "abdr/estimators.hpp"
#include "abdr/matching.hpp"
#include "abdr/propensity.hpp"
#include "abdr/report.hpp"
#include "abdr/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
  std::optional<std::uint64_t> seed;
  int threads = 0;  // 0 = hardware concurrency
  std::string out_dir = ".";
};

std::uint64_t materialize_seed(const CommonOpts& opts) {
  if (opts.seed) return *opts.seed;
  std::random_device rd;
  std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cout << "seed: " << s << " (generated; pass --seed to reproduce)\n";
  return s;
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw abdr::Error("cannot create output directory: " + dir);
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw abdr::Error("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct EstimateOpts {
  std::string input;
  std::string outcome_col = "y";
  std::string treatment_col = "d";
  std::string covariate_cols;
  std::string estimators = "or,ipw,dr,naive-matched,naive-full";
  std::string baseline_col;
  bool emit_samples = false;
  abdr::EstimatorConfig config;
  double prior_mean = 0.0;
  double prior_sd = 1.0;
  double faith_k = 1.0;
  bool have_prior = false;
  double caliper = 0.0;
  bool have_caliper = false;
};

abdr::Dataset load_input(const EstimateOpts& opts) {
  return abdr::load_csv(opts.input, opts.outcome_col, opts.treatment_col,
                        split_list(opts.covariate_cols));
}

int run_estimate(EstimateOpts& opts, CommonOpts& common) {
  opts.config.rng_seed = materialize_seed(common);
  opts.config.threads = resolve_threads(common.threads);
  if (opts.have_prior) {
    abdr::PriorSpec prior;
    prior.mean = opts.prior_mean;
    prior.sd = opts.prior_sd;
    prior.faith_k = opts.faith_k;
    opts.config.prior = prior;
  }
  if (opts.have_caliper) opts.config.match.caliper = opts.caliper;

  std::vector<abdr::EstimatorKind> kinds;
  for (const auto& name : split_list(opts.estimators)) {
    auto k = abdr::estimator_kind_from_string(name);
    if (!k) {
      std::cerr << "unknown estimator '" << name << "'\n";
      return kExitUsage;
    }
    kinds.push_back(*k);
  }
  if (kinds.empty()) {
    std::cerr << "no estimators requested\n";
    return kExitUsage;
  }

  abdr::Dataset data;
  try {
    data = load_input(opts);
    abdr::require_valid(data);
  } catch (const abdr::Error& e) {
    std::cerr << "ingestion error: " << e.what() << '\n';
    return kExitRuntime;
  }

  std::optional<double> baseline_mean;
  if (!opts.baseline_col.empty()) {
    abdr::Dataset base = abdr::load_csv(opts.input, opts.baseline_col,
                                        opts.treatment_col, {});
    double sum = 0.0;
    for (const auto& r : base.records) sum += r.y;
    baseline_mean = sum / static_cast<double>(base.n());
  }

  ensure_out_dir(common.out_dir);
  std::vector<abdr::EstimateReport> reports;
  std::vector<std::string> labels;
  try {
    for (auto kind : kinds) {
      reports.push_back(abdr::estimate(data, opts.config, kind));
      labels.push_back(abdr::to_string(kind));
    }
  } catch (const abdr::Error& e) {
    std::cerr << "estimation error: " << e.what() << '\n';
    return kExitRuntime;
  }

  json artifact = abdr::estimate_artifact(reports, opts.config,
                                          opts.emit_samples, baseline_mean);
  write_json(common.out_dir + "/estimate.json", artifact);
  std::string table =
      abdr::estimate_table(reports, labels, opts.config, baseline_mean);
  abdr::write_text_file(common.out_dir + "/estimate.txt", table);
  std::cout << table;

  json meta = {{"seed", opts.config.rng_seed},
               {"config", abdr::to_json(opts.config)}};
  for (std::size_t i = 0; i < reports.size(); ++i) {
    std::string svg = abdr::svg_histogram(
        {reports[i].bayes.samples}, {labels[i]},
        "posterior predictive distribution of the ATE (" + labels[i] + ")",
        meta.dump());
    abdr::write_text_file(common.out_dir + "/posterior_" + labels[i] + ".svg",
                          svg);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Doubly-robust average treatment effect estimation with an "
               "approximate Bayesian bootstrap"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value config file; flags override");

  CommonOpts common;

  // ---- simulate ----
  auto* sim_cmd = app.add_subcommand(
      "simulate", "Run the synthetic-data simulation study and/or emit a dataset");
  int runs = 1000;
  abdr::DgpParams dgp;
  abdr::EstimatorConfig sim_config;
  sim_config.bootstrap_reps = 200;
  sim_config.resample_size = 1000;
  std::string data_out;
  double sim_prior_sd = 1.0, sim_faith_k = 1.0;
  bool sim_prior_mean_set = false;
  double sim_prior_mean = 5.0;
  sim_cmd->add_option("--runs", runs, "Simulation runs");
  sim_cmd->add_option("--n", dgp.n, "Dataset size per run");
  sim_cmd->add_option("--reps", sim_config.bootstrap_reps,
                      "Bootstrap replicates per run (posterior chain length)");
  sim_cmd->add_option("--resample-V", sim_config.resample_size,
                      "Covariate resamples per posterior ATE draw");
  sim_cmd->add_option("--alpha0", dgp.alpha0, "Assignment model intercept");
  sim_cmd->add_option("--alpha1", dgp.alpha1, "Assignment model slope");
  sim_cmd->add_option("--beta0", dgp.beta0, "Outcome intercept");
  sim_cmd->add_option("--beta1", dgp.beta1, "Treatment effect (true ATE)");
  sim_cmd->add_option("--beta2", dgp.beta2, "Covariate effect on outcome");
  sim_cmd->add_option("--x-scale", dgp.x_scale, "Covariate standard deviation");
  sim_cmd->add_option("--y-noise", dgp.y_noise_scale,
                      "Outcome noise standard deviation");
  sim_cmd->add_option("--prior-mean", sim_prior_mean,
                      "Prior mean for the treatment coefficient")
      ->each([&](const std::string&) { sim_prior_mean_set = true; });
  sim_cmd->add_option("--prior-sd", sim_prior_sd, "Prior standard deviation");
  sim_cmd->add_option("--faith-k", sim_faith_k, "Prior pseudo-count weight k");
  sim_cmd->add_option("--data-out", data_out,
                      "Write one generated dataset to this CSV and skip the "
                      "study unless --runs is also given");
  bool runs_set = false;
  sim_cmd->get_option("--runs")->each([&](const std::string&) { runs_set = true; });

  // ---- estimate ----
  auto* est_cmd = app.add_subcommand("estimate", "Estimate treatment effects from a CSV");
  EstimateOpts est;
  est_cmd->add_option("--input", est.input, "Input CSV")->required();
  est_cmd->add_option("--outcome-col", est.outcome_col, "Outcome column");
  est_cmd->add_option("--treatment-col", est.treatment_col, "Treatment column (0/1)");
  est_cmd->add_option("--covariate-cols", est.covariate_cols,
                      "Comma-separated covariate columns");
  est_cmd->add_option("--estimators", est.estimators,
                      "Comma-separated: or,ipw,dr,naive-matched,naive-full");
  est_cmd->add_option("--reps", est.config.bootstrap_reps, "Bootstrap replicates M");
  est_cmd->add_option("--resample-V", est.config.resample_size,
                      "Covariate resamples per ATE draw");
  est_cmd->add_option("--degree", est.config.degree, "Polynomial basis degree");
  est_cmd->add_option("--prior-mean", est.prior_mean, "Prior mean (enables the prior)")
      ->each([&](const std::string&) { est.have_prior = true; });
  est_cmd->add_option("--prior-sd", est.prior_sd, "Prior standard deviation");
  est_cmd->add_option("--faith-k", est.faith_k, "Prior pseudo-count weight k");
  est_cmd->add_flag("--frequentist", est.config.with_frequentist,
                    "Also run the frequentist bootstrap comparator");
  est_cmd->add_option("--frequentist-reps", est.config.frequentist_reps,
                      "Frequentist bootstrap resamples B");
  est_cmd->add_flag("--reestimate-ps", est.config.reestimate_ps,
                    "Refit the propensity model inside each replicate");
  est_cmd->add_option("--ratio", est.config.match.ratio, "Matching ratio");
  est_cmd->add_flag("--with-replacement", est.config.match.with_replacement,
                    "Match with replacement");
  est_cmd->add_option("--caliper", est.caliper, "Matching caliper on score distance")
      ->each([&](const std::string&) { est.have_caliper = true; });
  est_cmd->add_option("--baseline-col", est.baseline_col,
                      "Column whose mean scales the ATE to a percentage");
  est_cmd->add_flag("--emit-samples", est.emit_samples,
                    "Include raw posterior samples in the JSON artifact");

  // ---- match ----
  auto* match_cmd = app.add_subcommand("match", "Nearest-neighbour matching only");
  EstimateOpts match_opts;
  match_cmd->add_option("--input", match_opts.input, "Input CSV")->required();
  match_cmd->add_option("--outcome-col", match_opts.outcome_col, "Outcome column");
  match_cmd->add_option("--treatment-col", match_opts.treatment_col, "Treatment column");
  match_cmd->add_option("--covariate-cols", match_opts.covariate_cols,
                        "Comma-separated covariate columns");
  match_cmd->add_option("--degree", match_opts.config.degree, "Polynomial basis degree");
  match_cmd->add_option("--ratio", match_opts.config.match.ratio, "Matching ratio");
  match_cmd->add_flag("--with-replacement", match_opts.config.match.with_replacement,
                      "Match with replacement");
  match_cmd->add_option("--caliper", match_opts.caliper, "Matching caliper")
      ->each([&](const std::string&) { match_opts.have_caliper = true; });

  // ---- difference ----
  auto* diff_cmd = app.add_subcommand(
      "difference", "Append a post-minus-pre outcome column to a CSV");
  std::string diff_input, pre_col, post_col, diff_out, out_col = "y_diff";
  diff_cmd->add_option("--input", diff_input, "Input CSV")->required();
  diff_cmd->add_option("--pre-col", pre_col, "Pre-period outcome column")->required();
  diff_cmd->add_option("--post-col", post_col, "Post-period outcome column")->required();
  diff_cmd->add_option("--out-col", out_col, "Name of the appended column");
  diff_cmd->add_option("--output", diff_out, "Output CSV")->required();

  // ---- report ----
  auto* report_cmd = app.add_subcommand(
      "report", "Merge estimate JSON artifacts into one comparison report");
  std::vector<std::string> report_inputs;
  report_cmd->add_option("--inputs", report_inputs, "Estimate JSON artifacts")
      ->required()
      ->expected(-1);

  for (auto* cmd : {sim_cmd, est_cmd, match_cmd, report_cmd}) {
    cmd->add_option("--seed", common.seed, "Root RNG seed (generated if absent)");
    cmd->add_option("--threads", common.threads,
                    "Worker threads (0 = hardware concurrency)");
    cmd->add_option("--out-dir", common.out_dir, "Output directory");
  }
  diff_cmd->add_option("--seed", common.seed, "Unused; accepted for uniformity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (sim_cmd->parsed()) {
      sim_config.rng_seed = materialize_seed(common);
      sim_config.threads = resolve_threads(common.threads);
      abdr::PriorSpec prior;
      prior.mean = sim_prior_mean_set ? sim_prior_mean : dgp.beta1;
      prior.sd = sim_prior_sd;
      prior.faith_k = sim_faith_k;
      sim_config.prior = prior;

      if (!data_out.empty()) {
        abdr::RngStream rng = abdr::RngStream(sim_config.rng_seed).substream(
            0xDA7A0000ull);
        abdr::Dataset data = abdr::generate_dgp(dgp, rng);
        abdr::save_csv(data_out, data);
        std::cout << "wrote " << data.n() << " rows to " << data_out << '\n';
        if (!runs_set) return kExitOk;
      }
      if (runs < 1) {
        std::cerr << "--runs must be >= 1\n";
        return kExitUsage;
      }
      if (dgp.n < 2 || sim_config.bootstrap_reps < 1 ||
          sim_config.resample_size < 1) {
        std::cerr << "--n must be >= 2 and --reps/--resample-V >= 1\n";
        return kExitUsage;
      }
      ensure_out_dir(common.out_dir);
      abdr::SimulationReport report = abdr::run_simulation_study(
          runs, dgp, sim_config, abdr::RngStream(sim_config.rng_seed));
      write_json(common.out_dir + "/simulation.json",
                 abdr::simulation_artifact(report, dgp, sim_config));
      std::string table = abdr::simulation_table(report, sim_config);
      abdr::write_text_file(common.out_dir + "/simulation.txt", table);
      std::cout << table;
      return kExitOk;
    }

    if (est_cmd->parsed()) return run_estimate(est, common);

    if (match_cmd->parsed()) {
      match_opts.config.rng_seed = materialize_seed(common);
      if (match_opts.have_caliper)
        match_opts.config.match.caliper = match_opts.caliper;
      abdr::Dataset data = load_input(match_opts);
      abdr::require_valid(data);
      abdr::PropensityFit ps =
          abdr::estimate_propensity(data, match_opts.config.degree);
      abdr::MatchResult result = abdr::nearest_neighbor_match(
          ps, data, match_opts.config.match.ratio,
          match_opts.config.match.with_replacement,
          match_opts.config.match.caliper);
      ensure_out_dir(common.out_dir);
      abdr::save_pairs_csv(common.out_dir + "/pairs.csv", result);
      abdr::save_csv(common.out_dir + "/trimmed.csv", result.trimmed_dataset,
                     match_opts.outcome_col, match_opts.treatment_col);
      json overlap = {{"schema_version", abdr::kSchemaVersion},
                      {"artifact", "overlap"},
                      {"seed", match_opts.config.rng_seed},
                      {"config", abdr::to_json(match_opts.config)},
                      {"overlap", abdr::to_json(abdr::overlap_report(ps, data))},
                      {"pairs", result.matched_indices.size()},
                      {"trimmed_n", result.trimmed_dataset.n()}};
      write_json(common.out_dir + "/overlap.json", overlap);
      std::cout << "matched " << result.matched_indices.size() << " pairs; trimmed n="
                << result.trimmed_dataset.n() << '\n';
      return kExitOk;
    }

    if (diff_cmd->parsed()) {
      abdr::difference_columns(diff_input, pre_col, post_col, out_col, diff_out);
      std::cout << "wrote " << diff_out << '\n';
      return kExitOk;
    }

    if (report_cmd->parsed()) {
      ensure_out_dir(common.out_dir);
      std::vector<abdr::EstimateReport> merged;
      std::vector<std::string> labels;
      std::vector<std::vector<double>> sample_sets;
      std::vector<std::string> sample_labels;
      abdr::EstimatorConfig first_config;
      bool have_config = false;
      std::map<std::string, int> label_counts;
      for (const auto& path : report_inputs) {
        std::ifstream in(path);
        if (!in) throw abdr::Error("cannot open " + path);
        json j = json::parse(in);
        if (!j.contains("schema_version") ||
            j["schema_version"].get<int>() != abdr::kSchemaVersion)
          throw abdr::Error("unsupported schema version in " + path);
        if (!have_config) {
          first_config.rng_seed = j["seed"].get<std::uint64_t>();
          have_config = true;
        }
        for (const auto& e : j["estimates"]) {
          abdr::EstimateReport r;
          std::string kind = e["kind"].get<std::string>();
          r.kind = abdr::estimator_kind_from_string(kind).value_or(
              abdr::EstimatorKind::DR);
          r.bayes.mean = e["bayes"]["mean"].get<double>();
          r.bayes.sd = e["bayes"]["sd"].get<double>();
          r.bayes.credible_interval_95 = {
              e["bayes"]["credible_interval_95"][0].get<double>(),
              e["bayes"]["credible_interval_95"][1].get<double>()};
          if (e.contains("frequentist"))
            r.frequentist = abdr::FrequentistResult{
                e["frequentist"]["point"].get<double>(),
                e["frequentist"]["se"].get<double>(),
                e["frequentist"]["reps"].get<int>()};
          std::string label = kind;
          if (++label_counts[kind] > 1)
            label += " (" + fs::path(path).filename().string() + ")";
          if (e["bayes"].contains("samples")) {
            sample_sets.push_back(
                e["bayes"]["samples"].get<std::vector<double>>());
            sample_labels.push_back(label);
            r.bayes.samples = sample_sets.back();
          }
          merged.push_back(std::move(r));
          labels.push_back(std::move(label));
        }
      }
      std::string table =
          abdr::estimate_table(merged, labels, first_config, std::nullopt);
      abdr::write_text_file(common.out_dir + "/report.txt", table);
      std::cout << table;
      if (!sample_sets.empty()) {
        json meta = {{"inputs", report_inputs}, {"seed", first_config.rng_seed}};
        abdr::write_text_file(
            common.out_dir + "/report.svg",
            abdr::svg_histogram(sample_sets, sample_labels,
                                "posterior predictive distributions",
                                meta.dump()));
      }
      return kExitOk;
    }
  } catch (const abdr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const json::exception& e) {
    std::cerr << "json error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
