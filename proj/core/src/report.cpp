#include "abdr/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "abdr/errors.hpp"

namespace abdr {

namespace {

std::string fmt(double v, int decimals = 3) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

nlohmann::json to_json(const PriorSpec& prior) {
  return {
      {"kind", prior.kind == PriorSpec::Kind::PointMass ? "point_mass"
                                                        : "normal_on_coefficient"},
      {"target_coefficient", prior.target_coefficient},
      {"mean", prior.mean},
      {"sd", prior.sd},
      {"faith_k", prior.faith_k},
  };
}

nlohmann::json to_json(const EstimatorConfig& config) {
  nlohmann::json j{
      {"estimator_kind", to_string(config.estimator_kind)},
      {"bootstrap_reps", config.bootstrap_reps},
      {"resample_size", config.resample_size},
      {"rng_seed", config.rng_seed},
      {"degree", config.degree},
      {"reestimate_ps", config.reestimate_ps},
      {"with_frequentist", config.with_frequentist},
      {"frequentist_reps", config.frequentist_reps},
      {"match",
       {{"ratio", config.match.ratio},
        {"with_replacement", config.match.with_replacement}}},
  };
  if (config.match.caliper) j["match"]["caliper"] = *config.match.caliper;
  if (config.prior) j["prior"] = to_json(*config.prior);
  return j;
}

nlohmann::json to_json(const ATEDistribution& dist, bool include_samples) {
  nlohmann::json j{
      {"mean", dist.mean},
      {"sd", dist.sd},
      {"credible_interval_95",
       {dist.credible_interval_95.first, dist.credible_interval_95.second}},
      {"n_samples", dist.samples.size()},
  };
  if (include_samples) j["samples"] = dist.samples;
  return j;
}

nlohmann::json to_json(const OverlapSummary& summary) {
  return {
      {"treated_min", summary.treated_min},
      {"treated_max", summary.treated_max},
      {"control_min", summary.control_min},
      {"control_max", summary.control_max},
      {"support_lo", summary.support_lo},
      {"support_hi", summary.support_hi},
      {"off_support_treated", summary.off_support_treated},
      {"off_support_control", summary.off_support_control},
      {"treated_bins", summary.treated_bins},
      {"control_bins", summary.control_bins},
  };
}

nlohmann::json to_json(const DgpParams& params) {
  return {
      {"alpha0", params.alpha0}, {"alpha1", params.alpha1},
      {"beta0", params.beta0},   {"beta1", params.beta1},
      {"beta2", params.beta2},   {"x_scale", params.x_scale},
      {"y_noise_scale", params.y_noise_scale}, {"n", params.n},
  };
}

nlohmann::json to_json(const EstimateReport& report, bool include_samples) {
  nlohmann::json j{
      {"kind", to_string(report.kind)},
      {"bayes", to_json(report.bayes, include_samples)},
  };
  if (report.frequentist)
    j["frequentist"] = {{"point", report.frequentist->point},
                        {"se", report.frequentist->se},
                        {"reps", report.frequentist->reps}};
  return j;
}

nlohmann::json estimate_artifact(const std::vector<EstimateReport>& reports,
                                 const EstimatorConfig& config,
                                 bool include_samples,
                                 std::optional<double> baseline_mean) {
  nlohmann::json j{
      {"schema_version", kSchemaVersion},
      {"artifact", "estimate"},
      {"seed", config.rng_seed},
      {"config", to_json(config)},
  };
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json e = to_json(r, include_samples);
    if (baseline_mean && *baseline_mean != 0.0)
      e["ate_percent_of_baseline"] = 100.0 * r.bayes.mean / *baseline_mean;
    entries.push_back(std::move(e));
  }
  j["estimates"] = std::move(entries);
  if (baseline_mean) j["baseline_mean"] = *baseline_mean;
  return j;
}

nlohmann::json simulation_artifact(const SimulationReport& report,
                                   const DgpParams& params,
                                   const EstimatorConfig& config) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"name", r.name},
                    {"average_estimate", r.average_estimate},
                    {"empirical_variance", r.empirical_variance},
                    {"mse", r.mse}});
  return {
      {"schema_version", kSchemaVersion},
      {"artifact", "simulation"},
      {"seed", config.rng_seed},
      {"config", to_json(config)},
      {"dgp", to_json(params)},
      {"runs", report.runs},
      {"n", report.n},
      {"true_ate", report.true_ate},
      {"rows", rows},
  };
}

std::string simulation_table(const SimulationReport& report,
                             const EstimatorConfig& config) {
  std::ostringstream out;
  out << pad("", 8) << pad("Av. Est.", 12) << pad("Emp. Var.", 12)
      << pad("MSE", 12) << '\n';
  out << std::string(44, '-') << '\n';
  for (const auto& r : report.rows)
    out << pad(r.name, 8) << pad(fmt(r.average_estimate), 12)
        << pad(fmt(r.empirical_variance), 12) << pad(fmt(r.mse), 12) << '\n';
  out << std::string(44, '-') << '\n';
  out << "runs=" << report.runs << " n=" << report.n
      << " true_ate=" << fmt(report.true_ate, 1) << '\n';
  out << "# seed=" << config.rng_seed << " config=" << to_json(config).dump()
      << '\n';
  return out.str();
}

std::string estimate_table(const std::vector<EstimateReport>& reports,
                           const std::vector<std::string>& labels,
                           const EstimatorConfig& config,
                           std::optional<double> baseline_mean) {
  std::ostringstream out;
  out << pad("", 24) << pad("post. mean", 12) << pad("s.d.", 10)
      << pad("95% cred. int.", 22) << pad("freq. est.", 12) << pad("s.e.", 10)
      << '\n';
  out << std::string(90, '-') << '\n';
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    std::string ci = "(" + fmt(r.bayes.credible_interval_95.first) + ", " +
                     fmt(r.bayes.credible_interval_95.second) + ")";
    out << pad(labels[i], 24) << pad(fmt(r.bayes.mean), 12)
        << pad(fmt(r.bayes.sd), 10) << pad(ci, 22);
    if (r.frequentist)
      out << pad(fmt(r.frequentist->point), 12) << pad(fmt(r.frequentist->se), 10);
    out << '\n';
  }
  out << std::string(90, '-') << '\n';
  if (baseline_mean && *baseline_mean != 0.0) {
    out << "percent of baseline mean (" << fmt(*baseline_mean) << "):";
    for (std::size_t i = 0; i < reports.size(); ++i)
      out << ' ' << labels[i] << '='
          << fmt(100.0 * reports[i].bayes.mean / *baseline_mean, 1) << '%';
    out << '\n';
  }
  out << "# seed=" << config.rng_seed << " config=" << to_json(config).dump()
      << '\n';
  return out.str();
}

namespace {

// Fixed palette; cycled when there are more series than colours.
constexpr const char* kColors[] = {"#3366cc", "#dc3912", "#109618",
                                   "#ff9900", "#990099", "#0099c6"};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string svg_histogram(const std::vector<std::vector<double>>& sample_sets,
                          const std::vector<std::string>& labels,
                          const std::string& title,
                          const std::string& metadata_json) {
  constexpr int kBins = 20;
  constexpr double W = 640, H = 440;
  constexpr double ml = 60, mr = 20, mt = 50, mb = 50;
  const double plot_w = W - ml - mr, plot_h = H - mt - mb;

  double lo = 0.0, hi = 1.0;
  bool any = false;
  for (const auto& s : sample_sets)
    for (double v : s) {
      if (!any) {
        lo = hi = v;
        any = true;
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!any || hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / kBins;

  // Densities per set.
  std::vector<std::array<double, kBins>> dens(sample_sets.size());
  double dmax = 0.0;
  for (std::size_t s = 0; s < sample_sets.size(); ++s) {
    dens[s].fill(0.0);
    for (double v : sample_sets[s]) {
      int b = std::min(kBins - 1, std::max(0, static_cast<int>((v - lo) / width)));
      dens[s][static_cast<std::size_t>(b)] += 1.0;
    }
    for (auto& d : dens[s]) {
      d /= static_cast<double>(sample_sets[s].size()) * width;
      dmax = std::max(dmax, d);
    }
  }
  if (dmax == 0.0) dmax = 1.0;

  auto sx = [&](double v) { return ml + (v - lo) / (hi - lo) * plot_w; };
  auto sy = [&](double d) { return mt + plot_h - d / dmax * plot_h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  out << "<desc>" << xml_escape(metadata_json) << "</desc>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">"
      << xml_escape(title) << "</text>\n";

  // Bars (first set only, translucent), density polyline for every set.
  if (!sample_sets.empty()) {
    for (int b = 0; b < kBins; ++b) {
      double d = dens[0][static_cast<std::size_t>(b)];
      double x0 = sx(lo + b * width), x1 = sx(lo + (b + 1) * width);
      out << "<rect x=\"" << fmt(x0, 2) << "\" y=\"" << fmt(sy(d), 2)
          << "\" width=\"" << fmt(x1 - x0, 2) << "\" height=\""
          << fmt(mt + plot_h - sy(d), 2)
          << "\" fill=\"#9ec5e8\" stroke=\"#5b8db8\" stroke-width=\"0.5\"/>\n";
    }
  }
  for (std::size_t s = 0; s < sample_sets.size(); ++s) {
    out << "<polyline fill=\"none\" stroke=\"" << kColors[s % 6]
        << "\" stroke-width=\"1.8\" points=\"";
    for (int b = 0; b < kBins; ++b) {
      double cx = sx(lo + (b + 0.5) * width);
      out << fmt(cx, 2) << ',' << fmt(sy(dens[s][static_cast<std::size_t>(b)]), 2)
          << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << ml + 8 << "\" y=\"" << mt + 16 + 16 * s
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
        << kColors[s % 6] << "\">" << xml_escape(labels[s]) << "</text>\n";
  }

  // Axes.
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + plot_h << "\" x2=\""
      << ml + plot_w << "\" y2=\"" << mt + plot_h
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + plot_h << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    double v = lo + (hi - lo) * t / 4.0;
    out << "<text x=\"" << fmt(sx(v), 2) << "\" y=\"" << mt + plot_h + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << fmt(v, 2) << "</text>\n";
  }
  out << "<text x=\"" << ml + plot_w / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">average treatment effect</text>\n";
  out << "<text x=\"16\" y=\"" << mt + plot_h / 2
      << "\" transform=\"rotate(-90 16 " << mt + plot_h / 2
      << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">density</text>\n";
  out << "</svg>\n";
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
}

}  // namespace abdr
