#include "abdr/matching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>

#include "abdr/errors.hpp"

namespace abdr {

namespace {

using ScoredUnit = std::pair<double, std::size_t>;  // (score, original row)

/// Best control for a treated score in an ordered pool: minimal absolute
/// distance, then lowest row index.
ScoredUnit best_candidate(const std::set<ScoredUnit>& pool, double target) {
  auto right = pool.lower_bound({target, 0});
  double dist_right = std::numeric_limits<double>::infinity();
  double dist_left = std::numeric_limits<double>::infinity();
  if (right != pool.end()) dist_right = right->first - target;
  if (right != pool.begin()) dist_left = target - std::prev(right)->first;

  // Entries with an equal score are adjacent in the set; scan each
  // boundary score group and keep the lowest row index among ties.
  ScoredUnit best{0.0, std::numeric_limits<std::size_t>::max()};
  if (dist_left <= dist_right) {
    double s = std::prev(right)->first;
    for (auto it = pool.lower_bound({s, 0}); it != pool.end() && it->first == s;
         ++it)
      if (it->second < best.second) best = *it;
  }
  if (dist_right <= dist_left) {
    double s = right->first;
    for (auto it = right; it != pool.end() && it->first == s; ++it)
      if (it->second < best.second) best = *it;
  }
  return best;
}

}  // namespace

MatchResult nearest_neighbor_match(const PropensityFit& fit,
                                   const Dataset& dataset, int ratio,
                                   bool with_replacement,
                                   std::optional<double> caliper) {
  if (ratio < 1) throw DomainError("matching ratio must be >= 1");
  if (fit.scores.size() != static_cast<Eigen::Index>(dataset.n()))
    throw DomainError("propensity fit does not match dataset size");

  std::vector<ScoredUnit> treated;
  std::set<ScoredUnit> pool;
  for (std::size_t i = 0; i < dataset.n(); ++i) {
    double s = fit.scores[static_cast<Eigen::Index>(i)];
    if (dataset.records[i].d == 1)
      treated.push_back({s, i});
    else
      pool.insert({s, i});
  }

  if (!with_replacement &&
      pool.size() < treated.size() * static_cast<std::size_t>(ratio)) {
    std::size_t needed = treated.size() * static_cast<std::size_t>(ratio) - pool.size();
    throw PoolExhaustedError("control pool too small for matching without "
                             "replacement: need " + std::to_string(needed) +
                             " more control units");
  }

  // Hardest-to-match first: descending score, ties by ascending row index.
  std::sort(treated.begin(), treated.end(), [](const ScoredUnit& a, const ScoredUnit& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  MatchResult result;
  std::vector<std::size_t> kept_rows;
  for (const auto& [score, trow] : treated) {
    std::vector<ScoredUnit> picks;
    picks.reserve(static_cast<std::size_t>(ratio));
    bool ok = true;
    for (int k = 0; k < ratio; ++k) {
      ScoredUnit c = best_candidate(pool, score);
      double dist = std::abs(c.first - score);
      if (caliper && dist > *caliper) {
        ok = false;
        break;
      }
      picks.push_back(c);
      if (!with_replacement) pool.erase(c);
    }
    if (!ok) {
      // Caliper violation: exclude the treated unit, restore its controls.
      if (!with_replacement)
        for (const auto& c : picks) pool.insert(c);
      continue;
    }
    kept_rows.push_back(trow);
    for (const auto& c : picks) {
      result.matched_indices.push_back({trow, c.second, std::abs(c.first - score)});
      kept_rows.push_back(c.second);
    }
  }

  std::sort(kept_rows.begin(), kept_rows.end());
  kept_rows.erase(std::unique(kept_rows.begin(), kept_rows.end()), kept_rows.end());
  result.trimmed_dataset = dataset.subset(kept_rows);
  return result;
}

void save_pairs_csv(const std::string& path, const MatchResult& result) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << "treated_row,control_row,distance\n";
  char buf[64];
  for (const auto& p : result.matched_indices) {
    std::snprintf(buf, sizeof(buf), "%.17g", p.distance);
    out << p.treated_row << ',' << p.control_row << ',' << buf << '\n';
  }
}

}  // namespace abdr
