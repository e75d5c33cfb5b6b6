#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "abdr/propensity.hpp"
#include "abdr/types.hpp"

namespace abdr {

struct MatchedPair {
  std::size_t treated_row = 0;
  std::size_t control_row = 0;
  double distance = 0.0;
};

/// Result of greedy nearest-neighbour matching on the propensity score.
/// `trimmed_dataset` holds the matched treated units and their controls in
/// ascending original row order (controls deduplicated when matching with
/// replacement).
struct MatchResult {
  std::vector<MatchedPair> matched_indices;
  Dataset trimmed_dataset;
};

/// Greedy matching: treated units in descending score order each receive
/// `ratio` nearest controls by absolute score distance; ties break to the
/// lowest original row index. If any required match exceeds the caliper,
/// the treated unit is excluded (its pairs dropped, controls returned to
/// the pool). Deterministic in its inputs.
MatchResult nearest_neighbor_match(const PropensityFit& fit,
                                   const Dataset& dataset, int ratio,
                                   bool with_replacement,
                                   std::optional<double> caliper);

/// Write pairs as CSV: treated_row,control_row,distance.
void save_pairs_csv(const std::string& path, const MatchResult& result);

}  // namespace abdr
