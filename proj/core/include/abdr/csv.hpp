#pragma once

#include <string>
#include <vector>

#include "abdr/types.hpp"

namespace abdr {

/// Load a dataset from a headered CSV file. Column order in the file is
/// irrelevant; columns are addressed by name. Row order is preserved.
///
/// Throws SchemaError for missing columns, ParseError for unparseable or
/// non-finite cells (message carries the 0-based data row index), and
/// ParseError for an empty file.
Dataset load_csv(const std::string& path, const std::string& outcome_col,
                 const std::string& treatment_col,
                 const std::vector<std::string>& covariate_cols);

/// Write a dataset as CSV with columns y,d,<covariates>. Values are
/// printed with 17 significant digits so reloading round-trips exactly.
void save_csv(const std::string& path, const Dataset& dataset,
              const std::string& outcome_col = "y",
              const std::string& treatment_col = "d");

/// Read `path`, append a column `out_col = post_col - pre_col`, and write
/// the result to `out_path`. All original columns are kept.
void difference_columns(const std::string& path, const std::string& pre_col,
                        const std::string& post_col, const std::string& out_col,
                        const std::string& out_path);

}  // namespace abdr
