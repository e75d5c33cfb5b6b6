#include "abdr/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "abdr/errors.hpp"

namespace abdr {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace and CR
    std::size_t a = field.find_first_not_of(" \t\r");
    std::size_t b = field.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? "" : field.substr(a, b - a + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto fields = split_line(line);
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
    } else {
      t.rows.push_back(std::move(fields));
    }
  }
  if (!have_header) throw ParseError("empty input file: " + path);
  return t;
}

std::size_t column_index(const Table& t, const std::string& name,
                         const std::string& path) {
  for (std::size_t j = 0; j < t.header.size(); ++j)
    if (t.header[j] == name) return j;
  throw SchemaError("missing column '" + name + "' in " + path);
}

double parse_cell(const std::string& cell, std::size_t row,
                  const std::string& col) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(cell, &pos);
  } catch (const std::exception&) {
    throw ParseError("row " + std::to_string(row) + ", column '" + col +
                     "': cannot parse '" + cell + "'");
  }
  if (pos != cell.size())
    throw ParseError("row " + std::to_string(row) + ", column '" + col +
                     "': cannot parse '" + cell + "'");
  if (!std::isfinite(v))
    throw ParseError("row " + std::to_string(row) + ", column '" + col +
                     "': non-finite value '" + cell + "'");
  return v;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& outcome_col,
                 const std::string& treatment_col,
                 const std::vector<std::string>& covariate_cols) {
  Table t = read_table(path);
  if (t.rows.empty()) throw ParseError("no data rows in " + path);

  std::size_t yi = column_index(t, outcome_col, path);
  std::size_t di = column_index(t, treatment_col, path);
  std::vector<std::size_t> xi;
  for (const auto& c : covariate_cols) xi.push_back(column_index(t, c, path));

  Dataset ds;
  ds.covariate_names = covariate_cols;
  ds.records.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row.size() != t.header.size())
      throw ParseError("row " + std::to_string(r) + ": expected " +
                       std::to_string(t.header.size()) + " fields, got " +
                       std::to_string(row.size()));
    ObservationRecord rec;
    rec.y = parse_cell(row[yi], r, outcome_col);
    double dv = parse_cell(row[di], r, treatment_col);
    if (dv != 0.0 && dv != 1.0)
      throw ParseError("row " + std::to_string(r) + ", column '" +
                       treatment_col + "': treatment must be 0 or 1, got '" +
                       row[di] + "'");
    rec.d = static_cast<int>(dv);
    rec.x.reserve(xi.size());
    for (std::size_t k = 0; k < xi.size(); ++k)
      rec.x.push_back(parse_cell(row[xi[k]], r, covariate_cols[k]));
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

namespace {
std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

void save_csv(const std::string& path, const Dataset& dataset,
              const std::string& outcome_col,
              const std::string& treatment_col) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << outcome_col << ',' << treatment_col;
  for (const auto& c : dataset.covariate_names) out << ',' << c;
  out << '\n';
  for (const auto& r : dataset.records) {
    out << format_double(r.y) << ',' << r.d;
    for (double v : r.x) out << ',' << format_double(v);
    out << '\n';
  }
}

void difference_columns(const std::string& path, const std::string& pre_col,
                        const std::string& post_col, const std::string& out_col,
                        const std::string& out_path) {
  Table t = read_table(path);
  std::size_t pre = column_index(t, pre_col, path);
  std::size_t post = column_index(t, post_col, path);
  std::ofstream out(out_path);
  if (!out) throw Error("cannot write file: " + out_path);
  for (std::size_t j = 0; j < t.header.size(); ++j)
    out << t.header[j] << ',';
  out << out_col << '\n';
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row.size() != t.header.size())
      throw ParseError("row " + std::to_string(r) + ": ragged row");
    double a = parse_cell(row[pre], r, pre_col);
    double b = parse_cell(row[post], r, post_col);
    for (const auto& f : row) out << f << ',';
    out << format_double(b - a) << '\n';
  }
}

}  // namespace abdr
