#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "abdr/csv.hpp"
#include "abdr/errors.hpp"
#include "abdr/rng.hpp"

using namespace abdr;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

TEST_CASE("load_csv reads a small file") {
  auto path = temp_path("abdr_small.csv");
  write_file(path, "y,d,x1\n1.5,1,0.2\n2.0,0,0.1\n-1.0,1,3.0\n0.0,0,-2.5\n");
  Dataset ds = load_csv(path, "y", "d", {"x1"});
  CHECK(ds.n() == 4);
  CHECK(ds.p() == 1);
  CHECK(ds.records[0].y == 1.5);
  CHECK(ds.records[0].d == 1);
  CHECK(ds.records[3].x[0] == -2.5);
}

TEST_CASE("load_csv rejects treatment values outside {0,1}") {
  auto path = temp_path("abdr_badtreat.csv");
  write_file(path, "y,d,x1\n1.0,1,0.2\n2.0,2,0.1\n");
  CHECK_THROWS_WITH_AS(load_csv(path, "y", "d", {"x1"}),
                       doctest::Contains("row 1"), ParseError);
}

TEST_CASE("load_csv names the missing column") {
  auto path = temp_path("abdr_missing.csv");
  write_file(path, "y,d\n1.0,1\n");
  CHECK_THROWS_WITH_AS(load_csv(path, "y", "d", {"x9"}),
                       doctest::Contains("x9"), SchemaError);
}

TEST_CASE("load_csv rejects unparseable and non-finite cells with row index") {
  auto path = temp_path("abdr_nan.csv");
  write_file(path, "y,d\n1.0,1\nnan,0\n");
  CHECK_THROWS_WITH_AS(load_csv(path, "y", "d", {}),
                       doctest::Contains("row 1"), ParseError);
  write_file(path, "y,d\nabc,1\n");
  CHECK_THROWS_AS(load_csv(path, "y", "d", {}), ParseError);
}

TEST_CASE("load_csv rejects empty input") {
  auto path = temp_path("abdr_empty.csv");
  write_file(path, "");
  CHECK_THROWS_AS(load_csv(path, "y", "d", {}), ParseError);
  write_file(path, "y,d\n");
  CHECK_THROWS_AS(load_csv(path, "y", "d", {}), ParseError);
}

TEST_CASE("save/load round-trips random datasets exactly") {
  RngStream rng(20240815);
  auto path = temp_path("abdr_roundtrip.csv");
  for (int rep = 0; rep < 10; ++rep) {
    Dataset ds;
    ds.covariate_names = {"x1", "x2"};
    int n = 1 + static_cast<int>(rng.uniform_index(40));
    for (int i = 0; i < n; ++i) {
      ObservationRecord r;
      r.y = rng.normal(0.0, 100.0);
      r.d = rng.uniform() < 0.5 ? 1 : 0;
      r.x = {rng.normal(0.0, 1e-3), rng.normal(0.0, 1e6)};
      ds.records.push_back(r);
    }
    save_csv(path, ds);
    Dataset back = load_csv(path, "y", "d", {"x1", "x2"});
    REQUIRE(back.n() == ds.n());
    for (std::size_t i = 0; i < ds.n(); ++i) {
      CHECK(back.records[i].y == ds.records[i].y);
      CHECK(back.records[i].d == ds.records[i].d);
      CHECK(back.records[i].x == ds.records[i].x);
    }
  }
}

TEST_CASE("difference_columns appends post-minus-pre") {
  auto in = temp_path("abdr_diff_in.csv");
  auto out = temp_path("abdr_diff_out.csv");
  write_file(in, "id,pre,post\n1,3.0,5.0\n2,10.0,4.0\n");
  difference_columns(in, "pre", "post", "y", out);
  std::ifstream f(out);
  std::string header, r1, r2;
  std::getline(f, header);
  std::getline(f, r1);
  std::getline(f, r2);
  CHECK(header == "id,pre,post,y");
  CHECK(r1 == "1,3.0,5.0,2");
  CHECK(r2 == "2,10.0,4.0,-6");
}
