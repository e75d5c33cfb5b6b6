#include <doctest.h>

#include <cmath>

#include "abdr/sim.hpp"
#include "abdr/types.hpp"

using namespace abdr;

namespace {
Dataset make(std::vector<ObservationRecord> recs) {
  Dataset ds;
  ds.covariate_names = {"x"};
  ds.records = std::move(recs);
  return ds;
}
}  // namespace

TEST_CASE("validate flags an all-treated dataset") {
  Dataset ds = make({{1.0, 1, {0.0}}, {2.0, 1, {1.0}}});
  auto v = validate(ds);
  REQUIRE(v.size() == 1);
  CHECK(v[0].message == "no control units");
}

TEST_CASE("validate cites the row with a NaN outcome") {
  Dataset ds = make({{1.0, 1, {0.0}},
                     {2.0, 0, {1.0}},
                     {3.0, 1, {0.5}},
                     {std::nan(""), 0, {0.5}}});
  auto v = validate(ds);
  REQUIRE(v.size() == 1);
  REQUIRE(v[0].rows.size() == 1);
  CHECK(v[0].rows[0] == 3);
}

TEST_CASE("validate flags bad treatment codes and dimension mismatches") {
  Dataset ds = make({{1.0, 2, {0.0}}, {2.0, 0, {1.0, 3.0}}});
  auto v = validate(ds);
  CHECK(v.size() >= 2);
}

TEST_CASE("validate accepts a valid dataset") {
  Dataset ds = make({{1.0, 1, {0.0}}, {2.0, 0, {1.0}}});
  CHECK(validate(ds).empty());
}

TEST_CASE("generated datasets always validate clean") {
  DgpParams params;
  params.n = 500;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RngStream rng(seed);
    CHECK(validate(generate_dgp(params, rng)).empty());
  }
}
