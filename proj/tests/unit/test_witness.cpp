#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "loewner/errors.hpp"
#include "loewner/serialize.hpp"
#include "loewner/witness.hpp"

using namespace loewner;

namespace {

void check_round_trip(const CheckReport& r) {
  REQUIRE(r.violation());
  REQUIRE(r.instance.has_value());
  const std::string text = witness_to_json(*r.instance).dump();
  const Witness back = witness_from_json(Json::parse(text));
  CHECK(witness_to_json(back).dump() == text);
  const CheckReport again = replay(back);
  CHECK(std::abs(again.margin - r.margin) <= 1e-9);
  CHECK(again.verdict == r.verdict);
}

}  // namespace

TEST_SUITE("witness") {

TEST_CASE("matrix JSON round trip is exact") {
  Rng rng(3);
  const Matrix m = complex_gaussian(3, 2, rng);
  const Json j = matrix_to_json(m);
  CHECK(j.size() == 3);
  CHECK(j[0].size() == 2);
  CHECK(j[0][0].size() == 2);
  CHECK(matrix_from_json(Json::parse(j.dump())) == m);

  const Matrix plain = matrix_from_json(Json::parse("[[1, 2], [3, 4.5]]"));
  CHECK(plain(1, 1) == Complex(4.5, 0.0));
  CHECK_THROWS_AS(matrix_from_json(Json::parse("[[1, 2], [3]]")), ConfigError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse("{\"a\": 1}")), ConfigError);
}

TEST_CASE("interval JSON round trip") {
  const Interval a = Interval::open_positive();
  const Interval b = Interval::closed_nonnegative(1.0);
  CHECK(interval_from_json(interval_to_json(a)) == a);
  CHECK(interval_from_json(interval_to_json(b)) == b);
  CHECK(interval_to_json(a)["hi"].is_null());
}

TEST_CASE("monotone witness round trip") {
  check_round_trip(check_monotone_search(parse("r1^2", 1), {2, 0}, {2}, 200, 1));
  check_round_trip(check_monotone_search(parse("1", 2), {3, 2}, {2, 1}, 50, 5));
}

TEST_CASE("convex witness round trip") {
  check_round_trip(check_convex_search(parse("r1^2*r2^2/((1+r1)*(1+r2))", 2), {2, 2}, 500, 1));
  check_round_trip(check_convex_search(builtin("koranyi_f", 2), {2, 2}, 500, 3));
}

TEST_CASE("jensen witness round trips") {
  const ScalarFunction prod = parse("r1*r2", 2).with_domain(Interval::closed_nonnegative());
  check_round_trip(jensen_unitary_search(prod, {2, 0}, {2, 2}, 200, 4));
  check_round_trip(jensen_projection_search(prod, {2, 1}, {2, 2}, 200, 4));
}

TEST_CASE("tensor and growth witness round trips") {
  const ScalarFunction f = parse("r1*r2 - r1^2", 2).with_domain(Interval::closed_nonnegative());
  const std::vector<HermitianMatrix> x{HermitianMatrix::diagonal({1.0}), HermitianMatrix::diagonal({1.0})};
  const std::vector<HermitianMatrix> y{HermitianMatrix::diagonal({3.0}), HermitianMatrix::diagonal({1.0})};
  check_round_trip(check_tensor_monotone(f, x, y));
  check_round_trip(growth_bound_check(parse("-1/(r1^2*r2)", 2), {1.0, 1.0}, 1.0, 24));
}

TEST_CASE("witness fields") {
  const CheckReport r = check_monotone_search(parse("1", 2), {2, 0}, {1, 1}, 50, 7);
  REQUIRE(r.instance.has_value());
  const Json j = witness_to_json(*r.instance);
  CHECK(j["version"] == 1);
  CHECK(j["command"] == "monotone");
  CHECK(j["ordering"] == "lex-1based");
  CHECK(j["index"]["l"] == 2);
  CHECK(j["k"] == 2);
  CHECK(j["seed"] == 7);
  CHECK(j["decompositions"].size() == 2);
  CHECK(j["decompositions"][0].size() == 2);

  const Json rep = report_to_json(r);
  CHECK(rep["verdict"] == "violation");
  CHECK(rep.contains("witness"));
  CHECK(rep["trials_run"] == r.trials_run);
}

TEST_CASE("malformed witnesses are rejected") {
  const CheckReport r = check_monotone_search(parse("1", 2), {2, 0}, {1, 1}, 50, 7);
  const Json good = witness_to_json(*r.instance);

  Json bad_version = good;
  bad_version["version"] = 2;
  CHECK_THROWS_AS(witness_from_json(bad_version), ConfigError);

  Json bad_order = good;
  bad_order["ordering"] = "lex-0based";
  CHECK_THROWS_AS(witness_from_json(bad_order), ConfigError);

  Json missing = good;
  missing.erase("operands");
  CHECK_THROWS_AS(witness_from_json(missing), ConfigError);

  Json wrong_type = good;
  wrong_type["k"] = "two";
  CHECK_THROWS_AS(witness_from_json(wrong_type), ConfigError);

  Json bad_command = good;
  bad_command["command"] = "frobnicate";
  CHECK_THROWS(replay(witness_from_json(bad_command)));

  CHECK_THROWS_AS(witness_from_json(Json::parse("[]")), ConfigError);
}

TEST_CASE("tampered witnesses fail to reproduce their margin") {
  const CheckReport r = check_monotone_search(parse("1", 2), {2, 0}, {1, 1}, 50, 7);
  Witness w = *r.instance;
  w.function = "2";
  const CheckReport again = replay(w);
  CHECK(std::abs(again.margin - r.margin) > 1e-9);
}

}  // TEST_SUITE
