#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dioph/errors.hpp"
#include "dioph/harness.hpp"

using namespace dioph;
using namespace dioph::harness;

namespace {

std::filesystem::path temp_store(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("dioph_test_" + name + ".jsonl");
  std::filesystem::remove(p);
  return p;
}

}  // namespace

TEST_CASE("wilson intervals contain the estimate") {
  for (std::uint64_t n : {1, 7, 50, 1000}) {
    for (std::uint64_t s = 0; s <= n; s += std::max<std::uint64_t>(1, n / 7)) {
      const auto ci = wilson_interval(s, n);
      const double p = static_cast<double>(s) / static_cast<double>(n);
      CHECK(ci.lower <= p);
      CHECK(p <= ci.upper);
      CHECK(ci.lower >= 0);
      CHECK(ci.upper <= 1);
    }
  }
  const auto ci = wilson_interval(50, 100);
  CHECK(ci.lower == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(ci.upper == doctest::Approx(0.5962).epsilon(1e-3));
  CHECK_THROWS_AS(wilson_interval(3, 2), DomainError);
}

TEST_CASE("canonical serialization sorts keys and drops whitespace") {
  const Json j = Json::parse(R"({"b": 1, "a": [1.5, 2], "c": {"z": true, "y": null}})");
  CHECK(canonical_serialization(j) == R"({"a":[1.5,2],"b":1,"c":{"y":null,"z":true}})");
  CHECK(canonical_serialization(Json(0.1)) == "0.1");
}

TEST_CASE("hash excludes provenance") {
  ExperimentRecord r;
  r.kind = "x";
  r.params = Json{{"k", 3}};
  r.seed = 5;
  seal(r);
  auto r2 = r;
  r2.provenance["timestamp"] = "1970-01-01T00:00:00Z";
  CHECK(compute_hash(r2) == r.canonical_hash);
  r2.results["extra"] = 1;
  CHECK(compute_hash(r2) != r.canonical_hash);
}

TEST_CASE("surveys are reproducible and independent of the worker count") {
  SurveyOptions one, eight;
  one.workers = 1;
  eight.workers = 8;
  const auto a = survey_local_density(3, 6, 20, 40, 9, one);
  const auto b = survey_local_density(3, 6, 20, 40, 9, eight);
  const auto c = survey_local_density(3, 6, 20, 40, 9, one);
  CHECK(a.canonical_hash == b.canonical_hash);
  CHECK(a.canonical_hash == c.canonical_hash);
  CHECK(canonical_serialization(a.results) == canonical_serialization(b.results));
  CHECK(survey_local_density(3, 6, 20, 40, 10, one).canonical_hash != a.canonical_hash);

  const auto s1 = survey_small_solutions(3, 6, 100, {0.5, 1, 2}, 30, 4, one);
  const auto s8 = survey_small_solutions(3, 6, 100, {0.5, 1, 2}, 30, 4, eight);
  CHECK(s1.canonical_hash == s8.canonical_hash);
  const auto h1 = survey_hasse(3, 6, 10, 4, 20, 4, one);
  const auto h8 = survey_hasse(3, 6, 10, 4, 20, 4, eight);
  CHECK(h1.canonical_hash == h8.canonical_hash);
}

TEST_CASE("local survey statistics") {
  const auto r = survey_local_density(3, 10, 50, 30, 1);
  CHECK(r.results["locally_soluble"]["fraction"].get<double>() == 1.0);
  CHECK(r.params["local_mode"] == "rigorous");

  // Quartic ternary forms: a same-sign vector fails over R with probability 1/4.
  const auto q = survey_local_density(4, 3, 50, 200, 2);
  const auto& f = q.results["locally_soluble"];
  const double n = f["n"].get<double>();
  CHECK(f["fraction"].get<double>() <= 0.75 + 3 * std::sqrt(0.75 * 0.25 / n));
  CHECK(q.results["failures"]["real"].get<int>() > 0);

  SurveyOptions heuristic;
  heuristic.mode = local::Mode::heuristic;
  CHECK(survey_local_density(3, 5, 10, 5, 1, heuristic).results.contains("caveat"));
}

TEST_CASE("small solution fractions are monotone in C") {
  const auto r = survey_small_solutions(3, 6, 200, {0.25, 0.5, 1, 2, 1000}, 80, 3);
  double prev = -1;
  for (const auto& row : r.results["by_C"]) {
    CHECK(row["fraction"].get<double>() >= prev);
    CHECK(row["ci_lower"].get<double>() <= row["fraction"].get<double>());
    prev = row["fraction"].get<double>();
  }
  CHECK_THROWS_AS(survey_small_solutions(3, 3, 10, {1}, 5, 1), DomainError);
}

TEST_CASE("hasse survey: injected adversarial forms are excluded or unresolved") {
  SurveyOptions opt;
  opt.injected = {forms::adversarial_pq(3, 2, 7), forms::adversarial_pq(3, 2, 13)};
  const auto r = survey_hasse(3, 4, 5, 6, 10, 1, opt);
  for (const auto& inj : r.results["injected"]) CHECK(inj["found"] == false);
  const auto& u = r.results["unresolved"];
  for (const auto& inj : r.results["injected"]) {
    if (inj["local"] == "locally_soluble") {
      bool listed = false;
      for (const auto& e : u) listed = listed || e["form"] == inj["form"];
      CHECK(listed);
    }
  }
  double prev = -1;
  for (std::int64_t B : {1, 2, 4}) {
    const double f = survey_hasse(3, 6, 10, B, 30, 2).results["found"]["fraction"].get<double>();
    CHECK(f >= prev);
    prev = f;
  }
}

TEST_CASE("variance experiment") {
  CHECK_FALSE(variance_range_hypothesis(3, 11, 3, 2));
  CHECK(variance_range_hypothesis(3, 20, 64, 2));
  VarianceOptions opt;
  opt.series_q = 20;
  const auto a = variance_experiment(3, 4, 2, 2, opt);
  const auto b = variance_experiment(3, 4, 2, 2, opt);
  CHECK(a.canonical_hash == b.canonical_hash);
  CHECK(a.results["upsilon_crosscheck"]["equal"] == true);
  CHECK(a.results.contains("caveat"));
  CHECK(a.results["range_hypothesis"]["holds"] == false);
  CHECK_THROWS_AS(variance_experiment(3, 3, 2, 2, opt), DomainError);
}

TEST_CASE("exponent fit") {
  std::vector<std::pair<double, double>> pts;
  for (double x : {2.0, 3.0, 5.0, 8.0}) pts.emplace_back(x, 7 * std::pow(x, 2.5));
  CHECK(exponent_fit(pts).slope == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(exponent_fit({{1, 4}, {2, 4}, {3, 4}}).slope == doctest::Approx(0.0));
  CHECK_THROWS_AS(exponent_fit({{1, 4}, {2, 0}, {3, 4}}), DomainError);
  CHECK_THROWS_AS(exponent_fit({{1, 4}, {2, 4}}), DomainError);
}

TEST_CASE("run store round trip, append order and integrity") {
  const auto path = temp_store("roundtrip");
  const auto a = survey_local_density(3, 5, 10, 5, 1);
  const auto b = survey_local_density(3, 5, 10, 5, 2);
  run_store_append(a, path);
  run_store_append(b, path);
  const auto got = run_store_read(path);
  REQUIRE(got.records.size() == 2);
  CHECK(got.records[0] == a);
  CHECK(got.records[1] == b);
  CHECK(got.warnings.empty());

  {
    std::ofstream out(path, std::ios::app);
    out << R"({"kind":"trunc)";
  }
  const auto partial = run_store_read(path);
  CHECK(partial.records.size() == 2);
  CHECK(partial.warnings.size() == 1);

  const auto bad = temp_store("tampered");
  {
    auto j = a.to_json();
    j["results"]["undetermined"] = 99;
    std::ofstream out(bad);
    out << canonical_serialization(a.to_json()) << '\n' << canonical_serialization(j) << '\n';
  }
  try {
    run_store_read(bad);
    FAIL("tampered record accepted");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  const auto junk = temp_store("junk");
  {
    std::ofstream out(junk);
    out << "not json\n";
  }
  CHECK_THROWS_AS(run_store_read(junk), DomainError);
}

TEST_CASE("csv export") {
  const auto a = survey_local_density(3, 5, 10, 5, 1);
  std::ostringstream out;
  export_csv({a}, out);
  const auto text = out.str();
  CHECK(text.rfind("kind,seed,canonical_hash,", 0) == 0);
  CHECK(text.find("results.locally_soluble.fraction") != std::string::npos);
  CHECK(text.find(a.canonical_hash) != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

TEST_CASE("lattice duality driver") {
  const auto check = lattice_duality_check(6, 200, 1);
  CHECK(check.passed());
  CHECK(lattice_duality_check(4, 50, 2, 1).duality_holds == lattice_duality_check(4, 50, 2, 8).duality_holds);
}
