// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "hjsort/convergence.hpp"
#include "hjsort/error.hpp"
#include "json.hpp"

using namespace hjsort;

TEST_CASE("linf_error") {
  const GridSpec spec(2, 8);
  const ExactSolution exact = [](std::span<const double> x) { return x[0] + 2 * x[1]; };
  GridField field(spec);
  std::int64_t linear = 0;
  for (const MultiIndex& idx : sweep_order(spec)) {
    const double x[] = {spec.coordinate(idx[0]), spec.coordinate(idx[1])};
    field[linear++] = exact(x);
  }
  CHECK(linf_error(field, exact) == 0.0);
  field[17] += 1e-3;
  CHECK(linf_error(field, exact) == doctest::Approx(1e-3).epsilon(1e-12));
  field[0] -= 2e-3;  // boundary nodes count
  CHECK(linf_error(field, exact) == doctest::Approx(2e-3).epsilon(1e-12));
}

TEST_CASE("observed_order") {
  CHECK(*observed_order(0.2, 0.1, 0.1, 0.05) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(*observed_order(7.1e-2, 3.4e-2, 4.0, 1.0) == doctest::Approx(0.53).epsilon(0.01));
  CHECK(*observed_order(2.4e-2, 6.1e-3, 4.0, 1.0) == doctest::Approx(0.99).epsilon(0.01));
  CHECK_FALSE(observed_order(0.0, 0.1, 0.1, 0.05).has_value());
  CHECK_FALSE(observed_order(0.1, 0.0, 0.1, 0.05).has_value());
  CHECK_THROWS_AS(observed_order(0.1, 0.05, 0.1, 0.1), Error);
  CHECK_THROWS_AS(observed_order(0.1, 0.05, -0.1, 0.1), Error);
}

TEST_CASE("default mesh sequences") {
  CHECK(default_meshes(2) == std::vector<std::int64_t>{40, 160, 640, 2560, 10240, 40960});
  CHECK(default_meshes(3) == std::vector<std::int64_t>{20, 40, 80, 160, 320, 640});
  CHECK(default_meshes(4, 3) == std::vector<std::int64_t>{4, 8, 16});
  CHECK(default_meshes(5, 2) == std::vector<std::int64_t>{4, 8});
  CHECK_THROWS_AS(default_meshes(2, 0), Error);
}

TEST_CASE("S1 on f2 at m = 40") {
  const ConvergenceRow row = run_single(SchemeKind::kS1, TestCase::f2(), 2, 40);
  CHECK(row.error == doctest::Approx(9.5e-2).epsilon(0.05));
  CHECK(row.h == 1.0 / 40);
  CHECK_FALSE(row.order.has_value());
}

TEST_CASE("f2 study in n = 2") {
  StudySpec spec;
  spec.test_case = TestCase::f2();
  spec.meshes = {40, 160, 640};
  spec.jobs = 2;
  const StudyResult result = run_study(spec);
  REQUIRE(result.rows.size() == 9);
  const auto s1 = result.rows_for(SchemeKind::kS1);
  const auto s2 = result.rows_for(SchemeKind::kS2);
  const auto s3 = result.rows_for(SchemeKind::kS3);
  CHECK_FALSE(s2[0].order.has_value());
  CHECK(*s1[2].order == doctest::Approx(0.5).epsilon(0.1));
  CHECK(*s2[1].order == doctest::Approx(0.99).epsilon(0.05));
  CHECK(*s3[2].order == doctest::Approx(1.01).epsilon(0.05));
  for (const auto& row : result.rows) CHECK(row.error / std::sqrt(row.h) < 1.0);

  SUBCASE("determinism across job counts") {
    StudySpec serial = spec;
    serial.jobs = 1;
    const StudyResult again = run_study(serial);
    CHECK(render_csv(again) == render_csv(result));
    CHECK(render_markdown(again) == render_markdown(result));
  }
}

TEST_CASE("f1 S3 order stays near one half") {
  StudySpec spec;
  spec.schemes = {SchemeKind::kS3};
  spec.test_case = TestCase::f1();
  spec.meshes = {40, 160};
  const StudyResult result = run_study(spec);
  CHECK(*result.rows[1].order == doctest::Approx(0.51).epsilon(0.1));
}

TEST_CASE("constant right-hand side is exact for S2") {
  StudySpec spec;
  spec.schemes = {SchemeKind::kS2};
  spec.test_case = TestCase::constant(1.0);
  spec.meshes = {10, 20, 40};
  const StudyResult result = run_study(spec);
  for (const auto& row : result.rows) CHECK(row.error <= 1e-12);

  spec.n = 3;
  spec.meshes = {4, 8};
  for (const auto& row : run_study(spec).rows) {
    // Every node residual is within [1, 1 + h]; on the u scale the overshoot
    // is bounded by n ((1 + h)^(1/n) - 1) times the largest u = n.
    CHECK(row.error <= 3 * (std::cbrt(1 + row.h) - 1) * 3);
  }
}

TEST_CASE("study validation") {
  StudySpec spec;
  spec.meshes = {40, 40};
  CHECK_THROWS_AS(run_study(spec), Error);
  spec.meshes = {};
  CHECK_THROWS_AS(run_study(spec), Error);
  spec.meshes = {10};
  spec.schemes = {};
  CHECK_THROWS_AS(run_study(spec), Error);
}

TEST_CASE("renderers") {
  StudySpec spec;
  spec.test_case = TestCase::f2();
  spec.meshes = {40, 160};
  const StudyResult result = run_study(spec);

  const std::string md = render_markdown(result);
  CHECK(md.find("| 2.5e-02 | 9.5e-02 |  | 2.4e-02 |  | 2.4e-02 |  |") != std::string::npos);
  CHECK(md.find("| 6.3e-03 | 4.5e-02 | 0.53 | 6.1e-03 | 0.99 | 5.9e-03 | 1.01 |") != std::string::npos);

  const std::string csv = render_csv(result);
  CHECK(csv.rfind("scheme,n,case,m,h,error,order\nS1,2,f2,40,0.025000000000000001,", 0) == 0);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == 7);

  const auto doc = nlohmann::json::parse(render_json(result));
  CHECK(doc["case"] == "f2");
  CHECK(doc["rows"].size() == 6);
  CHECK(doc["rows"][0]["order"].is_null());
  CHECK(doc["rows"][1]["order"].get<double>() == doctest::Approx(0.53).epsilon(0.02));
}

TEST_CASE("level sets are written per run") {
  const auto dir = std::filesystem::temp_directory_path() / "hjsort_levelsets_test";
  std::filesystem::remove_all(dir);
  StudySpec spec;
  spec.schemes = {SchemeKind::kS2, SchemeKind::kS3};
  spec.test_case = TestCase::f2();
  spec.meshes = {8};
  spec.levelset_dir = dir.string();
  run_study(spec);
  const auto path = dir / "levelset_f2_n2_s3_m8.csv";
  REQUIRE(std::filesystem::exists(path));
  CHECK(std::filesystem::exists(dir / "levelset_f2_n2_s2_m8.csv"));
  std::ifstream in(path);
  std::string line;
  std::size_t count = 0;
  while (std::getline(in, line)) ++count;
  CHECK(count == 81);
  std::filesystem::remove_all(dir);
}
