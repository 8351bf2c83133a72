// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "hjsort/error.hpp"
#include "hjsort/pareto.hpp"
#include "hjsort/schemes.hpp"
#include "hjsort/testcases.hpp"
#include "oracles.hpp"

using namespace hjsort;

namespace {

std::vector<double> random_coords(std::mt19937_64& rng, std::size_t count, int n) {
  std::vector<double> c(count * static_cast<std::size_t>(n));
  for (double& v : c) v = oracle::uniform(rng);
  return c;
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

GridField solve_u(int n, std::int64_t m, double c) {
  const GridSpec spec(n, m);
  return to_u_scale(SchemeKind::kS2, *solve(spec, SchemeKind::kS2, RightHandSide::constant(c)).field);
}

}  // namespace

TEST_CASE("small clouds") {
  const PointCloud cloud(2, {1, 2, 2, 1, 3, 3});
  CHECK(pareto_fronts(cloud) == std::vector<std::int64_t>{1, 1, 2});
  CHECK(pareto_fronts_generic(cloud) == std::vector<std::int64_t>{1, 1, 2});

  const PointCloud antichain(3, {0, 1, 2, 1, 2, 0, 2, 0, 1, 0.5, 0.5, 1.5});
  CHECK(pareto_fronts(antichain) == std::vector<std::int64_t>{1, 1, 1, 1});

  const PointCloud chain(2, {3, 3, 2, 2, 1, 1, 0, 0});
  CHECK(pareto_fronts(chain) == std::vector<std::int64_t>{4, 3, 2, 1});

  CHECK(pareto_fronts(PointCloud(2, {})).empty());
  CHECK(pareto_fronts(PointCloud(4, {})).empty());
}

TEST_CASE("duplicates share a front") {
  const PointCloud cloud(2, {0.5, 0.5, 0.5, 0.5, 0.7, 0.7, 0.5, 0.9, 0.7, 0.7});
  const std::vector<std::int64_t> expected{1, 1, 2, 2, 2};
  CHECK(pareto_fronts(cloud) == expected);
  CHECK(pareto_fronts_generic(cloud) == expected);
  CHECK_FALSE(dominates(cloud.point(0), cloud.point(1)));
  CHECK(dominates(cloud.point(0), cloud.point(2)));
}

TEST_CASE("200 uniform points in the square match brute-force peeling") {
  std::mt19937_64 rng(200);
  const auto coords = random_coords(rng, 200, 2);
  const PointCloud cloud(2, coords);
  const auto expected = oracle::peel(coords, 2);
  CHECK(pareto_fronts(cloud) == expected);
  CHECK(pareto_fronts_generic(cloud) == expected);
}

TEST_CASE("randomised oracle equivalence") {
  std::mt19937_64 rng(100);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 3;
    const std::size_t count = 1 + rng() % 500;
    auto coords = random_coords(rng, count, n);
    // Coarse grids on some trials to exercise ties and duplicates.
    if (trial % 4 == 0)
      for (double& v : coords) v = std::floor(v * 5) / 5;
    const PointCloud cloud(n, coords);
    const auto expected = oracle::peel(coords, n);
    const auto labels = pareto_fronts(cloud);
    CAPTURE(trial);
    CHECK(labels == expected);
    CHECK(pareto_fronts_generic(cloud) == expected);

    // A dominated point never shares a front with its dominator.
    bool strict = true;
    for (std::size_t p = 0; p < count; ++p)
      for (std::size_t q = 0; q < count; ++q)
        if (dominates(cloud.point(p), cloud.point(q)) && !(labels[p] < labels[q])) strict = false;
    CHECK(strict);
  }
}

TEST_CASE("normalisation and validation") {
  const PointCloud cloud(2, {1, 10, 3, 10, 2, 10});
  const PointCloud unit = cloud.normalized();
  CHECK(std::vector<double>(unit.coords().begin(), unit.coords().end()) ==
        std::vector<double>{0, 0, 1, 0, 0.5, 0});
  CHECK_THROWS_AS(PointCloud(2, {1, 2, 3}), Error);
  CHECK_THROWS_AS(PointCloud(2, {1, NAN}), Error);
}

TEST_CASE("interpolation") {
  const GridSpec spec(2, 4);
  GridField field(spec);
  for (std::int64_t i = 0; i < spec.node_count(); ++i) field[i] = static_cast<double>(i * i) * 0.37;
  std::int64_t linear = 0;
  for (const MultiIndex& idx : sweep_order(spec)) {
    const double x[] = {spec.coordinate(idx[0]), spec.coordinate(idx[1])};
    CHECK(interpolate(field, x) == field[linear]);
    ++linear;
  }
  // Bilinear functions are reproduced exactly.
  GridField bilinear(spec);
  linear = 0;
  for (const MultiIndex& idx : sweep_order(spec))
    bilinear[linear++] = 1 + 2 * spec.coordinate(idx[0]) - spec.coordinate(idx[1]) +
                         3 * spec.coordinate(idx[0]) * spec.coordinate(idx[1]);
  const double p[] = {0.33, 0.71};
  CHECK(interpolate(bilinear, p) == doctest::Approx(1 + 0.66 - 0.71 + 3 * 0.33 * 0.71).epsilon(1e-14));
}

TEST_CASE("pde_rank") {
  const GridField u = solve_u(2, 64, 1.0);
  const PointCloud cloud(2, {0.25, 0.25, 0.0, 0.3, 1.0, 1.0});
  const auto ranks = pde_rank(cloud, u);
  // u = 2 sqrt(x1 x2) for f = 1
  CHECK(ranks[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ranks[1] == 0.0);
  CHECK(ranks[2] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(interpolate(u, std::vector<double>{0.3, 0.3}) == doctest::Approx(0.6).epsilon(1.0 / 64));

  const PointCloud outside(2, {0.5, 0.5, 1.5, 0.2, 0.1, -0.1});
  try {
    pde_rank(outside, u);
    FAIL("expected an out-of-range error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOutOfRange);
    CHECK(std::string(e.what()).find("indices: 1 2") != std::string::npos);
  }
}

TEST_CASE("pde_rank is nondecreasing along the axes") {
  const GridSpec spec(2, 32);
  const GridField u = to_u_scale(SchemeKind::kS2, *solve(spec, SchemeKind::kS2, TestCase::f2().rhs()).field);
  std::mt19937_64 rng(8);
  bool ok = true;
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> a{oracle::uniform(rng), oracle::uniform(rng)};
    std::vector<double> b = a;
    b[rng() % 2] += (1 - *std::max_element(a.begin(), a.end())) * oracle::uniform(rng);
    ok = ok && interpolate(u, b) >= interpolate(u, a);
  }
  CHECK(ok);
}

TEST_CASE("rank_agreement") {
  const std::vector<std::int64_t> fronts{1, 2, 2, 3, 4};
  CHECK(rank_agreement(fronts, std::vector<double>{1, 2, 2, 3, 4}) == 1.0);
  CHECK(rank_agreement(fronts, std::vector<double>{4, 3, 3, 2, 1}) == 0.0);
  // Tied ranks across distinct fronts count one half: 9 pairs, one tie.
  CHECK(rank_agreement(fronts, std::vector<double>{1, 2, 2, 4, 4}) == doctest::Approx(8.5 / 9).epsilon(1e-15));
  CHECK_THROWS_AS(rank_agreement(std::vector<std::int64_t>{1}, std::vector<double>{1}), Error);
  CHECK_THROWS_AS(rank_agreement(std::vector<std::int64_t>{1, 1}, std::vector<double>{1, 2}), Error);
  CHECK_THROWS_AS(rank_agreement(fronts, std::vector<double>{1, 2}), Error);

  std::mt19937_64 rng(1000);
  const auto coords = random_coords(rng, 1000, 2);
  const auto labels = pareto_fronts(PointCloud(2, coords));
  std::vector<double> noise(1000);
  for (double& r : noise) r = oracle::uniform(rng);
  const double agreement = rank_agreement(labels, noise);
  CHECK(agreement >= 0.45);
  CHECK(agreement <= 0.55);
}

TEST_CASE("PDE ranking agrees with peeling on a large uniform cloud") {
  std::mt19937_64 rng(20240);
  const PointCloud cloud(2, random_coords(rng, 10000, 2));
  const auto labels = pareto_fronts(cloud);
  const auto ranks = pde_rank(cloud, solve_u(2, 640, 1.0));
  const double agreement = rank_agreement(labels, ranks);
  // Measured 0.98857324691960713 with this seed.
  CHECK(agreement >= 0.9885);
}

TEST_CASE("cloud CSV input") {
  const auto good = write_temp("hjsort_cloud_good.csv", "0.1,0.2\n\n0.3,0.4\n  0.5 , 0.6 \n");
  const PointCloud cloud = read_cloud_csv(good.string());
  CHECK(cloud.dim() == 2);
  CHECK(cloud.size() == 3);
  CHECK(cloud.point(2)[1] == 0.6);

  const auto ragged = write_temp("hjsort_cloud_ragged.csv", "0.1,0.2\n0.3,0.4,0.5\n");
  try {
    read_cloud_csv(ragged.string());
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  const auto bad = write_temp("hjsort_cloud_bad.csv", "0.1,0.2\n0.3,0.4\n0.5,abc\n");
  try {
    read_cloud_csv(bad.string());
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
  const auto empty = write_temp("hjsort_cloud_empty.csv", "\n\n");
  CHECK_THROWS_AS(read_cloud_csv(empty.string()), Error);
  CHECK_THROWS_AS(read_cloud_csv("/nonexistent/cloud.csv"), Error);

  const auto out = std::filesystem::temp_directory_path() / "hjsort_cloud_out.csv";
  write_cloud_csv(cloud, std::vector<std::int64_t>{1, 2, 3}, std::vector<double>{0.5, 1, 1.5}, out.string());
  std::ifstream in(out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "0.10000000000000001,0.20000000000000001,1,0.5");
  for (const auto& p : {good, ragged, bad, empty, out}) std::filesystem::remove(p);
}
