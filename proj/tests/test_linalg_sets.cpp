#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <cstdint>

#include "qsub/linalg.hpp"
#include "qsub/rng.hpp"
#include "qsub/sets.hpp"

using namespace qsub;

namespace {

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

}  // namespace

TEST_CASE("vector arithmetic", "[linalg]") {
  Vec a = {3.0, 4.0};
  Vec b = {1.0, -2.0};
  CHECK(dot(a, b) == -5.0);
  CHECK(norm_sq(a) == 25.0);
  CHECK(norm(a) == 5.0);
  CHECK(add(a, b) == Vec{4.0, 2.0});
  CHECK(sub(a, b) == Vec{2.0, 6.0});
  CHECK(scaled(b, -0.5) == Vec{-0.5, 1.0});
  CHECK(dist(a, b) == std::sqrt(4.0 + 36.0));
  CHECK(zeros(3) == Vec{0.0, 0.0, 0.0});
  CHECK(basis(3, 1) == Vec{0.0, 1.0, 0.0});
  CHECK_THROWS_AS(dot(a, Vec{1.0}), std::invalid_argument);
}

TEST_CASE("unit direction", "[linalg]") {
  Vec u = unit({0.0, -2.0});
  CHECK(u == Vec{0.0, -1.0});
  CHECK_THROWS_AS(unit(Vec{0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("powr exact special cases", "[linalg]") {
  CHECK(same_bits(powr(0.7, 1.0), 0.7));
  CHECK(powr(3.0, 2.0) == 9.0);
  CHECK(powr(9.0, 0.5) == 3.0);
  CHECK(powr(8.0, 1.0 / 3.0) == Catch::Approx(2.0).margin(1e-15));
  CHECK(powr(0.0, 0.5) == 0.0);
}

TEST_CASE("generator reproducibility", "[rng]") {
  Rng a(42), b(42);
  for (int i = 0; i < 200; ++i) {
    CHECK(same_bits(a.uniform(), b.uniform()));
  }
  Rng c(42), d(42);
  for (int i = 0; i < 50; ++i) {
    CHECK(same_bits(c.normal(), d.normal()));
  }
  // Distinct seeds diverge.
  Rng e(1), f(2);
  bool all_equal = true;
  for (int i = 0; i < 10; ++i) {
    all_equal = all_equal && e.uniform() == f.uniform();
  }
  CHECK_FALSE(all_equal);
}

TEST_CASE("generator ranges", "[rng]") {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    double x = rng.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  for (int i = 0; i < 100; ++i) {
    double x = rng.uniform(-3.0, -1.0);
    CHECK(x >= -3.0);
    CHECK(x < -1.0);
  }
  for (int i = 0; i < 100; ++i) {
    Vec u = rng.unit_vector(4);
    CHECK(norm(u) == Catch::Approx(1.0).margin(1e-12));
  }
  Vec center = {1.0, 1.0, 0.0};
  for (int i = 0; i < 200; ++i) {
    Vec x = rng.in_ball(center, 2.5);
    CHECK(dist(x, center) <= 2.5 + 1e-12);
  }
  Vec lo = {-1.0, 0.0}, hi = {1.0, 3.0};
  for (int i = 0; i < 200; ++i) {
    Vec x = rng.in_box(lo, hi);
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(x[j] >= lo[j]);
      CHECK(x[j] <= hi[j]);
    }
  }
}

TEST_CASE("projections", "[sets]") {
  FeasibleSet box = FeasibleSet::box({-1.0, -1.0}, {1.0, 2.0});
  CHECK(project(box, {0.5, 0.5}) == Vec{0.5, 0.5});
  CHECK(project(box, {3.0, -4.0}) == Vec{1.0, -1.0});

  FeasibleSet ball = FeasibleSet::ball({0.0, 0.0}, 2.0);
  CHECK(project(ball, {0.0, 1.0}) == Vec{0.0, 1.0});
  Vec pb = project(ball, {6.0, 8.0});
  CHECK(pb[0] == Catch::Approx(1.2).margin(1e-15));
  CHECK(pb[1] == Catch::Approx(1.6).margin(1e-15));

  FeasibleSet half = FeasibleSet::halfspace({0.0, 1.0}, 1.0);
  CHECK(project(half, {5.0, 0.0}) == Vec{5.0, 0.0});
  CHECK(project(half, {5.0, 3.0}) == Vec{5.0, 1.0});

  FeasibleSet all = FeasibleSet::whole_space(2);
  CHECK(project(all, {9.0, -9.0}) == Vec{9.0, -9.0});

  CHECK_THROWS_AS(project(box, Vec{1.0}), std::invalid_argument);
}

TEST_CASE("projections are idempotent and nonexpansive", "[sets]") {
  Rng rng(11);
  FeasibleSet sets[] = {
      FeasibleSet::box({-1.0, -2.0, 0.0}, {2.0, 2.0, 5.0}),
      FeasibleSet::ball({1.0, 0.0, -1.0}, 1.5),
      FeasibleSet::halfspace({1.0, 1.0, 1.0}, 0.5),
  };
  for (const auto& set : sets) {
    for (int i = 0; i < 100; ++i) {
      Vec x = rng.in_box({-5, -5, -5}, {5, 5, 5});
      Vec y = rng.in_box({-5, -5, -5}, {5, 5, 5});
      Vec px = project(set, x), py = project(set, y);
      CHECK(dist(px, project(set, px)) <= 1e-12);
      CHECK(dist(px, py) <= dist(x, y) + 1e-12);
      CHECK(contains(set, px));
    }
  }
}

TEST_CASE("distance and membership", "[sets]") {
  FeasibleSet box = FeasibleSet::box({0.0}, {1.0});
  CHECK(distance(box, {2.0}) == 1.0);
  CHECK(distance(box, {0.25}) == 0.0);
  CHECK(contains(box, {1.0}));
  CHECK_FALSE(contains(box, {1.1}));

  CHECK(is_interior(box, {0.5}));
  CHECK_FALSE(is_interior(box, {1.0}));
  CHECK_THROWS_AS(is_interior(box, {2.0}), std::invalid_argument);

  FeasibleSet pt = FeasibleSet::point({3.0, -1.0});
  CHECK(project(pt, {0.0, 0.0}) == Vec{3.0, -1.0});
  CHECK(distance(pt, {3.0, 0.0}) == 1.0);
}

TEST_CASE("boundary normals", "[sets]") {
  FeasibleSet box = FeasibleSet::box({-1.0, -1.0}, {1.0, 1.0});
  CHECK(unit_normal(box, {0.0, 0.0}) == Vec{0.0, 0.0});
  CHECK(unit_normal(box, {1.0, 0.0}) == Vec{1.0, 0.0});
  CHECK(unit_normal(box, {0.0, -1.0}) == Vec{0.0, -1.0});
  Vec corner = unit_normal(box, {1.0, 1.0});
  CHECK(corner[0] == Catch::Approx(std::sqrt(0.5)).margin(1e-15));
  CHECK(corner[1] == Catch::Approx(std::sqrt(0.5)).margin(1e-15));

  FeasibleSet ball = FeasibleSet::ball({0.0, 0.0}, 2.0);
  CHECK(unit_normal(ball, {0.0, 2.0}) == Vec{0.0, 1.0});

  FeasibleSet half = FeasibleSet::halfspace({0.0, 4.0}, 2.0);
  CHECK(unit_normal(half, {7.0, 0.5}) == Vec{0.0, 1.0});

  // Normals are unit vectors or zero.
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    Vec x = project(box, rng.in_box({-2, -2}, {2, 2}));
    double n = norm(unit_normal(box, x));
    CHECK((n == 0.0 || std::abs(n - 1.0) <= 1e-12));
  }
}

TEST_CASE("feasible sampling", "[sets]") {
  Rng rng(5);
  FeasibleSet sets[] = {
      FeasibleSet::box({-2.0, 0.0}, {2.0, 1.0}),
      FeasibleSet::ball({1.0, 1.0}, 0.5),
      FeasibleSet::halfspace({1.0, 0.0}, 0.0),
      FeasibleSet::whole_space(2),
  };
  for (const auto& set : sets) {
    for (int i = 0; i < 100; ++i) {
      Vec x = sample_point(set, rng, zeros(2), 3.0);
      CHECK(contains(set, x, 1e-9));
    }
  }
}

TEST_CASE("farthest-point norm bound", "[sets]") {
  CHECK(support_norm(FeasibleSet::box({-3.0, -1.0}, {2.0, 4.0})) == 5.0);
  CHECK(support_norm(FeasibleSet::ball({3.0, 4.0}, 2.0)) == 7.0);
  CHECK(std::isinf(support_norm(FeasibleSet::whole_space(2))));
  CHECK(std::isinf(support_norm(FeasibleSet::halfspace({1.0}, 0.0))));
}

TEST_CASE("set construction validates", "[sets]") {
  CHECK_THROWS_AS(FeasibleSet::box({0.0}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleSet::box({2.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleSet::ball({0.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleSet::halfspace({0.0, 0.0}, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(FeasibleSet::whole_space(0), std::invalid_argument);
}
