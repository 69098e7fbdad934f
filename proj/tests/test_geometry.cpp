#include "doctest.h"

#include "pvd/geometry.hpp"

#include <numbers>
#include <random>

using namespace pvd;

namespace {

// Rejection sampling over the object's bounding square.
struct AreaEstimate {
  double area;
  double std_error;
};

AreaEstimate mc_lens_area(Point2D q, double d, const UncertainDisc& o, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(o.center.x - o.radius, o.center.x + o.radius);
  std::uniform_real_distribution<double> uy(o.center.y - o.radius, o.center.y + o.radius);
  long hits = 0;
  for (int s = 0; s < samples; ++s) {
    const Point2D p{ux(rng), uy(rng)};
    if (dist(p, o.center) <= o.radius && dist(p, q) <= d) ++hits;
  }
  const double box = 4.0 * o.radius * o.radius;
  const double frac = static_cast<double>(hits) / samples;
  return {frac * box, box * std::sqrt(frac * (1.0 - frac) / samples)};
}

}  // namespace

TEST_CASE("mindist and maxdist") {
  const UncertainDisc disc{1, {3, 4}, 2};
  CHECK(mindist(Point2D{0, 0}, disc) == doctest::Approx(3.0));
  CHECK(maxdist(Point2D{0, 0}, disc) == doctest::Approx(7.0));
  CHECK(mindist(Point2D{3.5, 4.5}, disc) == 0.0);
  CHECK(maxdist(disc.center, disc) == doctest::Approx(2.0));

  const UncertainInterval iv{1, 0, 5};
  CHECK(mindist(7.0, iv) == 2.0);
  CHECK(maxdist(7.0, iv) == 7.0);
  CHECK(mindist(2.0, iv) == 0.0);
}

TEST_CASE("mindist never exceeds maxdist") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50, 50), ur(0.1, 20);
  for (int t = 0; t < 1000; ++t) {
    const UncertainDisc d{0, {u(rng), u(rng)}, ur(rng)};
    const Point2D q{u(rng), u(rng)};
    CHECK(0.0 <= mindist(q, d));
    CHECK(mindist(q, d) <= maxdist(q, d));
    const double lo = u(rng);
    const UncertainInterval iv{0, lo, lo + ur(rng)};
    const double x = u(rng);
    CHECK(0.0 <= mindist(x, iv));
    CHECK(mindist(x, iv) <= maxdist(x, iv));
  }
}

TEST_CASE("lens area limits") {
  const UncertainDisc o{1, {5, 0}, 2};
  CHECK(lens_area({0, 0}, 7.0, o) == doctest::Approx(o.area()));
  CHECK(lens_area({0, 0}, 9.0, o) == doctest::Approx(o.area()));
  CHECK(lens_area({0, 0}, 3.0, o) == 0.0);
  CHECK(lens_area({0, 0}, 1.0, o) == 0.0);
  CHECK(lens_area({0, 0}, 0.0, o) == 0.0);
  // Query inside the disc: small radii give the full small circle.
  CHECK(lens_area({5, 0}, 1.0, o) == doctest::Approx(std::numbers::pi));
  // Tangency stays finite.
  CHECK(std::isfinite(lens_area({0, 0}, 3.0 + 1e-15, o)));
}

TEST_CASE("lens area matches Monte-Carlo on the symmetric lens") {
  const UncertainDisc o{1, {5, 0}, 5};
  const double exact = lens_area({0, 0}, 5.0, o);
  // Closed form for two unit-spaced equal circles: 2 r^2 acos(d/2r) - (d/2) sqrt(4r^2 - d^2).
  CHECK(exact == doctest::Approx(2 * 25 * std::acos(0.5) - 2.5 * std::sqrt(75.0)));
  const auto mc = mc_lens_area({0, 0}, 5.0, o, 4'000'000, 11);
  CHECK(std::abs(mc.area - exact) / exact < 1e-3);
}

TEST_CASE("lens area is monotone and agrees with sampling on random configurations") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-20, 20), ur(0.5, 15);
  int outside = 0;
  for (int t = 0; t < 40; ++t) {
    const UncertainDisc o{0, {u(rng), u(rng)}, ur(rng)};
    const Point2D q{u(rng), u(rng)};
    const double lo = mindist(q, o), hi = maxdist(q, o);
    double prev = 0.0;
    for (int s = 0; s <= 50; ++s) {
      const double d = lo + (hi - lo) * s / 50.0;
      const double a = lens_area(q, d, o);
      CHECK(a >= prev - 1e-9);
      prev = a;
    }
    CHECK(lens_area(q, hi, o) == doctest::Approx(o.area()));
    CHECK(lens_area(q, hi - 1e-2 * (hi - lo), o) < o.area());

    const double d = std::uniform_real_distribution<double>(lo, hi)(rng);
    const auto mc = mc_lens_area(q, d, o, 200'000, 1000 + t);
    if (std::abs(mc.area - lens_area(q, d, o)) > 3.0 * mc.std_error + 1e-12) ++outside;
  }
  // 3 sigma: at most a couple of excursions in 40 draws.
  CHECK(outside <= 2);
}

TEST_CASE("classify pairs") {
  auto a = classify_pair(UncertainInterval{1, 0, 8}, UncertainInterval{2, 12, 20});
  CHECK(a.equi_range);
  CHECK_FALSE(a.overlapping);
  auto b = classify_pair(UncertainInterval{1, 0, 12}, UncertainInterval{2, 4, 8});
  CHECK_FALSE(b.equi_range);
  CHECK(b.overlapping);
  auto c = classify_pair(UncertainDisc{1, {0, 0}, 3}, UncertainDisc{2, {100, 0}, 3});
  CHECK(c.equi_range);
  CHECK_FALSE(c.overlapping);
  // Closed intervals: touching counts as overlapping.
  CHECK(classify_pair(UncertainInterval{1, 0, 4}, UncertainInterval{2, 4, 9}).overlapping);
}

TEST_CASE("validation rejects malformed objects") {
  CHECK_THROWS_AS(validate(UncertainInterval{1, 3, 3}), std::invalid_argument);
  CHECK_THROWS_AS(validate(UncertainDisc{1, {0, 0}, 0}), std::invalid_argument);
  CHECK_NOTHROW(validate(UncertainDisc{1, {0, 0}, 1}));
}
