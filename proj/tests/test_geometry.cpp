#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ptor/geometry.hpp"

using namespace ptor;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("domain factories validate their parameters") {
  CHECK_THROWS_AS(DomainSpec::disk(0.0), Error);
  CHECK_THROWS_AS(DomainSpec::disk(-1.0), Error);
  CHECK_THROWS_AS(DomainSpec::rectangle(1.0, 0.0), Error);
  CHECK_THROWS_AS(DomainSpec::annulus(0.5, 0.5), Error);
  CHECK_THROWS_AS(DomainSpec::annulus(-0.1, 1.0), Error);
  CHECK_THROWS_AS(DomainSpec::ball(1, 1.0), Error);
  CHECK_THROWS_AS(DomainSpec::slab(1, 1.0), Error);
  CHECK_NOTHROW(DomainSpec::ball(5, 2.0));
  CHECK_NOTHROW(DomainSpec::slab(3, 1.0));
}

TEST_CASE("polygon simplicity is enforced by segment intersection") {
  // bowtie: edges (0)-(1) and (2)-(3) cross
  CHECK_THROWS_AS(
      DomainSpec::polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), Error);
  CHECK_NOTHROW(DomainSpec::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  // L-shape is simple
  CHECK_NOTHROW(
      DomainSpec::polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}));
  CHECK_THROWS_AS(DomainSpec::polygon({{0, 0}, {1, 0}}), Error);
}

TEST_CASE("rasterize: unit-square half-widths at h = 1/4 give 7x7 cells") {
  // centers at 0, +-0.25, 0.5, +-0.75 strictly inside (-1,1): 7 per axis
  const GridMask mask = rasterize(DomainSpec::rectangle(1.0, 1.0), 0.25);
  CHECK(mask.size() == 49);
  // the extreme centers sit at +-0.75
  double max_coord = 0.0;
  for (std::size_t k = 0; k < mask.size(); ++k) {
    const Point c = mask.center(k);
    max_coord = std::max({max_coord, std::abs(c[0]), std::abs(c[1])});
  }
  CHECK(max_coord == Catch::Approx(0.75).margin(1e-12));
}

TEST_CASE("rasterize: resolution guard") {
  CHECK_THROWS_MATCHES(rasterize(DomainSpec::disk(1.0), 0.5), Error,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("ResolutionTooCoarse")));
  CHECK_THROWS_AS(rasterize(DomainSpec::disk(1.0), -0.1), Error);
  // exactly 8 cells across the inscribed diameter is accepted
  CHECK_NOTHROW(rasterize(DomainSpec::disk(1.0), 0.25));
  // slab cannot be rasterized; ball only in the plane
  CHECK_THROWS_AS(rasterize(DomainSpec::slab(2, 1.0), 0.01), Error);
  CHECK_THROWS_AS(rasterize(DomainSpec::ball(3, 1.0), 0.01), Error);
  CHECK_NOTHROW(rasterize(DomainSpec::ball(2, 1.0), 0.01));
}

TEST_CASE("rasterize: disconnected rasters are refused") {
  // dumbbell: two 2x2 squares joined by a neck of width 0.04 placed between
  // lattice lines; at h = 0.1 the neck has no interior cell centers
  const DomainSpec dumbbell = DomainSpec::polygon({{0, 0},
                                                   {2, 0},
                                                   {2, 0.93},
                                                   {3, 0.93},
                                                   {3, 0},
                                                   {5, 0},
                                                   {5, 2},
                                                   {3, 2},
                                                   {3, 0.97},
                                                   {2, 0.97},
                                                   {2, 2},
                                                   {0, 2}});
  CHECK_THROWS_MATCHES(rasterize(dumbbell, 0.1), Error,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("ResolutionTooCoarse")));
}

TEST_CASE("volume converges to the continuous area") {
  // disk radius 1 at h = 1/64: within 1% of pi
  const GridMask disk64 = rasterize(DomainSpec::disk(1.0), 1.0 / 64);
  CHECK(volume(disk64) == Catch::Approx(kPi).epsilon(0.01));
  // at h = 1/128: within the perimeter*h boundary-layer bound of 0.05
  const GridMask disk128 = rasterize(DomainSpec::disk(1.0), 1.0 / 128);
  CHECK(std::abs(volume(disk128) - kPi) < 0.05);
  // rectangle 2x2 at h = 1/64: exact area 4, boundary layer <= perimeter*h
  const GridMask rect = rasterize(DomainSpec::rectangle(1.0, 1.0), 1.0 / 64);
  CHECK(std::abs(volume(rect) - 4.0) <= 8.0 / 64);
  // annulus
  const GridMask ann = rasterize(DomainSpec::annulus(0.5, 1.0), 1.0 / 64);
  CHECK(volume(ann) == Catch::Approx(kPi * (1.0 - 0.25)).epsilon(0.02));
}

TEST_CASE("volume and inradius refuse invalid masks") {
  const GridMask empty(0.1, 0, 0, 4, 4, std::vector<std::uint8_t>(16, 0));
  CHECK_THROWS_MATCHES(volume(empty), Error,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("InvalidMask")));
  CHECK_THROWS_AS(inradius(empty), Error);
  // two disconnected cells
  std::vector<std::uint8_t> occ(16, 0);
  occ[0] = 1;
  occ[15] = 1;
  const GridMask split(0.1, 0, 0, 4, 4, occ);
  CHECK_THROWS_AS(volume(split), Error);
}

TEST_CASE("inradius of standard shapes") {
  const double h = 1.0 / 64;
  // rectangle with half-widths 2x1: inradius 1
  const GridMask rect = rasterize(DomainSpec::rectangle(2.0, 1.0), h);
  CHECK(std::abs(inradius(rect) - 1.0) <= 2.0 * h);
  // disk radius 1: inradius in [1 - 2h, 1]
  const GridMask disk = rasterize(DomainSpec::disk(1.0), h);
  CHECK(inradius(disk) <= 1.0 + 1e-12);
  CHECK(inradius(disk) >= 1.0 - 2.0 * h);
  // L-shaped union of two 2x1 arms: the largest inscribed disk sits at
  // (c, c) with c = distance to the outer walls = distance to the reflex
  // corner (1,1), i.e. c = sqrt(2)(1-c), giving inradius 2 - sqrt(2)
  const GridMask lshape = rasterize(
      DomainSpec::polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}),
      1.0 / 32);
  CHECK(std::abs(inradius(lshape) - (2.0 - std::sqrt(2.0))) <= 2.0 / 32);
}

TEST_CASE("scale_domain multiplies lengths and keeps the kind") {
  const DomainSpec d2 = scale_domain(DomainSpec::disk(1.0), 2.0);
  CHECK(d2.kind == DomainKind::disk);
  CHECK(d2.radius == 2.0);

  const DomainSpec poly = DomainSpec::polygon({{0, 0}, {1, 0}, {0, 2}});
  const DomainSpec poly3 = scale_domain(poly, 3.0);
  CHECK(poly3.vertices[2][1] == 6.0);

  const DomainSpec ball = scale_domain(DomainSpec::ball(3, 1.0), 0.5);
  CHECK(ball.n == 3);
  CHECK(ball.radius == 0.5);

  CHECK_THROWS_MATCHES(scale_domain(DomainSpec::disk(1.0), 0.0), Error,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("NonpositiveScale")));
}

TEST_CASE("equal_volume_ball") {
  // square of area 4 (half-widths 1x1): pi r^2 = 4 gives r = 2/sqrt(pi)
  const GridMask sq = rasterize(DomainSpec::rectangle(1.0, 1.0), 1.0 / 64);
  const DomainSpec ball = equal_volume_ball(sq);
  CHECK(ball.kind == DomainKind::disk);
  CHECK(ball.radius == Catch::Approx(2.0 / std::sqrt(kPi)).epsilon(0.02));
  // radius formula: r = sqrt(V / pi) exactly
  CHECK(ball.radius ==
        Catch::Approx(std::sqrt(volume(sq) / kPi)).margin(1e-14));
  // idempotence on disks up to discretization
  const GridMask disk = rasterize(DomainSpec::disk(1.0), 1.0 / 64);
  CHECK(std::abs(equal_volume_ball(disk).radius - 1.0) <= 2.0 / 64);
}

TEST_CASE("property: scaled rasterization area ratio approaches r^2") {
  const double h = 1.0 / 64;
  for (double r : {0.5, 1.5, 2.0}) {
    const double v1 = volume(rasterize(DomainSpec::disk(1.0), h));
    const double v2 = volume(rasterize(scale_domain(DomainSpec::disk(1.0), r), h));
    CHECK(v2 / v1 == Catch::Approx(r * r).epsilon(0.02));
  }
}

TEST_CASE("masks are connected and carry coherent indexing") {
  const GridMask ann = rasterize(DomainSpec::annulus(0.5, 1.0), 1.0 / 32);
  REQUIRE(ann.valid());
  for (std::size_t k = 0; k < ann.size(); ++k) {
    const auto c = ann.cells()[k];
    REQUIRE(ann.index(c[0], c[1]) == static_cast<int>(k));
    const Point x = ann.center(k);
    const double r2 = x[0] * x[0] + x[1] * x[1];
    CHECK(r2 > 0.25);
    CHECK(r2 < 1.0);
  }
}
