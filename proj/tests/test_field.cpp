#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ptor/field.hpp"
#include "ptor/numerics.hpp"

using namespace ptor;

namespace {

constexpr double kPi = 3.14159265358979323846;

MaskPtr disk_mask(double h) {
  return rasterize_shared(DomainSpec::disk(1.0), h);
}

GridField random_field(MaskPtr mask, std::uint64_t seed) {
  SplitMix64 rng(seed);
  GridField u = GridField::zeros(mask);
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = 2.0 * rng.uniform() - 1.0;
  return u;
}

// array index of the lattice origin cell
std::array<int, 2> origin_cell(const GridMask& m) {
  return {static_cast<int>(std::lround(-m.origin()[0] / m.h())),
          static_cast<int>(std::lround(-m.origin()[1] / m.h()))};
}

}  // namespace

TEST_CASE("laplacian stencil on reference fields") {
  auto mask = rasterize_shared(DomainSpec::rectangle(1.0, 1.0), 1.0 / 16);
  const double h = mask->h();

  SECTION("constants are annihilated away from the boundary") {
    const GridField ones = GridField::constant(mask, 1.0);
    const GridField lap = laplacian_apply(ones);
    const auto oc = origin_cell(*mask);
    CHECK(lap.value_at(oc[0], oc[1]) == Catch::Approx(0.0).margin(1e-12));
  }

  SECTION("exact on quadratics: Lap(x^2) = 2 at interior cells") {
    const GridField quad =
        GridField::sample(mask, [](double x, double) { return x * x; });
    const GridField lap = laplacian_apply(quad);
    const auto oc = origin_cell(*mask);
    CHECK(lap.value_at(oc[0], oc[1]) == Catch::Approx(2.0).margin(1e-9));
    CHECK(lap.value_at(oc[0] + 3, oc[1] - 2) == Catch::Approx(2.0).margin(1e-9));
  }

  SECTION("isolated cell: -4/h^2") {
    std::vector<std::uint8_t> occ(9, 0);
    occ[4] = 1;  // single interior cell in a 3x3 array
    auto single = std::make_shared<const GridMask>(h, 0, 0, 3, 3, occ);
    GridField u = GridField::constant(single, 1.0);
    const GridField lap = laplacian_apply(u);
    CHECK(lap[0] == Catch::Approx(-4.0 / (h * h)));
  }
}

TEST_CASE("laplacian is symmetric and negative definite") {
  auto mask = disk_mask(1.0 / 32);
  const GridField u = random_field(mask, 11);
  const GridField v = random_field(mask, 22);
  const GridField lu = laplacian_apply(u);
  const GridField lv = laplacian_apply(v);
  const double a = field_dot(lu, v);
  const double b = field_dot(u, lv);
  CHECK(std::abs(a - b) <= 1e-12 * std::max(std::abs(a), 1.0));
  // <u, Lap u> <= 0, zero only for u = 0
  CHECK(field_dot(u, lu) < 0.0);
  const GridField zero = GridField::zeros(mask);
  CHECK(field_dot(zero, laplacian_apply(zero)) == 0.0);
}

TEST_CASE("poisson_solve: torsion function of the unit disk") {
  auto mask = disk_mask(1.0 / 128);
  const GridField f = GridField::constant(mask, 2.0);
  PoissonStats stats;
  const GridField u = poisson_solve(f, 1e-10, &stats);
  const auto oc = origin_cell(*mask);
  // u(0) = (1 - 0)/2 = 1/2; the staircase bias is O(h)
  CHECK(u.value_at(oc[0], oc[1]) == Catch::Approx(0.5).epsilon(0.01));
  CHECK(stats.iterations > 0);

  SECTION("round trip: -Lap(u) = f within tolerance") {
    const GridField lap = laplacian_apply(u);
    KahanSum num, den;
    for (std::size_t k = 0; k < f.size(); ++k) {
      num.add((lap[k] + f[k]) * (lap[k] + f[k]));
      den.add(f[k] * f[k]);
    }
    CHECK(std::sqrt(num.value() / den.value()) <= 2e-10);
  }
}

TEST_CASE("poisson_solve: zero source gives the zero solution exactly") {
  auto mask = disk_mask(1.0 / 32);
  const GridField zero = GridField::zeros(mask);
  const GridField u = poisson_solve(zero, 1e-12);
  for (std::size_t k = 0; k < u.size(); ++k) REQUIRE(u[k] == 0.0);
}

TEST_CASE("poisson_solve: slab limit on a long rectangle") {
  // f = 2 on [-1,1] x [-8,8]: the center line approaches the 1-D torsion
  // profile u = 1 - x^2, so u(0) ~ 1
  auto mask = rasterize_shared(DomainSpec::rectangle(1.0, 8.0), 1.0 / 32);
  const GridField u = poisson_solve(GridField::constant(mask, 2.0), 1e-10);
  const auto oc = origin_cell(*mask);
  CHECK(u.value_at(oc[0], oc[1]) == Catch::Approx(1.0).epsilon(0.01));
}

TEST_CASE("poisson_solve rejects bad tolerances and reports no convergence") {
  auto mask = disk_mask(1.0 / 16);
  const GridField f = GridField::constant(mask, 1.0);
  CHECK_THROWS_AS(poisson_solve(f, 0.0), Error);
  CHECK_THROWS_MATCHES(poisson_solve(f, 1e-300), Error,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("NoConvergence")));
}

TEST_CASE("dirichlet_energy") {
  SECTION("zero field") {
    auto mask = disk_mask(1.0 / 16);
    CHECK(dirichlet_energy(GridField::zeros(mask)) == 0.0);
  }

  SECTION("radial tent 1 - r on the unit disk tends to pi") {
    // integral of |grad u|^2 = 2 pi int_0^1 r dr = pi
    auto mask = disk_mask(1.0 / 64);
    const GridField tent = GridField::sample(
        mask, [](double x, double y) { return 1.0 - std::hypot(x, y); });
    CHECK(dirichlet_energy(tent) == Catch::Approx(kPi).epsilon(0.02));
    // refining halves the error
    auto fine = disk_mask(1.0 / 128);
    const GridField tent2 = GridField::sample(
        fine, [](double x, double y) { return 1.0 - std::hypot(x, y); });
    CHECK(std::abs(dirichlet_energy(tent2) - kPi) <
          std::abs(dirichlet_energy(tent) - kPi));
  }

  SECTION("energy equals the quadratic form of the stencil") {
    auto mask = disk_mask(1.0 / 32);
    const GridField u = random_field(mask, 5);
    const double h2 = mask->h() * mask->h();
    const double energy = dirichlet_energy(u);
    const double quad = -field_dot(u, laplacian_apply(u)) * h2;
    CHECK(energy == Catch::Approx(quad).epsilon(1e-12));
  }
}

TEST_CASE("lp_norm_p") {
  auto mask = rasterize_shared(DomainSpec::rectangle(1.0, 1.0), 1.0 / 32);
  const double v = volume(*mask);

  SECTION("constant 1 integrates to the volume for any p") {
    const GridField ones = GridField::constant(mask, 1.0);
    CHECK(lp_norm_p(ones, 3.0) == Catch::Approx(v).epsilon(1e-12));
    CHECK(lp_norm_p(ones, 1.0) == Catch::Approx(v).epsilon(1e-12));
  }

  SECTION("torsion integral on the unit disk is pi/4") {
    auto disk = disk_mask(1.0 / 128);
    const GridField u = poisson_solve(GridField::constant(disk, 2.0), 1e-10);
    CHECK(lp_norm_p(u, 1.0) == Catch::Approx(kPi / 4.0).epsilon(0.015));
  }

  SECTION("negative value with fractional power is refused") {
    GridField u = GridField::constant(mask, 1.0);
    u[3] = -0.25;
    CHECK_THROWS_MATCHES(
        lp_norm_p(u, 1.5), Error,
        Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring(
            "NegativeValueWithFractionalPower")));
    CHECK_NOTHROW(lp_norm_p(u, 2.0));  // integer powers accept signs
    CHECK_THROWS_AS(lp_norm_p(u, 0.5), Error);
  }
}

TEST_CASE("phi_p") {
  auto mask = disk_mask(1.0 / 64);
  const GridField u = poisson_solve(GridField::constant(mask, 2.0), 1e-10);

  SECTION("torsion quotient: Phi_1 = 8/pi up to the grid bias") {
    CHECK(phi_p(u, 1.0) == Catch::Approx(8.0 / kPi).epsilon(0.025));
  }

  SECTION("scale invariance to 1e-12") {
    const double base = phi_p(u, 1.7);
    for (double k : {0.1, 3.0, 100.0}) {
      GridField ku = u;
      for (std::size_t i = 0; i < ku.size(); ++i) ku[i] *= k;
      CHECK(phi_p(ku, 1.7) == Catch::Approx(base).epsilon(1e-12));
    }
  }

  SECTION("zero field is rejected") {
    CHECK_THROWS_MATCHES(phi_p(GridField::zeros(mask), 2.0), Error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("ZeroDenominator")));
  }
}

TEST_CASE("slab-like rectangle eigen quotient approaches pi^2/4") {
  // Phi_2 of the transverse cosine mode on [-1,1] x [-R,R]
  auto mask = rasterize_shared(DomainSpec::rectangle(1.0, 8.0), 1.0 / 32);
  const GridField mode = GridField::sample(mask, [](double x, double y) {
    return std::cos(kPi * x / 2.0) * std::cos(kPi * y / 16.0);
  });
  const double lam_exact = kPi * kPi / 4.0 * (1.0 + 1.0 / 64.0);
  CHECK(phi_p(mode, 2.0) == Catch::Approx(lam_exact).epsilon(0.01));
}

TEST_CASE("property: p -> lp_norm_p(u, p)^{2/p} has no secant-bound jumps") {
  auto mask = disk_mask(1.0 / 32);
  const GridField u = poisson_solve(GridField::constant(mask, 2.0), 1e-10);
  std::vector<double> ps, vals;
  for (double p = 1.0; p <= 3.001; p += 0.1) {
    ps.push_back(p);
    vals.push_back(std::pow(lp_norm_p(u, p), 2.0 / p));
  }
  for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
    const double jump = std::abs(vals[i + 1] - vals[i]);
    double secant = 0.0;
    if (i > 0) secant = std::max(secant, std::abs(vals[i] - vals[i - 1]) / 0.1);
    if (i + 2 < vals.size()) {
      secant = std::max(secant, std::abs(vals[i + 2] - vals[i + 1]) / 0.1);
    }
    if (secant > 0.0) CHECK(jump <= 5.0 * secant * 0.1 + 1e-12);
  }
}

TEST_CASE("interpolate: bilinear reconstruction of a linear ramp") {
  auto mask = rasterize_shared(DomainSpec::rectangle(1.0, 1.0), 1.0 / 16);
  const GridField ramp =
      GridField::sample(mask, [](double x, double y) { return x + 2.0 * y; });
  CHECK(interpolate(ramp, {0.1, 0.2}) == Catch::Approx(0.5).margin(1e-12));
  CHECK(interpolate(ramp, {-0.33, 0.11}) ==
        Catch::Approx(-0.11).margin(1e-12));
}
