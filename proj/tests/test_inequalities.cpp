#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ptor/inequalities.hpp"
#include "ptor/suite.hpp"

using namespace ptor;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kJ01sq = 5.783185962946785;  // j01^2, frozen in test_solver

CheckContext fast_ctx() {
  CheckContext ctx;
  ctx.h = 1.0 / 32;  // unit tests favor speed; acceptance pins h = 1/64
  return ctx;
}

}  // namespace

TEST_CASE("report plumbing: margins, verdicts, recomputability") {
  const CheckReport eq = make_check("c", 1.0, 1.0 + 1e-9, Relation::eq, 1e-6);
  CHECK(eq.pass);
  CHECK(recompute_pass(eq) == eq.pass);

  const CheckReport strict = make_check("c", 2.0, 1.0, Relation::gt, 0.0, 1e-8);
  CHECK(strict.pass);
  CHECK(!strict.inconclusive);

  const CheckReport near = make_check("c", 1.0, 1.0 + 1e-12, Relation::gt, 0.0, 1e-8);
  CHECK(near.pass);
  CHECK(near.inconclusive);

  const CheckReport fail_strict =
      make_check("c", 1.0, 2.0, Relation::gt, 0.0, 1e-8);
  CHECK(!fail_strict.pass);
  CHECK(recompute_pass(fail_strict) == fail_strict.pass);

  CHECK(normalized_margin(0.0, 0.0) == 0.0);
  CHECK(normalized_margin(2.0, 1.0) == Catch::Approx(0.5));
}

TEST_CASE("check_scaling_law: disk and square exponents") {
  const CheckContext ctx = fast_ctx();
  for (double p : {1.0, 2.0, 3.0}) {
    for (double r : {0.5, 2.0}) {
      const CheckReport rep =
          check_scaling_law(DomainSpec::disk(1.0), p, r, ctx);
      INFO(rep.claim_id);
      CHECK(rep.pass);
      CHECK(rep.rhs == Catch::Approx(-4.0 / p));
      CHECK(recompute_pass(rep) == rep.pass);
    }
  }
  const CheckReport sq =
      check_scaling_law(DomainSpec::rectangle(0.5, 0.5), 2.0, 2.0, ctx);
  CHECK(sq.pass);
  CHECK_THROWS_AS(check_scaling_law(DomainSpec::disk(1.0), 2.0, 0.0, ctx), Error);
}

TEST_CASE("check_domain_monotonicity") {
  const CheckContext ctx = fast_ctx();
  // disk(1) in disk(2), p = 2: the values scale by 4
  const CheckReport rep = check_domain_monotonicity(
      DomainSpec::disk(1.0), DomainSpec::disk(2.0), 2.0, ctx);
  CHECK(rep.pass);
  CHECK(rep.lhs == Catch::Approx(4.0 * rep.rhs).epsilon(0.05));

  // square inside its circumscribed disk, p = 1
  const CheckReport rep2 = check_domain_monotonicity(
      DomainSpec::rectangle(0.5, 0.5),
      DomainSpec::disk(0.5 * std::sqrt(2.0) * 1.0000001), 1.0, ctx);
  CHECK(rep2.pass);

  // equal domains: margin ~ 0, still a pass
  const CheckReport rep3 = check_domain_monotonicity(
      DomainSpec::disk(1.0), DomainSpec::disk(1.0), 1.5, ctx);
  CHECK(rep3.pass);
  CHECK(std::abs(rep3.margin) <= 1e-10);

  // not nested
  CHECK_THROWS_MATCHES(
      check_domain_monotonicity(DomainSpec::disk(2.0), DomainSpec::disk(1.0),
                                2.0, ctx),
      Error,
      Catch::Matchers::MessageMatches(
          Catch::Matchers::ContainsSubstring("NotNested")));
}

TEST_CASE("check_holder_comparison: disk values and the Polya-Szego form") {
  CheckContext ctx;
  ctx.h = 1.0 / 64;
  const CheckReport rep =
      check_holder_comparison(DomainSpec::disk(1.0), 1.0, 2.0, ctx);
  CHECK(rep.pass);
  // V^2 C_1 = pi^2 8/pi = 8 pi; V C_2 = pi j01^2 (continuum oracles)
  CHECK(rep.lhs == Catch::Approx(8.0 * kPi).epsilon(0.05));
  CHECK(rep.rhs == Catch::Approx(kPi * kJ01sq).epsilon(0.05));
  CHECK(rep.notes.find("4A/P") != std::string::npos);

  CHECK_THROWS_AS(
      check_holder_comparison(DomainSpec::disk(1.0), 2.0, 2.0, ctx), Error);
  CHECK_THROWS_AS(
      check_holder_comparison(DomainSpec::disk(1.0), 3.0, 2.0, ctx), Error);
}

TEST_CASE("check_faber_krahn: square beats its equal-area disk") {
  CheckContext ctx;
  ctx.h = 1.0 / 64;
  const CheckReport rep =
      check_faber_krahn(DomainSpec::rectangle(0.5, 0.5), 2.0, ctx);
  CHECK(rep.pass);
  // 2 pi^2 vs pi j01^2 (disk of area 1): continuum margin ~ 8.6%
  CHECK(rep.lhs == Catch::Approx(2.0 * kPi * kPi).epsilon(0.02));
  CHECK(rep.rhs == Catch::Approx(kPi * kJ01sq).epsilon(0.02));
  CHECK(rep.margin > 0.03);

  const CheckReport eq = check_faber_krahn(DomainSpec::disk(1.0), 2.0, ctx);
  CHECK(eq.pass);
  CHECK(std::abs(eq.margin) <= ctx.grid_tolerance);
  CHECK(eq.notes.find("equality") != std::string::npos);
}

TEST_CASE("check_inradius_ball_maximizes") {
  const CheckContext ctx = fast_ctx();
  const CheckReport rep = check_inradius_ball_maximizes(
      DomainSpec::rectangle(2.0, 1.0), 2.0, ctx);
  CHECK(rep.pass);
  // C_2(4x2 rectangle) = pi^2 (1/16 + 1/4); bounded by j01^2
  CHECK(rep.lhs == Catch::Approx(kPi * kPi * 5.0 / 16.0).epsilon(0.02));
  CHECK(rep.rhs == Catch::Approx(kJ01sq).epsilon(0.05));

  const CheckReport eq = check_inradius_ball_maximizes(DomainSpec::disk(1.0), 2.0, ctx);
  CHECK(eq.pass);

  CheckContext coarse = ctx;
  coarse.h = 1.0 / 32;
  const CheckReport thin = check_inradius_ball_maximizes(
      DomainSpec::rectangle(8.0, 1.0), 2.0, coarse);
  CHECK(thin.pass);
  // long strip: close to the slab value pi^2/4 but below the disk bound
  CHECK(thin.lhs == Catch::Approx(kPi * kPi / 4.0).epsilon(0.05));
}

TEST_CASE("check_pfunction_bound on grid domains and the slab") {
  CheckContext ctx;
  ctx.h = 1.0 / 64;
  const CheckReport d1 = check_pfunction_bound(DomainSpec::disk(1.0), 1.0, ctx);
  CHECK(d1.pass);
  CHECK(d1.lhs == Catch::Approx(0.5).epsilon(0.03));  // u_M <= R^2 = 1
  CHECK(d1.rhs == Catch::Approx(1.0).epsilon(0.05));

  const CheckReport d2 = check_pfunction_bound(DomainSpec::disk(1.0), 2.0, ctx);
  CHECK(d2.pass);
  CHECK(d2.notes.find("pi^2/(4R^2)") != std::string::npos);

  const CheckReport slab =
      check_pfunction_bound(DomainSpec::slab(2, 1.0), 1.5, ctx);
  CHECK(slab.pass);
  CHECK(std::abs(slab.margin) <= 1e-6);  // equality case

  CHECK_THROWS_MATCHES(
      check_pfunction_bound(
          DomainSpec::polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}),
          1.0, ctx),
      Error,
      Catch::Matchers::MessageMatches(
          Catch::Matchers::ContainsSubstring("NonConvexDomainRefused")));
}

TEST_CASE("tent_dirichlet_energy matches pi (1+d)/(1-d)") {
  for (double d : {0.5, 0.2, 0.1}) {
    const double expected = kPi * (1.0 + d) / (1.0 - d);
    CHECK(tent_dirichlet_energy(d, 1.0 / 128) ==
          Catch::Approx(expected).epsilon(0.02));
  }
  CHECK_THROWS_AS(tent_dirichlet_energy(0.0, 1.0 / 64), Error);
  CHECK_THROWS_AS(tent_dirichlet_energy(1.0, 1.0 / 64), Error);
}

TEST_CASE("probe_c_infinity: decreasing normalized values, tent limit") {
  CheckContext ctx = fast_ctx();
  const CheckReport rep =
      probe_c_infinity({2.0, 4.0, 8.0}, {0.5, 0.2, 0.1}, ctx);
  CHECK(rep.pass);
  CHECK(rep.notes.find("tent") != std::string::npos);
  CHECK(rep.notes.find("domain independence") != std::string::npos);
  CHECK_THROWS_AS(probe_c_infinity({2.0}, {0.5}, ctx), Error);
  CHECK_THROWS_AS(probe_c_infinity({4.0, 2.0}, {0.5}, ctx), Error);
}

TEST_CASE("check_continuity_in_p") {
  CheckContext ctx;
  ctx.h = 1.0 / 16;  // tiny grid: 21 solves stay fast
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(1.0 + 0.1 * k);
  const CheckReport rep =
      check_continuity_in_p(DomainSpec::disk(1.0), grid, ctx);
  CHECK(rep.pass);

  // single point: vacuous pass
  const CheckReport single =
      check_continuity_in_p(DomainSpec::disk(1.0), {2.0}, ctx);
  CHECK(single.pass);
  CHECK(single.notes.find("vacuous") != std::string::npos);

  CHECK_THROWS_AS(
      check_continuity_in_p(DomainSpec::disk(1.0), {1.0, 1.5}, ctx), Error);
  CHECK_THROWS_AS(
      check_continuity_in_p(DomainSpec::disk(1.0), {2.0, 1.9}, ctx), Error);
}

TEST_CASE("verify_suite aggregates deterministically and all pass") {
  CheckContext ctx = fast_ctx();
  const auto reports = verify_suite("scaling", ctx);
  REQUIRE(!reports.empty());
  for (std::size_t i = 1; i < reports.size(); ++i) {
    REQUIRE(reports[i - 1].claim_id < reports[i].claim_id);
  }
  for (const auto& r : reports) {
    INFO(r.claim_id);
    CHECK(r.pass);
    CHECK(recompute_pass(r) == r.pass);
  }
  const auto korevaar = verify_suite("korevaar", ctx);
  REQUIRE(korevaar.size() == 2);
  for (const auto& r : korevaar) CHECK(r.pass);
}
