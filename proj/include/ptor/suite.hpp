#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "ptor/inequalities.hpp"
#include "ptor/solver.hpp"

namespace ptor {

/// The standard verification battery. Every claim is re-solved from
/// scratch; reports come back sorted by claim_id so aggregation is
/// deterministic no matter how the checks were scheduled.
inline std::vector<CheckReport> verify_suite(const std::string& suite,
                                             const CheckContext& ctx) {
  std::vector<CheckReport> out;
  auto want = [&](const char* name) { return suite == "all" || suite == name; };
  const DomainSpec disk = DomainSpec::disk(1.0);
  const DomainSpec square = DomainSpec::rectangle(0.5, 0.5);

  if (want("scaling")) {
    for (double p : {1.0, 2.0, 3.0}) {
      for (double r : {0.5, 2.0}) {
        out.push_back(check_scaling_law(disk, p, r, ctx));
      }
    }
    out.push_back(check_scaling_law(square, 2.0, 2.0, ctx));
  }
  if (want("monotonicity")) {
    out.push_back(
        check_domain_monotonicity(disk, DomainSpec::disk(2.0), 2.0, ctx));
    const double circum = 0.5 * std::sqrt(2.0) * 1.0000001;  // strict cover
    out.push_back(check_domain_monotonicity(square, DomainSpec::disk(circum),
                                            1.0, ctx));
    out.push_back(check_domain_monotonicity(disk, disk, 1.5, ctx));
  }
  if (want("comparison")) {
    for (const DomainSpec& d : {disk, square}) {
      out.push_back(check_holder_comparison(d, 1.0, 2.0, ctx));
      out.push_back(check_holder_comparison(d, 2.0, 3.0, ctx));
      out.push_back(check_holder_comparison(d, 1.5, 2.5, ctx));
    }
  }
  if (want("faber-krahn")) {
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      out.push_back(check_faber_krahn(square, p, ctx));
    }
    out.push_back(check_faber_krahn(disk, 2.0, ctx));
  }
  if (want("inradius")) {
    out.push_back(
        check_inradius_ball_maximizes(DomainSpec::rectangle(2.0, 1.0), 2.0, ctx));
    out.push_back(check_inradius_ball_maximizes(disk, 2.0, ctx));
    CheckContext coarse = ctx;
    coarse.h = std::max(ctx.h, 1.0 / 32);  // 16x2 rectangle; keep the grid sane
    out.push_back(check_inradius_ball_maximizes(DomainSpec::rectangle(8.0, 1.0),
                                                2.0, coarse));
  }
  if (want("pfunction")) {
    for (double p : {1.0, 2.0, 3.0}) {
      out.push_back(check_pfunction_bound(disk, p, ctx));
    }
    for (double p : {1.0, 2.0}) {
      out.push_back(check_pfunction_bound(DomainSpec::rectangle(1.0, 0.5), p, ctx));
    }
    out.push_back(check_pfunction_bound(DomainSpec::slab(2, 1.0), 1.5, ctx));
  }
  if (want("c-infinity")) {
    out.push_back(probe_c_infinity({2.0, 4.0, 8.0, 16.0}, {0.5, 0.2, 0.1, 0.05},
                                   ctx));
  }
  if (want("continuity")) {
    CheckContext coarse = ctx;
    coarse.h = std::max(ctx.h, 1.0 / 32);  // 21 solves per domain
    std::vector<double> grid;
    for (int k = 0; k <= 20; ++k) grid.push_back(1.0 + 0.1 * k);
    out.push_back(check_continuity_in_p(disk, grid, coarse));
    out.push_back(check_continuity_in_p(square, grid, coarse));
  }
  if (want("korevaar")) {
    MaskPtr mask = rasterize_shared(disk, ctx.h);
    for (double p : {1.0, 2.0}) {
      const SolveResult res = p == 1.0 ? solve_torsion(mask, ctx.opts)
                                       : solve_eigen(mask, p, ctx.opts);
      CheckReport rep = log_concavity_check(res, disk);
      rep.claim_id += "[disk,p=" + detail::fmt(p) + "]";
      out.push_back(rep);
    }
  }

  std::sort(out.begin(), out.end(),
            [](const CheckReport& a, const CheckReport& b) {
              return a.claim_id < b.claim_id;
            });
  return out;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "all",       "scaling",  "monotonicity", "comparison", "faber-krahn",
      "inradius",  "pfunction", "c-infinity",  "continuity", "korevaar"};
  return names;
}

}  // namespace ptor
