#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ptor/errors.hpp"
#include "ptor/field.hpp"
#include "ptor/geometry.hpp"
#include "ptor/numerics.hpp"
#include "ptor/report.hpp"
#include "ptor/solver.hpp"

namespace ptor {

/// Monte Carlo estimate of the expected Brownian exit time from one start
/// point. Convention: standard Brownian motion (generator Lap/2), so the
/// mean solves Lap w + 2 = 0 and matches the torsion function directly.
struct ExitEstimate {
  Point point{};
  double mean = 0.0;
  double std_error = 0.0;
  long paths = 0;
  std::uint64_t seed = 0;
  double eps = 0.0;
  std::string rng = kRngAlgorithm;
};

/// Walk on spheres: jump to a uniform point of the largest inscribed
/// circle, accumulate R^2/n per jump (the exit time of a radius-R ball in
/// dimension n = 2), stop inside the eps-shell. Unbiased up to O(eps).
/// Path i draws from the splitmix64 substream keyed by (seed, i), so runs
/// are reproducible and partitionable across workers.
inline ExitEstimate wos_exit_time(const DomainSpec& domain, Point x0, long paths,
                                  double eps, std::uint64_t seed) {
  if (domain.kind != DomainKind::disk && domain.kind != DomainKind::rectangle &&
      domain.kind != DomainKind::polygon) {
    fail(errc::unsupported_kind,
         std::string("wos_exit_time: no distance oracle for kind ") +
             kind_name(domain.kind));
  }
  if (paths < 1) fail(errc::invalid_path_count, "wos_exit_time: paths must be >= 1");
  if (!(eps > 0.0)) fail(errc::invalid_argument, "wos_exit_time: eps must be > 0");
  if (!(boundary_distance(domain, x0) > 0.0)) {
    fail(errc::point_outside_domain,
         "wos_exit_time: start point is not strictly interior");
  }

  const double two_pi = 6.28318530717958647692;
  KahanSum sum, sum_sq;
  for (long i = 0; i < paths; ++i) {
    SplitMix64 rng(SplitMix64::stream_key(seed, static_cast<std::uint64_t>(i)));
    Point x = x0;
    double tau = 0.0;
    double d = boundary_distance(domain, x);
    while (d > eps) {
      tau += 0.5 * d * d;  // R^2 / n, n = 2
      const double theta = two_pi * rng.uniform();
      x[0] += d * std::cos(theta);
      x[1] += d * std::sin(theta);
      d = boundary_distance(domain, x);
    }
    sum.add(tau);
    sum_sq.add(tau * tau);
  }
  const double n = static_cast<double>(paths);
  const double mean = sum.value() / n;
  const double var =
      paths > 1 ? std::max(0.0, (sum_sq.value() - n * mean * mean) / (n - 1.0))
                : 0.0;
  ExitEstimate est;
  est.point = x0;
  est.mean = mean;
  est.std_error = std::sqrt(var / n);
  est.paths = paths;
  est.seed = seed;
  est.eps = eps;
  return est;
}

/// Default shell width: 1e-4 times the inradius (discrete for polygons).
inline double wos_default_eps(const DomainSpec& domain) {
  double r = exact_inradius(domain);
  if (r <= 0.0) {
    const auto bb = bounding_box(domain);
    const double extent =
        std::min(bb[1][0] - bb[0][0], bb[1][1] - bb[0][1]);
    r = inradius(rasterize(domain, extent / 64.0));
  }
  return 1e-4 * r;
}

/// Cross-validation of the stochastic oracle against the grid torsion
/// solve: every point must satisfy |MC - PDE| <= 3 std errors plus a 2%
/// discretization allowance on the PDE value.
inline CheckReport compare_torsion(const DomainSpec& domain,
                                   const std::vector<Point>& points, long paths,
                                   std::uint64_t seed, double h = 1.0 / 64,
                                   double eps = 0.0) {
  if (paths < 1) fail(errc::invalid_path_count, "compare_torsion: paths must be >= 1");
  if (points.empty()) {
    fail(errc::invalid_argument, "compare_torsion: no evaluation points");
  }
  if (eps <= 0.0) eps = wos_default_eps(domain);
  MaskPtr mask = rasterize_shared(domain, h);
  const SolveResult torsion = solve_torsion(mask);

  double worst_excess = -std::numeric_limits<double>::infinity();
  std::string notes = "rng=" + std::string(kRngAlgorithm) + ";";
  for (const Point& pt : points) {
    const ExitEstimate est = wos_exit_time(domain, pt, paths, eps, seed);
    const double pde = interpolate(torsion.calibrated_u, pt);
    const double excess =
        std::abs(est.mean - pde) - 3.0 * est.std_error - 0.02 * std::abs(pde);
    worst_excess = std::max(worst_excess, excess);
    notes += " (" + std::to_string(pt[0]) + "," + std::to_string(pt[1]) +
             "): mc=" + std::to_string(est.mean) +
             " pde=" + std::to_string(pde) +
             " se=" + std::to_string(est.std_error) + ";";
  }
  CheckReport rep = make_check("exit_time_matches_torsion", worst_excess, 0.0,
                               Relation::le, 0.0, 0.0, notes);
  rep.inputs = {{"paths", static_cast<double>(paths)},
                {"seed", static_cast<double>(seed)},
                {"h", h},
                {"eps", eps}};
  return rep;
}

}  // namespace ptor
