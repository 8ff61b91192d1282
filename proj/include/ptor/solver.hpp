#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ptor/errors.hpp"
#include "ptor/field.hpp"
#include "ptor/geometry.hpp"
#include "ptor/numerics.hpp"
#include "ptor/report.hpp"

namespace ptor {

enum class Regime { subcritical, critical, supercritical };

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::subcritical: return "subcritical";
    case Regime::critical: return "critical";
    case Regime::supercritical: return "supercritical";
  }
  return "?";
}

struct Admissibility {
  Regime regime = Regime::subcritical;
  double critical_exponent = 0.0;  // 2n/(n-2), +inf for n = 2
};

/// Existence regime for positive solutions of the Euler-Lagrange problem:
/// n = 2 is unrestricted; for n >= 3 the cutoff exponent is 2n/(n-2).
inline Admissibility admissibility(int n, double p) {
  if (n < 2) fail(errc::unsupported_dimension, "admissibility: n must be >= 2");
  if (!(p >= 1.0)) fail(errc::invalid_argument, "admissibility: p must be >= 1");
  Admissibility a;
  if (n == 2) {
    a.critical_exponent = std::numeric_limits<double>::infinity();
    a.regime = Regime::subcritical;
    return a;
  }
  a.critical_exponent = 2.0 * n / (n - 2.0);
  if (p < a.critical_exponent) {
    a.regime = Regime::subcritical;
  } else if (p == a.critical_exponent) {
    a.regime = Regime::critical;
  } else {
    a.regime = Regime::supercritical;
  }
  return a;
}

struct SolveOptions {
  double tol = 1e-8;           // relative change of Phi_p between iterates
  double residual_tol = 1e-6;  // PDE residual threshold
  int max_iter = 5000;
  std::uint64_t seed = 0;   // 0: torsion seed; else RNG-derived positive seed
  double cg_tol = 1e-11;    // inner Poisson solve tolerance
  bool damped = false;      // H^1-gradient-flow fallback (damped fixed point)
  double damping = 0.5;     // step fraction toward the fixed-point image
};

/// Converged minimizer data. `u` carries the L^p normalization
/// (integral of u^p = 1), so lambda equals its Dirichlet energy and c_p
/// equals lambda up to rounding. `calibrated_u` solves the PDE with
/// `calibrated_lambda` (for p = 1 rescaled to the classical torsion
/// calibration lambda = 2); u_max is taken from it so the (u_max, lambda)
/// pair is mutually consistent.
struct SolveResult {
  GridField u;
  GridField calibrated_u;
  double p = 1.0;
  double lambda = 0.0;
  double c_p = 0.0;
  double r_p = 0.0;
  double calibrated_lambda = 0.0;
  double u_max = 0.0;
  double pde_residual = 0.0;
  int iterations = 0;
  std::vector<double> phi_history;
};

namespace detail {

/// ||Lap u + lambda u^{p-1}|| / ||lambda u^{p-1}|| over interior cells.
inline double pde_residual_norm(const GridField& u, double lambda, double p) {
  GridField lap = laplacian_apply(u);
  KahanSum num, den;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double rhs = lambda * std::pow(std::max(u[k], 0.0), p - 1.0);
    const double r = lap[k] + rhs;
    num.add(r * r);
    den.add(rhs * rhs);
  }
  const double d = den.value();
  if (d == 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(num.value() / d);
}

inline void normalize_lp(GridField& u, double p) {
  const double norm = lp_norm_p(u, p);
  if (!(norm > 0.0)) {
    fail(errc::non_positive_iterate, "solve: iterate has no positive mass");
  }
  const double s = std::pow(norm, -1.0 / p);
  for (std::size_t k = 0; k < u.size(); ++k) u[k] *= s;
}

inline SolveResult finish_result(GridField u, double p, double residual,
                                 int iterations, std::vector<double> history) {
  SolveResult res{u, u};
  res.p = p;
  const double norm = lp_norm_p(u, p);  // == 1 up to rounding
  res.lambda = dirichlet_energy(u) / std::pow(norm, 2.0 / p);
  res.c_p = res.lambda * std::pow(norm, (p - 2.0) / p);
  res.r_p = (1.0 / res.lambda) * std::pow(norm, (2.0 - p) / p);
  res.pde_residual = residual;
  res.iterations = iterations;
  res.phi_history = std::move(history);

  if (p == 1.0) {
    // classical torsion calibration: v = (2/lambda) u solves Lap v + 2 = 0
    const double s = 2.0 / res.lambda;
    for (std::size_t k = 0; k < res.calibrated_u.size(); ++k) {
      res.calibrated_u[k] *= s;
    }
    res.calibrated_lambda = 2.0;
  } else {
    res.calibrated_lambda = res.lambda;
  }
  res.u_max = res.calibrated_u.max_value();
  return res;
}

}  // namespace detail

/// Linear p = 1 problem: solves Lap u + 2 = 0 directly and reports
/// c_1 = 4/P with P = 2 * integral(u). calibrated_u is the raw torsion
/// function (lambda = 2).
inline SolveResult solve_torsion(MaskPtr mask, const SolveOptions& opts = {}) {
  mask->require_valid("solve_torsion");
  GridField rhs = GridField::constant(mask, 2.0);
  PoissonStats stats;
  GridField u_raw = poisson_solve(rhs, opts.cg_tol, &stats);

  const double integral = lp_norm_p(u_raw, 1.0);
  const double torsional_rigidity = 2.0 * integral;  // P(D) = 2 int u

  GridField u_norm = u_raw;
  for (std::size_t k = 0; k < u_norm.size(); ++k) u_norm[k] /= integral;

  SolveResult res{u_norm, u_raw};
  res.p = 1.0;
  res.c_p = 4.0 / torsional_rigidity;
  res.lambda = res.c_p;
  res.r_p = 1.0 / res.c_p;
  res.calibrated_lambda = 2.0;
  res.u_max = u_raw.max_value();
  res.pde_residual = detail::pde_residual_norm(u_raw, 2.0, 1.0);
  res.iterations = stats.iterations;
  res.phi_history = {phi_p(u_norm, 1.0)};
  return res;
}

/// Positive minimizer of Phi_p on a grid domain by the normalized inverse
/// fixed point: u <- normalize_p(poisson_solve(u^{p-1})). For p = 2 this is
/// inverse power iteration; fixed points for general p are exactly the
/// L^p-normalized solutions of Lap u + lambda u^{p-1} = 0. The optional
/// damped variant is the H^1 Sobolev gradient flow with step `damping`.
inline SolveResult solve_eigen(MaskPtr mask, double p,
                               const SolveOptions& opts = {}) {
  mask->require_valid("solve_eigen");
  if (!(p >= 1.0)) fail(errc::invalid_argument, "solve_eigen: p must be >= 1");
  // 2-D grids are always subcritical; keep the guard for form's sake
  if (admissibility(2, p).regime != Regime::subcritical) {
    fail(errc::supercritical_refused, "solve_eigen: inadmissible exponent");
  }

  GridField u = GridField::zeros(mask);
  if (opts.seed == 0) {
    GridField rhs = GridField::constant(mask, 2.0);
    u = poisson_solve(rhs, opts.cg_tol);
  } else {
    for (std::size_t k = 0; k < u.size(); ++k) {
      u[k] = 0.5 + SplitMix64(SplitMix64::stream_key(opts.seed, k)).uniform();
    }
  }
  detail::normalize_lp(u, p);

  std::vector<double> history;
  history.reserve(64);
  double phi_prev = phi_p(u, p);
  history.push_back(phi_prev);

  GridField w = u;  // warm start carrier for the inner solves
  double residual = std::numeric_limits<double>::infinity();
  int settled = 0;  // consecutive iterates with relative Phi change <= tol
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    GridField rhs = u;
    for (std::size_t k = 0; k < rhs.size(); ++k) {
      if (u[k] <= 0.0) {
        fail(errc::non_positive_iterate,
             "solve_eigen: iterate lost positivity at cell " + std::to_string(k));
      }
      rhs[k] = std::pow(u[k], p - 1.0);
    }
    w = poisson_solve(rhs, opts.cg_tol, nullptr, &w);
    GridField next = w;
    detail::normalize_lp(next, p);
    if (opts.damped) {
      for (std::size_t k = 0; k < next.size(); ++k) {
        next[k] = (1.0 - opts.damping) * u[k] + opts.damping * next[k];
      }
      detail::normalize_lp(next, p);
    }
    u = next;

    const double phi = dirichlet_energy(u);  // integral of u^p is 1
    history.push_back(phi);
    residual = detail::pde_residual_norm(u, phi, p);
    settled = std::abs(phi - phi_prev) <= opts.tol * std::abs(phi) ? settled + 1
                                                                   : 0;
    phi_prev = phi;
    // stop once the last ten iterates sit inside the tol band and the PDE
    // residual is small enough; the recorded history then stabilizes visibly
    if (settled >= 10 && residual <= opts.residual_tol) {
      ++it;
      break;
    }
  }
  if (it >= opts.max_iter) {
    fail(errc::no_convergence,
         "solve_eigen: no convergence in " + std::to_string(opts.max_iter) +
             " iterations (p = " + std::to_string(p) + ", residual " +
             std::to_string(residual) + ")");
  }
  if (u.min_value() <= 0.0) {
    fail(errc::non_positive_iterate, "solve_eigen: converged iterate not positive");
  }
  return detail::finish_result(std::move(u), p, residual, it, std::move(history));
}

/// Korevaar convexity check: -log(u) must be midpoint-convex on all
/// axis-aligned and diagonal interior cell triples of a convex domain.
/// Triples touching the staircase ring (any cell with a non-interior
/// 8-neighbor) are skipped; the continuum statement assumes a smooth
/// convex boundary the raster only approximates.
inline CheckReport log_concavity_check(const SolveResult& res,
                                       const DomainSpec& domain) {
  if (domain.kind != DomainKind::disk && domain.kind != DomainKind::rectangle) {
    fail(errc::non_convex_domain_refused,
         std::string("log_concavity_check: domain kind ") +
             kind_name(domain.kind) + " is not an accepted convex kind");
  }
  const GridField& u = res.calibrated_u;
  const GridMask& mask = u.mask();
  const double h = mask.h();

  auto ring_free = [&](int i, int j) {
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        if (!mask.interior(i + di, j + dj)) return false;
      }
    }
    return true;
  };
  auto neg_log = [&](int i, int j) { return -std::log(u.value_at(i, j)); };

  double worst = 0.0;
  static constexpr std::array<std::array<int, 2>, 4> dirs = {
      {{1, 0}, {0, 1}, {1, 1}, {1, -1}}};
  long triples = 0;
  for (const auto& cell : mask.cells()) {
    const int i = cell[0], j = cell[1];
    if (!ring_free(i, j)) continue;
    for (const auto& d : dirs) {
      const int ia = i - d[0], ja = j - d[1];
      const int ib = i + d[0], jb = j + d[1];
      if (!ring_free(ia, ja) || !ring_free(ib, jb)) continue;
      const double violation =
          neg_log(i, j) - 0.5 * (neg_log(ia, ja) + neg_log(ib, jb));
      worst = std::max(worst, violation);
      ++triples;
    }
  }
  const double tolerance = 1e-6 + 5.0 * h * h;
  CheckReport report = make_check(
      "korevaar_log_concavity", worst, tolerance, Relation::le,
      /*tolerance=*/0.0, /*strictness=*/0.0,
      "worst midpoint-convexity violation of -log(u) over " +
          std::to_string(triples) + " interior triples");
  report.inputs = {{"p", res.p}, {"h", h}};
  return report;
}

}  // namespace ptor
