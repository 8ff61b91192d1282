#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "ptor/errors.hpp"
#include "ptor/numerics.hpp"
#include "ptor/solver.hpp"

namespace ptor {

/// Samples of a radial (ball) or 1-D (slab cross-section) solution of
/// u'' + (n-1)/r u' + lambda u^{p-1} = 0. n = 1 encodes the slab
/// coordinate; samples are uniform on [0, 1] (ball) or [-1, 1] (slab).
struct RadialProfile {
  int n = 1;
  double p = 1.0;
  double lambda = 0.0;
  std::vector<std::array<double, 3>> samples;  // (r, u, u')
  double first_zero = 0.0;  // zero location in the shooting variable
  double u_max = 0.0;
};

namespace radial_detail {

inline double odd_pow(double u, double q) {
  // odd extension; pow(0, 0) == 1 keeps the p = 1 source alive at u = 0
  return u >= 0.0 ? std::pow(u, q) : -std::pow(-u, q);
}

struct SlabOde {
  double lambda, pm1;
  std::array<double, 2> operator()(double, const std::array<double, 2>& y) const {
    return {y[1], -lambda * odd_pow(y[0], pm1)};
  }
};

struct BallOde {
  double lambda, pm1;
  int n;
  std::array<double, 2> operator()(double r, const std::array<double, 2>& y) const {
    return {y[1], -(n - 1) / r * y[1] - lambda * odd_pow(y[0], pm1)};
  }
};

constexpr double kOdeStep = 1e-4;
constexpr int kProfileSteps = 20000;  // even, so Simpson applies directly

/// Integrate the slab ODE from x = -1 with u = 0, u' = s and return the
/// distance to the first return to u = 0 (Hermite-refined), or +inf if the
/// trajectory does not come back within `window`.
inline double slab_first_zero_distance(double p, double lambda, double s,
                                       double window) {
  SlabOde ode{lambda, p - 1.0};
  double x = -1.0;
  std::array<double, 2> y{0.0, s};
  const double h = kOdeStep;
  const double x_end = -1.0 + window;
  while (x < x_end) {
    const auto y1 = rk4_step(ode, x, y, h);
    if (y1[0] < 0.0) {
      const double xz = hermite_zero(x, y[0], y[1], x + h, y1[0], y1[1]);
      return xz - (-1.0);
    }
    y = y1;
    x += h;
    if (y[0] == 0.0 && y[1] < 0.0) return x - (-1.0);
  }
  return std::numeric_limits<double>::infinity();
}

/// Ball trajectory from the regular origin start u(0) = a, u'(0) = 0; the
/// first step uses the series u = a + c2 r^2 + c4 r^4 (the (n-1)/r term is
/// singular at r = 0). Returns the first zero radius or +inf.
inline double ball_first_zero(int n, double p, double lambda, double a,
                              double r_cap) {
  const double c2 = -lambda * std::pow(a, p - 1.0) / (2.0 * n);
  const double c4 =
      -lambda * (p - 1.0) * std::pow(a, p - 2.0) * c2 / (4.0 * n + 8.0);
  const double h = kOdeStep;
  double r = h;
  std::array<double, 2> y{a + c2 * r * r + c4 * r * r * r * r,
                          2.0 * c2 * r + 4.0 * c4 * r * r * r};
  BallOde ode{lambda, p - 1.0, n};
  while (r < r_cap) {
    const auto y1 = rk4_step(ode, r, y, h);
    if (y1[0] < 0.0) {
      return hermite_zero(r, y[0], y[1], r + h, y1[0], y1[1]);
    }
    y = y1;
    r += h;
  }
  return std::numeric_limits<double>::infinity();
}

/// Geometric bracket scan for g(x) = 0 around x0 (g monotone); returns
/// {lo, hi} with a sign change.
template <class G>
std::array<double, 2> bracket_geometric(G&& g, double x0, const char* who) {
  double g0 = g(x0);
  if (g0 == 0.0) return {x0, x0};
  double lo = x0, hi = x0;
  double glo = g0, ghi = g0;
  for (int k = 0; k < 60; ++k) {
    hi *= 2.0;
    ghi = g(hi);
    if ((ghi > 0.0) != (glo > 0.0)) return {lo, hi};
    lo = hi;
    glo = ghi;
  }
  lo = hi = x0;
  glo = ghi = g0;
  for (int k = 0; k < 60; ++k) {
    lo *= 0.5;
    glo = g(lo);
    if ((ghi > 0.0) != (glo > 0.0)) return {lo, hi};
    hi = lo;
    ghi = glo;
  }
  fail(errc::no_bracket, std::string(who) + ": shooting window exhausted");
}

}  // namespace radial_detail

/// A_p = integral_0^1 dt / sqrt(1 - t^p) by the substitution t = 1 - s^2
/// (which removes the endpoint singularity), adaptive quadrature.
inline double a_p(double p) {
  if (!(p >= 1.0)) fail(errc::invalid_argument, "a_p: p must be >= 1");
  auto integrand = [p](double s) {
    if (s <= 0.0) return 2.0 / std::sqrt(p);
    // 1 - (1-s^2)^p evaluated without cancellation
    const double g = -std::expm1(p * std::log1p(-s * s));
    return 2.0 * s / std::sqrt(g);
  };
  return adaptive_simpson(integrand, 0.0, 1.0, 1e-13);
}

/// The Gamma-function form sqrt(pi) Gamma(1 + 1/p) / Gamma(1/2 + 1/p),
/// evaluated with the Lanczos approximation; the independent cross-check
/// route for a_p.
inline double a_p_gamma(double p) {
  if (!(p >= 1.0)) fail(errc::invalid_argument, "a_p_gamma: p must be >= 1");
  const double pi = 3.14159265358979323846;
  return std::sqrt(pi) * lanczos_gamma(1.0 + 1.0 / p) /
         lanczos_gamma(0.5 + 1.0 / p);
}

/// Two-point slab problem u'' + lambda u^{p-1} = 0, u(-1) = u(1) = 0, by
/// RK4 shooting from x = -1 and bisection. For p != 2 the unknown is the
/// initial slope (lambda is honored as given); p = 2 is amplitude-free, so
/// the bisection runs on lambda instead and recovers the first eigenvalue
/// (the supplied lambda only seeds the bracket search). The returned
/// profile is normalized to u(0) = u_max for p = 2 via amplitude 1.
inline RadialProfile solve_slab(double p, double lambda, double tol) {
  using namespace radial_detail;
  if (!(p >= 1.0)) fail(errc::invalid_argument, "solve_slab: p must be >= 1");
  if (!(lambda > 0.0)) fail(errc::invalid_argument, "solve_slab: lambda must be > 0");
  if (!(tol > 0.0)) fail(errc::invalid_argument, "solve_slab: tol must be > 0");

  const double window = 8.0;
  double slope = 1.0;
  double lam = lambda;

  if (p == 2.0) {
    auto g = [&](double L) {
      const double d = slab_first_zero_distance(2.0, L, 1.0, window);
      return std::isfinite(d) ? d - 2.0 : window;  // distance shrinks with L
    };
    const auto br = bracket_geometric(g, lam, "solve_slab");
    lam = bisect(g, br[0], br[1], g(br[0]), g(br[1]), 1e-13 * std::max(1.0, br[1]));
  } else {
    auto g = [&](double s) {
      const double d = slab_first_zero_distance(p, lam, s, window);
      return std::isfinite(d) ? d - 2.0 : window;
    };
    const auto br = bracket_geometric(g, slope, "solve_slab");
    slope = bisect(g, br[0], br[1], g(br[0]), g(br[1]), 0.0, 200);
  }

  // final pass on the fixed interval [-1, 1]
  const int n_steps = kProfileSteps;
  const double h = 2.0 / n_steps;
  SlabOde ode{lam, p - 1.0};
  RadialProfile prof;
  prof.n = 1;
  prof.p = p;
  prof.lambda = lam;
  prof.samples.reserve(n_steps + 1);
  std::array<double, 2> y{0.0, slope};
  double x = -1.0;
  prof.samples.push_back({x, y[0], y[1]});
  for (int k = 0; k < n_steps; ++k) {
    y = rk4_step(ode, x, y, h);
    x = -1.0 + (k + 1) * h;
    prof.samples.push_back({x, y[0], y[1]});
  }
  const double boundary_miss = std::abs(prof.samples.back()[1]);
  if (boundary_miss > std::max(tol, 1e-9) * std::max(1.0, std::abs(prof.samples[n_steps / 2][1]))) {
    fail(errc::no_convergence,
         "solve_slab: boundary residual " + std::to_string(boundary_miss));
  }
  prof.samples.back()[1] = 0.0;
  prof.first_zero = 1.0;

  if (p == 2.0) {
    // linear problem: scale the whole profile so u(0) = 1
    const double u0 = prof.samples[n_steps / 2][1];
    for (auto& s : prof.samples) {
      s[1] /= u0;
      s[2] /= u0;
    }
  }
  prof.u_max = prof.samples[n_steps / 2][1];
  return prof;
}

/// Radial shooting on the unit ball in R^n. Fixes lambda = 1, integrates
/// from the regular center start, locates the first zero r0 and rescales
/// the radius so the zero lands at r = 1, which multiplies lambda by r0^2.
/// For p = 2 the amplitude drops out and the bisection runs on lambda.
/// Critical and supercritical exponents are refused (Pohozaev guard).
inline RadialProfile shoot_ball(int n, double p, double tol) {
  using namespace radial_detail;
  if (!(tol > 0.0)) fail(errc::invalid_argument, "shoot_ball: tol must be > 0");
  const Admissibility adm = admissibility(n, p);
  if (adm.regime != Regime::subcritical) {
    fail(errc::supercritical_refused,
         "shoot_ball: regime = " + std::string(regime_name(adm.regime)) +
             " (p = " + std::to_string(p) + ", critical exponent " +
             std::to_string(adm.critical_exponent) +
             "); served by the phase-portrait machinery instead");
  }

  const double r_cap = 50.0;
  double lam = 1.0;
  double r0 = 0.0;
  if (p == 2.0) {
    auto g = [&](double L) {
      const double z = ball_first_zero(n, 2.0, L, 1.0, r_cap);
      return std::isfinite(z) ? z - 1.0 : r_cap;
    };
    const auto br = bracket_geometric(g, 1.0, "shoot_ball");
    lam = bisect(g, br[0], br[1], g(br[0]), g(br[1]), 1e-13 * std::max(1.0, br[1]));
    r0 = ball_first_zero(n, 2.0, lam, 1.0, r_cap);
  } else {
    r0 = ball_first_zero(n, p, 1.0, 1.0, r_cap);
    if (!std::isfinite(r0)) {
      fail(errc::no_zero_found,
           "shoot_ball: trajectory has no zero within r <= " +
               std::to_string(r_cap));
    }
  }

  // final pass with a uniform step that lands exactly on the zero
  const int n_steps = kProfileSteps;
  const double span = (p == 2.0) ? 1.0 : r0;
  const double h = span / n_steps;
  const double c2 = -lam / (2.0 * n);  // a = 1
  const double c4 = -lam * (p - 1.0) * c2 / (4.0 * n + 8.0);
  BallOde ode{lam, p - 1.0, n};

  RadialProfile prof;
  prof.n = n;
  prof.p = p;
  prof.first_zero = (p == 2.0) ? 1.0 : r0;
  prof.samples.reserve(n_steps + 1);
  prof.samples.push_back({0.0, 1.0, 0.0});
  double r = h;
  std::array<double, 2> y{1.0 + c2 * r * r + c4 * r * r * r * r,
                          2.0 * c2 * r + 4.0 * c4 * r * r * r};
  prof.samples.push_back({r, y[0], y[1]});
  for (int k = 1; k < n_steps; ++k) {
    y = rk4_step(ode, r, y, h);
    r = (k + 1) * h;
    prof.samples.push_back({r, y[0], y[1]});
  }
  if (std::abs(prof.samples.back()[1]) > std::max(tol, 1e-8)) {
    fail(errc::no_convergence,
         "shoot_ball: boundary residual " +
             std::to_string(std::abs(prof.samples.back()[1])));
  }

  if (p == 2.0) {
    prof.lambda = lam;
  } else {
    // map r in [0, r0] onto s = r / r0 in [0, 1]; u' picks a factor r0
    prof.lambda = r0 * r0;
    for (auto& smp : prof.samples) {
      smp[0] /= r0;
      smp[2] *= r0;
    }
  }
  prof.samples.back()[1] = 0.0;
  prof.u_max = 1.0;
  return prof;
}

/// Amplitude rescaling v = (alpha / lambda)^{1/(2-p)} u, which moves a
/// solution with multiplier lambda to one with multiplier alpha (p != 2).
inline RadialProfile rescale_to_lambda(const RadialProfile& prof, double alpha) {
  if (prof.p == 2.0) {
    fail(errc::invalid_argument, "rescale_to_lambda: p = 2 is scale-free");
  }
  if (!(alpha > 0.0)) {
    fail(errc::invalid_argument, "rescale_to_lambda: alpha must be > 0");
  }
  RadialProfile out = prof;
  const double k = std::pow(alpha / prof.lambda, 1.0 / (2.0 - prof.p));
  for (auto& s : out.samples) {
    s[1] *= k;
    s[2] *= k;
  }
  out.lambda = alpha;
  out.u_max *= k;
  return out;
}

/// C_p from a unit-ball profile: lambda * (integral_B u^p dV)^{(p-2)/p}
/// with integral_B u^p dV = n omega_n * integral_0^1 u^p r^{n-1} dr by
/// composite Simpson on the stored samples. Scale-invariant in u.
inline double radial_c_p(const RadialProfile& prof) {
  if (prof.n < 2) {
    fail(errc::invalid_argument, "radial_c_p: profile must live on a ball (n >= 2)");
  }
  const std::size_t m = prof.samples.size();
  if (m < 3 || (m - 1) % 2 != 0) {
    fail(errc::invalid_argument, "radial_c_p: need an even number of intervals");
  }
  const double h = prof.samples[1][0] - prof.samples[0][0];
  auto g = [&](std::size_t k) {
    const double r = prof.samples[k][0];
    const double u = std::max(prof.samples[k][1], 0.0);
    return std::pow(u, prof.p) * std::pow(r, prof.n - 1.0);
  };
  KahanSum s;
  s.add(g(0));
  s.add(g(m - 1));
  for (std::size_t k = 1; k + 1 < m; ++k) s.add((k % 2 ? 4.0 : 2.0) * g(k));
  const double integral_radial = s.value() * h / 3.0;
  const double integral = prof.n * unit_ball_volume(prof.n) * integral_radial;
  return prof.lambda * std::pow(integral, (prof.p - 2.0) / prof.p);
}

/// Slab energy E = (u')^2 + (2 lambda / p) u^p; evaluated with |u|^p so the
/// phase plane extends evenly across u = 0.
inline double energy_slab(double u, double u_prime, double p, double lambda) {
  return u_prime * u_prime + (2.0 * lambda / p) * std::pow(std::abs(u), p);
}

enum class BallEnergyVariant { paper, conserved };

/// Energy of the critical-exponent ball reduction in the t = -log r
/// variables. `paper` evaluates the printed formula with v^2 coefficient
/// -(n-2)^2/2; `conserved` evaluates the first integral of the printed ODE,
/// whose coefficient is -(n-2)^2/8. The two differ by a factor 4 on the v^2
/// term; the conservation test tells them apart.
inline double energy_ball_critical(double v, double v_dot, int n, double lambda,
                                   BallEnergyVariant variant) {
  if (n < 3) {
    fail(errc::invalid_argument, "energy_ball_critical: n must be >= 3");
  }
  const double nm2 = n - 2.0;
  const double q = 2.0 * n / nm2;  // critical exponent
  const double v2_coeff =
      variant == BallEnergyVariant::paper ? nm2 * nm2 / 2.0 : nm2 * nm2 / 8.0;
  return 0.5 * v_dot * v_dot - v2_coeff * v * v +
         (nm2 * lambda / (2.0 * n)) * std::pow(std::abs(v), q);
}

enum class PhaseSystem { slab_energy, ball_critical_energy };

struct PhaseParams {
  double p = 1.5;       // slab exponent
  int n = 3;            // ball dimension
  double lambda = 1.0;
  BallEnergyVariant variant = BallEnergyVariant::paper;
};

struct PhaseWindow {
  double u_min = -1.5, u_max = 1.5;
  double v_min = -1.5, v_max = 1.5;
};

/// Level curves of the phase-plane energy. Every vertex is polished onto
/// the level set to |E - level| <= 1e-9.
struct LevelSetData {
  PhaseSystem system = PhaseSystem::slab_energy;
  PhaseParams params;
  PhaseWindow window;
  std::vector<double> levels;
  // curves[level][polyline][vertex] = (u, u')
  std::vector<std::vector<std::vector<Point>>> curves;
};

inline double phase_energy(PhaseSystem system, const PhaseParams& params,
                           double u, double v) {
  if (system == PhaseSystem::slab_energy) {
    return energy_slab(u, v, params.p, params.lambda);
  }
  return energy_ball_critical(u, v, params.n, params.lambda, params.variant);
}

namespace radial_detail {

struct SegmentEnd {
  int edge_key;  // unique id of the grid edge carrying the vertex
};

}  // namespace radial_detail

inline LevelSetData phase_portrait(PhaseSystem system, const PhaseParams& params,
                                   const std::vector<double>& levels,
                                   const PhaseWindow& window, int resolution) {
  if (resolution < 2) {
    fail(errc::invalid_argument, "phase_portrait: resolution must be >= 2");
  }
  if (!(window.u_max > window.u_min) || !(window.v_max > window.v_min)) {
    fail(errc::invalid_argument, "phase_portrait: degenerate window");
  }
  for (double l : levels) {
    if (!std::isfinite(l)) {
      fail(errc::invalid_argument, "phase_portrait: non-finite level");
    }
  }
  const int nu = resolution, nv = resolution;
  const double du = (window.u_max - window.u_min) / nu;
  const double dv = (window.v_max - window.v_min) / nv;
  auto node_u = [&](int i) { return window.u_min + i * du; };
  auto node_v = [&](int j) { return window.v_min + j * dv; };

  std::vector<double> value(static_cast<std::size_t>(nu + 1) * (nv + 1));
  for (int j = 0; j <= nv; ++j) {
    for (int i = 0; i <= nu; ++i) {
      value[static_cast<std::size_t>(j) * (nu + 1) + i] =
          phase_energy(system, params, node_u(i), node_v(j));
    }
  }
  auto val = [&](int i, int j) {
    return value[static_cast<std::size_t>(j) * (nu + 1) + i];
  };
  // unique edge ids: horizontal edge (i, j)-(i+1, j) and vertical edge
  // (i, j)-(i, j+1)
  auto h_edge = [&](int i, int j) { return (j * nu + i) * 2; };
  auto v_edge = [&](int i, int j) { return (j * (nu + 1) + i) * 2 + 1; };

  LevelSetData data;
  data.system = system;
  data.params = params;
  data.window = window;
  data.levels = levels;
  data.curves.resize(levels.size());

  for (std::size_t li = 0; li < levels.size(); ++li) {
    const double level = levels[li];
    std::map<int, Point> vertex;  // edge id -> polished point
    auto edge_point = [&](int id, Point a, Point b, double fa, double fb) {
      auto it = vertex.find(id);
      if (it != vertex.end()) return;
      // bisection along the edge onto the exact level
      double lo = 0.0, hi = 1.0;
      double flo = fa - level, fhi = fb - level;
      Point best = a;
      double fbest = flo;
      for (int iter = 0; iter < 100; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const Point pm{a[0] + mid * (b[0] - a[0]), a[1] + mid * (b[1] - a[1])};
        const double fm = phase_energy(system, params, pm[0], pm[1]) - level;
        if (std::abs(fm) < std::abs(fbest)) {
          best = pm;
          fbest = fm;
        }
        if (fm == 0.0 || std::abs(fm) <= 1e-12) break;
        if ((fm > 0.0) == (flo > 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
          fhi = fm;
        }
      }
      vertex.emplace(id, best);
    };

    std::vector<std::array<int, 2>> segments;
    for (int j = 0; j < nv; ++j) {
      for (int i = 0; i < nu; ++i) {
        const double f00 = val(i, j), f10 = val(i + 1, j);
        const double f01 = val(i, j + 1), f11 = val(i + 1, j + 1);
        int code = 0;
        if (f00 > level) code |= 1;
        if (f10 > level) code |= 2;
        if (f11 > level) code |= 4;
        if (f01 > level) code |= 8;
        if (code == 0 || code == 15) continue;

        const int eb = h_edge(i, j);          // bottom
        const int er = v_edge(i + 1, j);      // right
        const int et = h_edge(i, j + 1);      // top
        const int el = v_edge(i, j);          // left
        const Point p00{node_u(i), node_v(j)}, p10{node_u(i + 1), node_v(j)};
        const Point p01{node_u(i), node_v(j + 1)},
            p11{node_u(i + 1), node_v(j + 1)};
        auto emit = [&](int e1, int e2) {
          if (e1 == eb || e2 == eb) edge_point(eb, p00, p10, f00, f10);
          if (e1 == er || e2 == er) edge_point(er, p10, p11, f10, f11);
          if (e1 == et || e2 == et) edge_point(et, p01, p11, f01, f11);
          if (e1 == el || e2 == el) edge_point(el, p00, p01, f00, f01);
          segments.push_back({e1, e2});
        };
        switch (code) {
          case 1: case 14: emit(el, eb); break;
          case 2: case 13: emit(eb, er); break;
          case 3: case 12: emit(el, er); break;
          case 4: case 11: emit(er, et); break;
          case 6: case 9: emit(eb, et); break;
          case 7: case 8: emit(el, et); break;
          case 5: case 10: {
            // saddle: decide by the center value
            const double fc =
                phase_energy(system, params, 0.5 * (p00[0] + p11[0]),
                             0.5 * (p00[1] + p11[1]));
            const bool center_high = fc > level;
            if ((code == 5) == center_high) {
              emit(el, et);
              emit(eb, er);
            } else {
              emit(el, eb);
              emit(er, et);
            }
            break;
          }
          default: break;
        }
      }
    }

    // chain segments into polylines via shared edge ids
    std::map<int, std::vector<std::size_t>> incident;
    for (std::size_t si = 0; si < segments.size(); ++si) {
      incident[segments[si][0]].push_back(si);
      incident[segments[si][1]].push_back(si);
    }
    std::vector<bool> used(segments.size(), false);
    auto walk = [&](std::size_t start, int start_edge) {
      std::vector<int> chain{start_edge};
      std::size_t seg = start;
      int at = start_edge;
      while (true) {
        used[seg] = true;
        const int next = segments[seg][0] == at ? segments[seg][1] : segments[seg][0];
        chain.push_back(next);
        at = next;
        std::size_t cont = segments.size();
        for (std::size_t cand : incident[at]) {
          if (!used[cand]) {
            cont = cand;
            break;
          }
        }
        if (cont == segments.size()) break;
        seg = cont;
      }
      return chain;
    };
    std::vector<std::vector<int>> chains;
    // open chains first (edges with a single incident segment)
    for (std::size_t si = 0; si < segments.size(); ++si) {
      if (used[si]) continue;
      for (int side = 0; side < 2; ++side) {
        const int e = segments[si][side];
        if (incident[e].size() == 1 && !used[si]) {
          chains.push_back(walk(si, e));
        }
      }
    }
    for (std::size_t si = 0; si < segments.size(); ++si) {
      if (!used[si]) chains.push_back(walk(si, segments[si][0]));
    }

    auto& polylines = data.curves[li];
    for (const auto& chain : chains) {
      std::vector<Point> pl;
      pl.reserve(chain.size());
      for (int e : chain) pl.push_back(vertex.at(e));
      polylines.push_back(std::move(pl));
    }
  }
  return data;
}

/// Largest |E(point) - level| over all emitted vertices; the construction
/// keeps it at or below 1e-9.
inline double level_set_max_defect(const LevelSetData& data) {
  double worst = 0.0;
  for (std::size_t li = 0; li < data.levels.size(); ++li) {
    for (const auto& pl : data.curves[li]) {
      for (const Point& pt : pl) {
        worst = std::max(worst, std::abs(phase_energy(data.system, data.params,
                                                      pt[0], pt[1]) -
                                         data.levels[li]));
      }
    }
  }
  return worst;
}

}  // namespace ptor
