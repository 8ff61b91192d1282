#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

#include "ptor/errors.hpp"

namespace ptor {

/// Neumaier-compensated accumulator. The accumulated error is bounded
/// independently of summation order, so sums over permuted multisets
/// agree to the last ulp.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// splitmix64 (Steele, Lea and Flood, 2014). Small, splittable and has a
/// canonical reference implementation, so streams are reproducible across
/// toolchains. Reports that depend on random numbers record the
/// algorithm id "splitmix64".
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 mantissa bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Deterministic substream key for item `index` under `seed`; used to
  /// partition path/cell streams without sequential dependence.
  static std::uint64_t stream_key(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ull * (index + 1)));
    return g.next();
  }

 private:
  std::uint64_t state_;
};

inline constexpr char kRngAlgorithm[] = "splitmix64";

/// Gamma function by the Lanczos approximation (g = 7, 9 coefficients),
/// about 1e-13 relative accuracy on the positive real axis. Kept local so
/// the Gamma route of A_p stays independent of any quadrature code.
inline double lanczos_gamma(double x) {
  static constexpr double g = 7.0;
  static constexpr std::array<double, 9> coeff = {
      0.99999999999980993,     676.5203681218851,    -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,  12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  const double pi = 3.14159265358979323846;
  if (x < 0.5) {
    // reflection formula
    return pi / (std::sin(pi * x) * lanczos_gamma(1.0 - x));
  }
  x -= 1.0;
  double a = coeff[0];
  const double t = x + g + 0.5;
  for (std::size_t i = 1; i < coeff.size(); ++i) {
    a += coeff[i] / (x + static_cast<double>(i));
  }
  return std::sqrt(2.0 * pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

/// Volume of the unit ball in R^n.
inline double unit_ball_volume(int n) {
  if (n < 1) fail(errc::invalid_argument, "unit_ball_volume: n must be >= 1");
  const double pi = 3.14159265358979323846;
  return std::pow(pi, 0.5 * n) / lanczos_gamma(0.5 * n + 1.0);
}

namespace detail {

template <class F>
double adaptive_simpson_rec(F& f, double a, double b, double fa, double fm,
                            double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol,
                        int max_depth = 60) {
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol,
                                      max_depth);
}

/// Bisection on a bracketing interval [lo, hi] with f(lo), f(hi) of
/// opposite sign. Returns the midpoint of the final bracket.
template <class F>
double bisect(F&& f, double lo, double hi, double flo, double fhi,
              double xtol, int max_iter = 200) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    fail(errc::no_bracket, "bisect: endpoints do not bracket a root");
  }
  for (int it = 0; it < max_iter && (hi - lo) > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }
  return 0.5 * (lo + hi);
}

/// One classical RK4 step for y' = f(x, y) with a 2-component state.
template <class F>
std::array<double, 2> rk4_step(F&& f, double x, const std::array<double, 2>& y,
                               double h) {
  const auto k1 = f(x, y);
  const auto k2 = f(x + 0.5 * h, std::array<double, 2>{y[0] + 0.5 * h * k1[0],
                                                       y[1] + 0.5 * h * k1[1]});
  const auto k3 = f(x + 0.5 * h, std::array<double, 2>{y[0] + 0.5 * h * k2[0],
                                                       y[1] + 0.5 * h * k2[1]});
  const auto k4 =
      f(x + h, std::array<double, 2>{y[0] + h * k3[0], y[1] + h * k3[1]});
  return {y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
          y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

/// Root of the cubic Hermite interpolant through (x0, y0, d0), (x1, y1, d1);
/// y0 and y1 must have opposite signs. Used to locate zero crossings inside
/// one integration step to the order of the integrator.
inline double hermite_zero(double x0, double y0, double d0, double x1,
                           double y1, double d1) {
  const double hw = x1 - x0;
  auto eval = [&](double t) {
    // t in [0, 1]
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y0 + h10 * hw * d0 + h01 * y1 + h11 * hw * d1;
  };
  double lo = 0.0, hi = 1.0, flo = y0, fhi = y1;
  if ((flo > 0.0) == (fhi > 0.0)) return x1;  // no sign change; caller's guard
  for (int it = 0; it < 80 && (hi - lo) > 1e-17; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = eval(mid);
    if (fm == 0.0) return x0 + mid * hw;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return x0 + 0.5 * (lo + hi) * hw;
}

/// sign(u) * |u|^q; the odd extension used when an ODE trajectory
/// overshoots into u < 0 during shooting.
inline double signed_pow(double u, double q) {
  if (u == 0.0) return 0.0;
  const double mag = std::pow(std::abs(u), q);
  return u > 0.0 ? mag : -mag;
}

}  // namespace ptor
