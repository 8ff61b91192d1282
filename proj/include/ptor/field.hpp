#pragma once

#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "ptor/errors.hpp"
#include "ptor/geometry.hpp"
#include "ptor/numerics.hpp"

namespace ptor {

/// Real-valued function sampled on the interior cells of a GridMask,
/// implicitly zero on every exterior cell (homogeneous Dirichlet data).
class GridField {
 public:
  GridField(MaskPtr mask, std::vector<double> values)
      : mask_(std::move(mask)), values_(std::move(values)) {
    if (!mask_) fail(errc::invalid_argument, "GridField: null mask");
    if (values_.size() != mask_->size()) {
      fail(errc::invalid_argument, "GridField: value count != interior cells");
    }
  }

  static GridField zeros(MaskPtr mask) {
    std::vector<double> v(mask->size(), 0.0);
    return GridField(std::move(mask), std::move(v));
  }

  static GridField constant(MaskPtr mask, double c) {
    std::vector<double> v(mask->size(), c);
    return GridField(std::move(mask), std::move(v));
  }

  /// Sample f(x, y) at interior cell centers.
  template <class F>
  static GridField sample(MaskPtr mask, F&& f) {
    std::vector<double> v(mask->size());
    for (std::size_t k = 0; k < mask->size(); ++k) {
      const Point c = mask->center(k);
      v[k] = f(c[0], c[1]);
    }
    return GridField(std::move(mask), std::move(v));
  }

  const GridMask& mask() const { return *mask_; }
  MaskPtr mask_ptr() const { return mask_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Value at array cell (i, j); zero outside the interior.
  double value_at(int i, int j) const {
    const int k = mask_->index(i, j);
    return k >= 0 ? values_[k] : 0.0;
  }

  double max_value() const {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values_) m = std::max(m, v);
    return m;
  }
  double min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values_) m = std::min(m, v);
    return m;
  }

 private:
  MaskPtr mask_;
  std::vector<double> values_;
};

namespace detail {

inline void require_same_mask(const GridField& a, const GridField& b,
                              const char* who) {
  if (&a.mask() != &b.mask() && (a.mask().h() != b.mask().h() ||
                                 a.size() != b.size())) {
    fail(errc::invalid_argument, std::string(who) + ": fields on different masks");
  }
}

/// y = -Laplacian(x) as a raw kernel over interior indices.
inline void apply_neg_laplacian(const GridMask& mask,
                                const std::vector<double>& x,
                                std::vector<double>& y) {
  const double inv_h2 = 1.0 / (mask.h() * mask.h());
  const auto& nbs = mask.neighbors();
  const std::size_t n = x.size();
  for (std::size_t k = 0; k < n; ++k) {
    double s = 4.0 * x[k];
    const auto& nb = nbs[k];
    if (nb[0] >= 0) s -= x[nb[0]];
    if (nb[1] >= 0) s -= x[nb[1]];
    if (nb[2] >= 0) s -= x[nb[2]];
    if (nb[3] >= 0) s -= x[nb[3]];
    y[k] = s * inv_h2;
  }
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  KahanSum s;
  for (std::size_t k = 0; k < a.size(); ++k) s.add(a[k] * b[k]);
  return s.value();
}

}  // namespace detail

/// Five-point stencil (u_E + u_W + u_N + u_S - 4 u_C) / h^2 with zero ghost
/// values outside the mask.
inline GridField laplacian_apply(const GridField& u) {
  u.mask().require_valid("laplacian_apply");
  std::vector<double> y(u.size());
  detail::apply_neg_laplacian(u.mask(), u.values(), y);
  for (double& v : y) v = -v;
  return GridField(u.mask_ptr(), std::move(y));
}

struct PoissonStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Solve -Laplacian(u) = f by conjugate gradients (Jacobi-scaled) to a
/// relative residual tol in the discrete 2-norm. The iteration cap is
/// 20 * (nx + ny); exceeding it reports NoConvergence.
inline GridField poisson_solve(const GridField& f, double tol,
                               PoissonStats* stats = nullptr,
                               const GridField* initial_guess = nullptr) {
  f.mask().require_valid("poisson_solve");
  if (!(tol > 0.0)) fail(errc::invalid_argument, "poisson_solve: tol must be > 0");
  const GridMask& mask = f.mask();
  const std::size_t n = f.size();
  const double norm_f = std::sqrt(detail::dot(f.values(), f.values()));
  if (norm_f == 0.0) {
    if (stats) *stats = {0, 0.0};
    return GridField::zeros(f.mask_ptr());
  }

  std::vector<double> x(n, 0.0);
  if (initial_guess) {
    detail::require_same_mask(f, *initial_guess, "poisson_solve");
    x = initial_guess->values();
  }
  std::vector<double> r(n), q(n), p(n), z(n);
  detail::apply_neg_laplacian(mask, x, q);
  for (std::size_t k = 0; k < n; ++k) r[k] = f[k] - q[k];

  const double jacobi = mask.h() * mask.h() / 4.0;  // constant diagonal
  for (std::size_t k = 0; k < n; ++k) z[k] = jacobi * r[k];
  p = z;
  double rz = detail::dot(r, z);
  double rnorm = std::sqrt(detail::dot(r, r));

  const int cap = 20 * (mask.nx() + mask.ny());
  int it = 0;
  while (rnorm > tol * norm_f) {
    if (it >= cap) {
      fail(errc::no_convergence,
           "poisson_solve: CG exceeded " + std::to_string(cap) +
               " iterations (residual " + std::to_string(rnorm / norm_f) + ")");
    }
    detail::apply_neg_laplacian(mask, p, q);
    const double pq = detail::dot(p, q);
    if (!(pq > 0.0)) {
      fail(errc::no_convergence, "poisson_solve: operator lost definiteness");
    }
    const double alpha = rz / pq;
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * q[k];
    }
    for (std::size_t k = 0; k < n; ++k) z[k] = jacobi * r[k];
    const double rz_new = detail::dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
    rnorm = std::sqrt(detail::dot(r, r));
    ++it;
  }
  if (stats) *stats = {it, rnorm / norm_f};
  return GridField(f.mask_ptr(), std::move(x));
}

/// Edge-based Dirichlet energy: sum over grid edges (including edges that
/// cross into the zero exterior) of (difference / h)^2 * h^2. By
/// construction it equals the quadratic form <u, -Laplacian_h u> h^2.
inline double dirichlet_energy(const GridField& u) {
  u.mask().require_valid("dirichlet_energy");
  const GridMask& mask = u.mask();
  const auto& nbs = mask.neighbors();
  KahanSum s;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double uc = u[k];
    const auto& nb = nbs[k];
    // east and north edges always belong to this cell
    {
      const double d = (nb[0] >= 0 ? u[nb[0]] : 0.0) - uc;
      s.add(d * d);
    }
    {
      const double d = (nb[2] >= 0 ? u[nb[2]] : 0.0) - uc;
      s.add(d * d);
    }
    // west and south edges only when the neighbor is exterior, so each
    // interior-interior edge is counted exactly once
    if (nb[1] < 0) s.add(uc * uc);
    if (nb[3] < 0) s.add(uc * uc);
  }
  return s.value();  // (d/h)^2 * h^2 == d^2
}

/// Integral of u^p over the mask (the p-th power integral, not its root).
/// Negative values with non-integer p are rejected.
inline double lp_norm_p(const GridField& u, double p) {
  u.mask().require_valid("lp_norm_p");
  if (!(p >= 1.0)) fail(errc::invalid_argument, "lp_norm_p: p must be >= 1");
  const bool integral_p = p == std::floor(p);
  KahanSum s;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double v = u[k];
    if (!integral_p && v < 0.0) {
      fail(errc::negative_value_with_fractional_power,
           "lp_norm_p: negative value with fractional p");
    }
    s.add(std::pow(v, p));
  }
  const double h = u.mask().h();
  return s.value() * h * h;
}

/// Rayleigh-type functional: dirichlet_energy(u) / (integral of u^p)^(2/p).
inline double phi_p(const GridField& u, double p) {
  const double denom = lp_norm_p(u, p);
  if (!(denom > 0.0)) {
    fail(errc::zero_denominator, "phi_p: integral of u^p is not positive");
  }
  return dirichlet_energy(u) / std::pow(denom, 2.0 / p);
}

/// Plain (unweighted) euclidean inner product of two fields' values.
inline double field_dot(const GridField& a, const GridField& b) {
  detail::require_same_mask(a, b, "field_dot");
  return detail::dot(a.values(), b.values());
}

/// Bilinear interpolation of the zero-extended field at a physical point.
inline double interpolate(const GridField& u, const Point& x) {
  const GridMask& mask = u.mask();
  const double h = mask.h();
  const Point o = mask.origin();
  const double gx = (x[0] - o[0]) / h;
  const double gy = (x[1] - o[1]) / h;
  const int i0 = static_cast<int>(std::floor(gx));
  const int j0 = static_cast<int>(std::floor(gy));
  const double fx = gx - i0;
  const double fy = gy - j0;
  const double v00 = u.value_at(i0, j0);
  const double v10 = u.value_at(i0 + 1, j0);
  const double v01 = u.value_at(i0, j0 + 1);
  const double v11 = u.value_at(i0 + 1, j0 + 1);
  return (1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10 +
         (1 - fx) * fy * v01 + fx * fy * v11;
}

}  // namespace ptor
