#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ptor/errors.hpp"
#include "ptor/field.hpp"
#include "ptor/geometry.hpp"

namespace ptor {

/// Discrete Schwarz rearrangement: the value multiset of the source field
/// placed decreasingly on a center-out spiral ordering of lattice cells.
/// Norms are preserved exactly (same multiset); gradients only
/// approximately, so sharp domain-level statements are tested with
/// independent solves rather than through this object.
struct RearrangedField {
  double h = 1.0;
  std::size_t cell_count = 0;
  std::vector<std::pair<double, double>> radial_values;  // (radius, value)
  GridField field;  // materialized on the spiral disk mask
};

/// h^2 times the number of interior cells with value > t.
inline double distribution_volume(const GridField& u, double t) {
  u.mask().require_valid("distribution_volume");
  std::size_t count = 0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k] > t) ++count;
  }
  const double h = u.mask().h();
  return static_cast<double>(count) * h * h;
}

namespace detail {

/// First `count` lattice cells ordered by (|x|^2, angle); the prefix of any
/// length is 4-connected since every cell (i, j) != 0 has an axis neighbor
/// of strictly smaller norm.
inline std::vector<std::array<int, 2>> spiral_order(std::size_t count) {
  const int k_max =
      static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count) / 3.14))) + 2;
  std::vector<std::array<int, 2>> cells;
  cells.reserve(static_cast<std::size_t>(2 * k_max + 1) * (2 * k_max + 1));
  for (int j = -k_max; j <= k_max; ++j) {
    for (int i = -k_max; i <= k_max; ++i) {
      cells.push_back({i, j});
    }
  }
  std::sort(cells.begin(), cells.end(),
            [](const std::array<int, 2>& a, const std::array<int, 2>& b) {
              const long ra = static_cast<long>(a[0]) * a[0] +
                              static_cast<long>(a[1]) * a[1];
              const long rb = static_cast<long>(b[0]) * b[0] +
                              static_cast<long>(b[1]) * b[1];
              if (ra != rb) return ra < rb;
              const double ta = std::atan2(static_cast<double>(a[1]),
                                           static_cast<double>(a[0]));
              const double tb = std::atan2(static_cast<double>(b[1]),
                                           static_cast<double>(b[0]));
              if (ta != tb) return ta < tb;
              return a < b;
            });
  if (cells.size() < count) {
    fail(errc::invalid_argument, "spiral_order: internal sizing error");
  }
  cells.resize(count);
  return cells;
}

}  // namespace detail

/// Decreasing radial rearrangement of a nonnegative field.
inline RearrangedField rearrange(const GridField& u) {
  u.mask().require_valid("rearrange");
  if (u.min_value() < 0.0) {
    fail(errc::negative_field, "rearrange: field has negative values");
  }
  const std::size_t n = u.size();
  const double h = u.mask().h();

  std::vector<double> sorted = u.values();
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());

  const auto cells = detail::spiral_order(n);
  int k_max = 0;
  for (const auto& c : cells) {
    k_max = std::max({k_max, std::abs(c[0]), std::abs(c[1])});
  }
  const int nx = 2 * k_max + 1;
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(nx) * nx, 0);
  for (const auto& c : cells) {
    occ[static_cast<std::size_t>(c[1] + k_max) * nx + (c[0] + k_max)] = 1;
  }
  auto mask = std::make_shared<const GridMask>(h, -k_max, -k_max, nx, nx,
                                               std::move(occ));

  // mask indexing is row-major; place the k-th largest value on the k-th
  // spiral cell through the mask's cell index
  std::vector<double> values(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const int idx = mask->index(cells[k][0] + k_max, cells[k][1] + k_max);
    values[static_cast<std::size_t>(idx)] = sorted[k];
  }

  RearrangedField out{h, n, {}, GridField(mask, std::move(values))};
  out.radial_values.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double r = h * std::sqrt(static_cast<double>(
                             static_cast<long>(cells[k][0]) * cells[k][0] +
                             static_cast<long>(cells[k][1]) * cells[k][1]));
    out.radial_values.emplace_back(r, sorted[k]);
  }
  return out;
}

}  // namespace ptor
