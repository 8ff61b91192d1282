#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "ptor/errors.hpp"

namespace ptor {

using Point = std::array<double, 2>;

enum class DomainKind { disk, rectangle, polygon, annulus, ball, slab };

inline const char* kind_name(DomainKind k) {
  switch (k) {
    case DomainKind::disk: return "disk";
    case DomainKind::rectangle: return "rectangle";
    case DomainKind::polygon: return "polygon";
    case DomainKind::annulus: return "annulus";
    case DomainKind::ball: return "ball";
    case DomainKind::slab: return "slab";
  }
  return "?";
}

namespace detail {

inline double cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

inline bool on_segment(const Point& a, const Point& b, const Point& q) {
  return std::min(a[0], b[0]) <= q[0] && q[0] <= std::max(a[0], b[0]) &&
         std::min(a[1], b[1]) <= q[1] && q[1] <= std::max(a[1], b[1]);
}

/// Proper or improper intersection of segments [a,b] and [c,d].
inline bool segments_intersect(const Point& a, const Point& b, const Point& c,
                               const Point& d) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0 && on_segment(c, d, a)) return true;
  if (d2 == 0 && on_segment(c, d, b)) return true;
  if (d3 == 0 && on_segment(a, b, c)) return true;
  if (d4 == 0 && on_segment(a, b, d)) return true;
  return false;
}

inline double point_segment_distance(const Point& p, const Point& a,
                                     const Point& b) {
  const double vx = b[0] - a[0], vy = b[1] - a[1];
  const double wx = p[0] - a[0], wy = p[1] - a[1];
  const double vv = vx * vx + vy * vy;
  double t = vv > 0.0 ? (wx * vx + wy * vy) / vv : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = p[0] - (a[0] + t * vx);
  const double dy = p[1] - (a[1] + t * vy);
  return std::hypot(dx, dy);
}

}  // namespace detail

/// Symbolic description of a domain. Planar grid-solvable kinds (disk,
/// rectangle, annulus) are centered at the origin; polygons carry explicit
/// vertices. ball and slab live in R^n, n >= 2.
struct DomainSpec {
  DomainKind kind = DomainKind::disk;
  int n = 2;

  double radius = 0.0;                   // disk, ball
  std::array<double, 2> half_widths{};   // rectangle
  std::vector<Point> vertices;           // polygon (counter- or clockwise)
  double r_in = 0.0, r_out = 0.0;        // annulus
  double half_width = 0.0;               // slab

  static DomainSpec disk(double radius) {
    if (!(radius > 0.0)) fail(errc::invalid_argument, "disk: radius must be > 0");
    DomainSpec d;
    d.kind = DomainKind::disk;
    d.n = 2;
    d.radius = radius;
    return d;
  }

  static DomainSpec rectangle(double hx, double hy) {
    if (!(hx > 0.0) || !(hy > 0.0)) {
      fail(errc::invalid_argument, "rectangle: half-widths must be > 0");
    }
    DomainSpec d;
    d.kind = DomainKind::rectangle;
    d.n = 2;
    d.half_widths = {hx, hy};
    return d;
  }

  static DomainSpec polygon(std::vector<Point> vertices) {
    const std::size_t m = vertices.size();
    if (m < 3) fail(errc::invalid_argument, "polygon: needs >= 3 vertices");
    // Simplicity: no two non-adjacent edges may intersect; adjacent edges
    // may only share their common vertex.
    for (std::size_t i = 0; i < m; ++i) {
      const Point& a = vertices[i];
      const Point& b = vertices[(i + 1) % m];
      for (std::size_t j = i + 1; j < m; ++j) {
        const Point& c = vertices[j];
        const Point& d = vertices[(j + 1) % m];
        const bool adjacent = (j == i + 1) || (i == 0 && j == m - 1);
        if (adjacent) continue;
        if (detail::segments_intersect(a, b, c, d)) {
          fail(errc::invalid_argument, "polygon: edges intersect (not simple)");
        }
      }
      if (a[0] == b[0] && a[1] == b[1]) {
        fail(errc::invalid_argument, "polygon: repeated consecutive vertex");
      }
    }
    DomainSpec d;
    d.kind = DomainKind::polygon;
    d.n = 2;
    d.vertices = std::move(vertices);
    return d;
  }

  static DomainSpec annulus(double r_in, double r_out) {
    if (!(r_in > 0.0) || !(r_out > r_in)) {
      fail(errc::invalid_argument, "annulus: need 0 < r_in < r_out");
    }
    DomainSpec d;
    d.kind = DomainKind::annulus;
    d.n = 2;
    d.r_in = r_in;
    d.r_out = r_out;
    return d;
  }

  static DomainSpec ball(int n, double radius) {
    if (n < 2) fail(errc::unsupported_dimension, "ball: n must be >= 2");
    if (!(radius > 0.0)) fail(errc::invalid_argument, "ball: radius must be > 0");
    DomainSpec d;
    d.kind = DomainKind::ball;
    d.n = n;
    d.radius = radius;
    return d;
  }

  static DomainSpec slab(int n, double half_width) {
    if (n < 2) fail(errc::unsupported_dimension, "slab: n must be >= 2");
    if (!(half_width > 0.0)) {
      fail(errc::invalid_argument, "slab: half_width must be > 0");
    }
    DomainSpec d;
    d.kind = DomainKind::slab;
    d.n = n;
    d.half_width = half_width;
    return d;
  }
};

/// Strict interior membership test for the planar kinds.
inline bool contains(const DomainSpec& d, const Point& x) {
  switch (d.kind) {
    case DomainKind::disk:
      return x[0] * x[0] + x[1] * x[1] < d.radius * d.radius;
    case DomainKind::ball:
      if (d.n != 2) fail(errc::unsupported_dimension, "contains: ball with n != 2");
      return x[0] * x[0] + x[1] * x[1] < d.radius * d.radius;
    case DomainKind::rectangle:
      return std::abs(x[0]) < d.half_widths[0] && std::abs(x[1]) < d.half_widths[1];
    case DomainKind::annulus: {
      const double r2 = x[0] * x[0] + x[1] * x[1];
      return r2 > d.r_in * d.r_in && r2 < d.r_out * d.r_out;
    }
    case DomainKind::polygon: {
      // Ray casting with the half-open edge convention [y_lo, y_hi): each
      // crossing vertex is counted exactly once and horizontal edges never.
      const std::size_t m = d.vertices.size();
      bool inside = false;
      for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
        const Point& a = d.vertices[i];
        const Point& b = d.vertices[j];
        if ((a[1] <= x[1]) != (b[1] <= x[1])) {
          const double xi = a[0] + (x[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
          if (x[0] < xi) inside = !inside;
        }
      }
      return inside;
    }
    case DomainKind::slab:
      fail(errc::unsupported_kind, "contains: slab is unbounded");
  }
  return false;
}

/// Distance from an interior point to the boundary (0 outside or on it).
/// Available for the kinds the walk-on-spheres estimator supports.
inline double boundary_distance(const DomainSpec& d, const Point& x) {
  switch (d.kind) {
    case DomainKind::disk:
      return d.radius - std::hypot(x[0], x[1]);
    case DomainKind::rectangle:
      return std::min(d.half_widths[0] - std::abs(x[0]),
                      d.half_widths[1] - std::abs(x[1]));
    case DomainKind::polygon: {
      if (!contains(d, x)) return 0.0;
      double best = std::numeric_limits<double>::infinity();
      const std::size_t m = d.vertices.size();
      for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
        best = std::min(best, detail::point_segment_distance(x, d.vertices[j],
                                                             d.vertices[i]));
      }
      return best;
    }
    default:
      fail(errc::unsupported_kind,
           std::string("boundary_distance: no oracle for kind ") +
               kind_name(d.kind));
  }
}

/// Axis-aligned bounding box {min, max} of a planar domain.
inline std::array<Point, 2> bounding_box(const DomainSpec& d) {
  switch (d.kind) {
    case DomainKind::disk:
    case DomainKind::ball:
      return {Point{-d.radius, -d.radius}, Point{d.radius, d.radius}};
    case DomainKind::rectangle:
      return {Point{-d.half_widths[0], -d.half_widths[1]},
              Point{d.half_widths[0], d.half_widths[1]}};
    case DomainKind::annulus:
      return {Point{-d.r_out, -d.r_out}, Point{d.r_out, d.r_out}};
    case DomainKind::polygon: {
      Point lo{std::numeric_limits<double>::infinity(),
               std::numeric_limits<double>::infinity()};
      Point hi{-lo[0], -lo[1]};
      for (const Point& v : d.vertices) {
        lo[0] = std::min(lo[0], v[0]);
        lo[1] = std::min(lo[1], v[1]);
        hi[0] = std::max(hi[0], v[0]);
        hi[1] = std::max(hi[1], v[1]);
      }
      return {lo, hi};
    }
    case DomainKind::slab:
      fail(errc::unsupported_kind, "bounding_box: slab is unbounded");
  }
  return {};
}

/// Exact inradius where the geometry gives it in closed form; < 0 when only
/// a discrete estimate is possible (polygon).
inline double exact_inradius(const DomainSpec& d) {
  switch (d.kind) {
    case DomainKind::disk:
    case DomainKind::ball:
      return d.radius;
    case DomainKind::rectangle:
      return std::min(d.half_widths[0], d.half_widths[1]);
    case DomainKind::annulus:
      return 0.5 * (d.r_out - d.r_in);
    case DomainKind::slab:
      return d.half_width;
    case DomainKind::polygon:
      return -1.0;
  }
  return -1.0;
}

/// Masked uniform grid with spacing h. Cell (i, j) of the array has center
/// origin + (i*h, j*h); the lattice is anchored so centers sit at exact
/// integer multiples of h in global coordinates. Interior cells carry a
/// contiguous index in row-major (j outer) order.
class GridMask {
 public:
  GridMask() = default;

  GridMask(double h, int gi0, int gj0, int nx, int ny,
           std::vector<std::uint8_t> occupancy)
      : h_(h), gi0_(gi0), gj0_(gj0), nx_(nx), ny_(ny),
        occupancy_(std::move(occupancy)) {
    if (!(h > 0.0)) fail(errc::invalid_argument, "GridMask: h must be > 0");
    if (static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_) !=
        occupancy_.size()) {
      fail(errc::invalid_argument, "GridMask: occupancy size mismatch");
    }
    build_index();
  }

  double h() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  Point origin() const { return {gi0_ * h_, gj0_ * h_}; }
  std::size_t size() const { return cells_.size(); }
  bool valid() const { return !cells_.empty() && connected_; }

  void require_valid(const char* who) const {
    if (cells_.empty()) {
      fail(errc::invalid_mask, std::string(who) + ": mask has no interior cells");
    }
    if (!connected_) {
      fail(errc::invalid_mask, std::string(who) + ": mask is not 4-connected");
    }
  }

  bool interior(int i, int j) const {
    if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return false;
    return occupancy_[static_cast<std::size_t>(j) * nx_ + i] != 0;
  }

  /// Linear interior index of cell (i, j), or -1.
  int index(int i, int j) const {
    if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return -1;
    return index_[static_cast<std::size_t>(j) * nx_ + i];
  }

  const std::vector<std::array<int, 2>>& cells() const { return cells_; }

  /// Interior indices of the E, W, N, S neighbors of interior cell k
  /// (-1 where the neighbor is exterior).
  const std::vector<std::array<int, 4>>& neighbors() const { return neighbors_; }

  Point center(int i, int j) const {
    return {(gi0_ + i) * h_, (gj0_ + j) * h_};
  }
  Point center(std::size_t k) const {
    return center(cells_[k][0], cells_[k][1]);
  }

  /// Global lattice coordinates (multiples of h) of interior cell k.
  std::array<int, 2> lattice(std::size_t k) const {
    return {gi0_ + cells_[k][0], gj0_ + cells_[k][1]};
  }

  /// Interior test in global lattice coordinates; lets masks of different
  /// extents (same h, same anchoring) be compared cell-by-cell.
  bool interior_lattice(int gi, int gj) const {
    return interior(gi - gi0_, gj - gj0_);
  }

 private:
  void build_index() {
    index_.assign(occupancy_.size(), -1);
    for (int j = 0; j < ny_; ++j) {
      for (int i = 0; i < nx_; ++i) {
        if (interior(i, j)) {
          index_[static_cast<std::size_t>(j) * nx_ + i] =
              static_cast<int>(cells_.size());
          cells_.push_back({i, j});
        }
      }
    }
    neighbors_.resize(cells_.size());
    for (std::size_t k = 0; k < cells_.size(); ++k) {
      const int i = cells_[k][0], j = cells_[k][1];
      neighbors_[k] = {index(i + 1, j), index(i - 1, j), index(i, j + 1),
                       index(i, j - 1)};
    }
    // connectivity (BFS from cell 0)
    connected_ = true;
    if (!cells_.empty()) {
      std::vector<std::uint8_t> seen(cells_.size(), 0);
      std::vector<int> stack{0};
      seen[0] = 1;
      std::size_t visited = 1;
      while (!stack.empty()) {
        const int k = stack.back();
        stack.pop_back();
        for (int nb : neighbors_[k]) {
          if (nb >= 0 && !seen[nb]) {
            seen[nb] = 1;
            ++visited;
            stack.push_back(nb);
          }
        }
      }
      connected_ = visited == cells_.size();
    }
  }

  double h_ = 1.0;
  int gi0_ = 0, gj0_ = 0;
  int nx_ = 0, ny_ = 0;
  std::vector<std::uint8_t> occupancy_;
  std::vector<int> index_;
  std::vector<std::array<int, 2>> cells_;
  std::vector<std::array<int, 4>> neighbors_;
  bool connected_ = false;
};

using MaskPtr = std::shared_ptr<const GridMask>;

/// Exact squared Euclidean distance transform (Felzenszwalb-Huttenlocher),
/// distances measured in cell units to the nearest non-interior cell.
namespace detail {

inline void edt_1d(const std::vector<double>& f, std::vector<double>& out) {
  const int n = static_cast<int>(f.size());
  static thread_local std::vector<int> v;
  static thread_local std::vector<double> z;
  v.assign(n, 0);
  z.assign(n + 1, 0.0);
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s;
    while (true) {
      const int p = v[k];
      s = ((f[q] + q * q) - (f[p] + p * p)) / (2.0 * q - 2.0 * p);
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const int p = v[k];
    out[q] = (q - p) * (q - p) + f[p];
  }
}

}  // namespace detail

/// Number of interior cells times h^n (n = 2 for the planar grid).
inline double volume(const GridMask& mask) {
  mask.require_valid("volume");
  return static_cast<double>(mask.size()) * mask.h() * mask.h();
}

/// Largest distance from an interior cell center to the nearest
/// non-interior cell center; exact Euclidean transform, O(h) accurate.
inline double inradius(const GridMask& mask) {
  mask.require_valid("inradius");
  // pad one ring of exterior cells so the transform sees the outside
  const int nx = mask.nx() + 2, ny = mask.ny() + 2;
  const double inf = 1e20;
  std::vector<double> dist(static_cast<std::size_t>(nx) * ny, 0.0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      dist[static_cast<std::size_t>(j) * nx + i] =
          mask.interior(i - 1, j - 1) ? inf : 0.0;
    }
  }
  std::vector<double> col(ny), out(ny);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) col[j] = dist[static_cast<std::size_t>(j) * nx + i];
    detail::edt_1d(col, out);
    for (int j = 0; j < ny; ++j) dist[static_cast<std::size_t>(j) * nx + i] = out[j];
  }
  std::vector<double> row(nx), rout(nx);
  double best = 0.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) row[i] = dist[static_cast<std::size_t>(j) * nx + i];
    detail::edt_1d(row, rout);
    for (int i = 0; i < nx; ++i) {
      if (mask.interior(i - 1, j - 1)) best = std::max(best, rout[i]);
    }
  }
  return std::sqrt(best) * mask.h();
}

/// Rasterize a planar domain to the grid of cells whose centers lie
/// strictly inside. Requires at least 8 cells across the inradius and a
/// 4-connected result.
inline GridMask rasterize(const DomainSpec& domain, double h) {
  if (!(h > 0.0)) fail(errc::invalid_argument, "rasterize: h must be > 0");
  if (domain.kind == DomainKind::slab) {
    fail(errc::unsupported_kind,
         "rasterize: slab is unbounded; rasterize a rectangle truncation");
  }
  if (domain.n != 2) {
    fail(errc::unsupported_dimension, "rasterize: grid rasterization is 2-D");
  }
  // "8 cells across the inradius" = the inscribed disk spans >= 8 cells
  const double exact_r = exact_inradius(domain);
  if (exact_r > 0.0 && 2.0 * exact_r < 8.0 * h * (1.0 - 1e-12)) {
    fail(errc::resolution_too_coarse,
         "rasterize: fewer than 8 cells across the inradius (inradius " +
             std::to_string(exact_r) + ", h " + std::to_string(h) + ")");
  }

  const auto bb = bounding_box(domain);
  const int gi0 = static_cast<int>(std::floor(bb[0][0] / h)) - 1;
  const int gi1 = static_cast<int>(std::ceil(bb[1][0] / h)) + 1;
  const int gj0 = static_cast<int>(std::floor(bb[0][1] / h)) - 1;
  const int gj1 = static_cast<int>(std::ceil(bb[1][1] / h)) + 1;
  const int nx = gi1 - gi0 + 1;
  const int ny = gj1 - gj0 + 1;
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(nx) * ny, 0);
  std::size_t count = 0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Point c{(gi0 + i) * h, (gj0 + j) * h};
      if (contains(domain, c)) {
        occ[static_cast<std::size_t>(j) * nx + i] = 1;
        ++count;
      }
    }
  }
  if (count == 0) {
    fail(errc::resolution_too_coarse, "rasterize: no cell center is interior");
  }
  GridMask mask(h, gi0, gj0, nx, ny, std::move(occ));
  if (!mask.valid()) {
    fail(errc::resolution_too_coarse,
         "rasterize: mask is disconnected at this resolution");
  }
  if (exact_r < 0.0) {
    // polygon: only a discrete inradius is available; allow one cell of
    // transform slack on the 8-cell rule
    if (2.0 * inradius(mask) < (8.0 - 1.0) * h) {
      fail(errc::resolution_too_coarse,
           "rasterize: fewer than 8 cells across the (discrete) inradius");
    }
  }
  return mask;
}

inline MaskPtr rasterize_shared(const DomainSpec& domain, double h) {
  return std::make_shared<const GridMask>(rasterize(domain, h));
}

/// All length parameters multiplied by r; kind and dimension unchanged.
inline DomainSpec scale_domain(const DomainSpec& domain, double r) {
  if (!(r > 0.0)) fail(errc::nonpositive_scale, "scale_domain: r must be > 0");
  DomainSpec d = domain;
  d.radius *= r;
  d.half_widths[0] *= r;
  d.half_widths[1] *= r;
  d.r_in *= r;
  d.r_out *= r;
  d.half_width *= r;
  for (Point& v : d.vertices) {
    v[0] *= r;
    v[1] *= r;
  }
  return d;
}

/// Disk (n = 2 ball) with continuous volume equal to volume(mask).
inline DomainSpec equal_volume_ball(const GridMask& mask) {
  const double v = volume(mask);
  const double pi = 3.14159265358979323846;
  return DomainSpec::disk(std::sqrt(v / pi));
}

}  // namespace ptor
