#include "knde/geometry.hpp"

#include <unsupported/Eigen/SpecialFunctions>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace knde {

namespace {

constexpr double kPi = std::numbers::pi;

double pow_int(double base, int exp) {
  double r = 1.0;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Antiderivative of sqrt(r^2 - (t - cx)^2) with respect to t.
double circle_segment_antideriv(double t, double cx, double r) {
  double u = std::clamp((t - cx) / r, -1.0, 1.0);
  double g = r * std::sqrt(std::max(0.0, 1.0 - u * u));
  return 0.5 * ((t - cx) * g + r * r * std::asin(u));
}

double halton(std::uint64_t i, std::uint32_t base) {
  double f = 1.0;
  double r = 0.0;
  while (i != 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

constexpr std::array<std::uint32_t, 16> kHaltonBases = {
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double ball_ball_volume(int d, double r, const BallRegion& s, double dist) {
  if (dist + r <= s.radius) return ball_volume(d, r);
  if (dist + s.radius <= r) return ball_volume(d, s.radius);
  if (dist >= r + s.radius) return 0.0;
  // Lens: two caps cut by the radical plane.
  double h1 = (dist * dist - s.radius * s.radius + r * r) / (2.0 * dist);
  double h2 = dist - h1;
  return spherical_cap_volume(d, r, h1) +
         spherical_cap_volume(d, s.radius, h2);
}

double clipped_box_volume(const Box& box, const Eigen::Ref<const Vector>& x,
                          double r) {
  const int d = box.dim();
  // Containment fast paths keep the equality case bit-exact.
  bool ball_inside = true;
  for (int j = 0; j < d && ball_inside; ++j)
    ball_inside = x(j) - r >= box.lo(j) && x(j) + r <= box.hi(j);
  if (ball_inside) return ball_volume(d, r);

  if (d == 1) {
    double overlap =
        std::min(box.hi(0), x(0) + r) - std::max(box.lo(0), x(0) - r);
    return std::max(0.0, overlap);
  }

  // Farthest box corner inside the ball means the box is inside the ball.
  double far2 = 0.0;
  for (int j = 0; j < d; ++j) {
    double e = std::max(std::abs(x(j) - box.lo(j)), std::abs(x(j) - box.hi(j)));
    far2 += e * e;
  }
  if (far2 <= r * r) return box.volume();

  if (d == 2) return disk_box_area(x(0), x(1), r, box);
  return qmc_box_ball_volume(box, x, r);
}

}  // namespace

Box make_box(Vector lo, Vector hi) {
  if (lo.size() == 0 || lo.size() != hi.size())
    throw std::invalid_argument("box bounds must be nonempty and same size");
  if (!(lo.array() < hi.array()).all())
    throw std::invalid_argument("box requires lo < hi componentwise");
  return Box{std::move(lo), std::move(hi)};
}

Box make_cube(int dim, double lo, double hi) {
  return make_box(Vector::Constant(dim, lo), Vector::Constant(dim, hi));
}

int support_dim(const SupportRegion& support) {
  if (const auto* b = std::get_if<Box>(&support)) return b->dim();
  if (const auto* s = std::get_if<BallRegion>(&support))
    return static_cast<int>(s->center.size());
  return -1;
}

bool support_contains(const SupportRegion& support,
                      const Eigen::Ref<const Vector>& x) {
  if (const auto* b = std::get_if<Box>(&support)) return b->contains(x);
  if (const auto* s = std::get_if<BallRegion>(&support))
    return (x - s->center).norm() <= s->radius;
  return true;
}

double unit_ball_volume(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  static constexpr int kCached = 32;
  static const std::array<double, kCached + 1> table = [] {
    std::array<double, kCached + 1> t{};
    for (int i = 1; i <= kCached; ++i)
      t[i] = std::pow(kPi, i / 2.0) / std::tgamma(i / 2.0 + 1.0);
    return t;
  }();
  if (d <= kCached) return table[d];
  return std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

double ball_volume(int d, double r) {
  if (r < 0.0) throw std::invalid_argument("radius must be >= 0");
  return unit_ball_volume(d) * pow_int(r, d);
}

double spherical_cap_volume(int d, double radius, double h) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (radius <= 0.0) throw std::invalid_argument("radius must be > 0");
  if (h >= radius) return 0.0;
  if (h <= -radius) return ball_volume(d, radius);
  if (h < 0.0) return ball_volume(d, radius) - spherical_cap_volume(d, radius, -h);
  double z = 1.0 - (h / radius) * (h / radius);
  double frac = 0.5 * Eigen::numext::betainc((d + 1) / 2.0, 0.5, z);
  return ball_volume(d, radius) * frac;
}

double clipped_ball_volume(const SupportRegion& support,
                           const Eigen::Ref<const Vector>& x, double r) {
  if (r <= 0.0) throw std::invalid_argument("radius must be > 0");
  const int d = static_cast<int>(x.size());
  int sd = support_dim(support);
  if (sd >= 0 && sd != d)
    throw std::invalid_argument("support and point dimensions differ");

  if (std::holds_alternative<Unbounded>(support)) return ball_volume(d, r);
  if (const auto* s = std::get_if<BallRegion>(&support))
    return ball_ball_volume(d, r, *s, (x - s->center).norm());
  return clipped_box_volume(std::get<Box>(support), x, r);
}

double disk_box_area(double cx, double cy, double r, const Box& box) {
  double x0 = std::max(box.lo(0), cx - r);
  double x1 = std::min(box.hi(0), cx + r);
  if (x0 >= x1) return 0.0;

  // The vertical overlap min(hi, cy+g) - max(lo, cy-g), g = sqrt(r^2-(u-cx)^2),
  // changes branch exactly where g crosses |lo - cy| or |hi - cy|.
  std::array<double, 6> cuts{};
  int ncuts = 0;
  cuts[ncuts++] = x0;
  cuts[ncuts++] = x1;
  for (double dy : {box.lo(1) - cy, box.hi(1) - cy}) {
    if (std::abs(dy) < r) {
      double w = std::sqrt(r * r - dy * dy);
      for (double u : {cx - w, cx + w})
        if (u > x0 && u < x1) cuts[ncuts++] = u;
    }
  }
  std::sort(cuts.begin(), cuts.begin() + ncuts);

  double area = 0.0;
  for (int i = 0; i + 1 < ncuts; ++i) {
    double a = cuts[i];
    double b = cuts[i + 1];
    if (b - a <= 0.0) continue;
    double mid = 0.5 * (a + b);
    double gm = std::sqrt(std::max(0.0, r * r - (mid - cx) * (mid - cx)));
    bool top_flat = cy + gm > box.hi(1);
    bool bot_flat = cy - gm < box.lo(1);
    double top_mid = top_flat ? box.hi(1) : cy + gm;
    double bot_mid = bot_flat ? box.lo(1) : cy - gm;
    if (top_mid <= bot_mid) continue;

    double piece = 0.0;
    piece += top_flat ? box.hi(1) * (b - a)
                      : cy * (b - a) + (circle_segment_antideriv(b, cx, r) -
                                        circle_segment_antideriv(a, cx, r));
    piece -= bot_flat ? box.lo(1) * (b - a)
                      : cy * (b - a) - (circle_segment_antideriv(b, cx, r) -
                                        circle_segment_antideriv(a, cx, r));
    area += piece;
  }
  return std::max(0.0, area);
}

double qmc_box_ball_volume(const Box& box, const Eigen::Ref<const Vector>& x,
                           double r) {
  const int d = box.dim();
  if (d > static_cast<int>(kHaltonBases.size()))
    throw std::invalid_argument("low-discrepancy quadrature supports d <= 16");

  // Integrate the ball indicator over the box clipped to the ball's
  // bounding box; everything outside contributes zero.
  Vector clo(d), chi(d);
  for (int j = 0; j < d; ++j) {
    clo(j) = std::max(box.lo(j), x(j) - r);
    chi(j) = std::min(box.hi(j), x(j) + r);
    if (clo(j) >= chi(j)) return 0.0;
  }
  double cell = (chi - clo).prod();
  double r2 = r * r;

  const std::uint64_t kStart = 4096;
  const std::uint64_t kMax = 1u << 21;
  std::uint64_t inside = 0;
  std::uint64_t count = 0;
  double prev = -1.0;
  Vector p(d);
  for (std::uint64_t m = kStart; m <= kMax; m *= 2) {
    for (std::uint64_t i = count + 1; i <= m; ++i) {
      for (int j = 0; j < d; ++j)
        p(j) = clo(j) + halton(i, kHaltonBases[j]) * (chi(j) - clo(j));
      if ((p - x).squaredNorm() <= r2) ++inside;
    }
    count = m;
    double est = cell * static_cast<double>(inside) / static_cast<double>(m);
    if (prev >= 0.0) {
      double scale = std::max(est, prev);
      if (scale == 0.0 || std::abs(est - prev) <= 5e-4 * scale) return est;
    }
    prev = est;
  }
  return prev;
}

}  // namespace knde
