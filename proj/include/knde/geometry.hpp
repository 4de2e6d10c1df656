#pragma once

#include "knde/types.hpp"

#include <variant>

namespace knde {

//! Axis-aligned box [lo, hi], lo < hi componentwise.
struct Box {
  Vector lo;
  Vector hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const { return (hi - lo).prod(); }
  bool contains(const Eigen::Ref<const Vector>& x) const {
    return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
  }
};

Box make_box(Vector lo, Vector hi);
Box make_cube(int dim, double lo, double hi);

//! Euclidean ball support {u : |u - center| <= radius}.
struct BallRegion {
  Vector center;
  double radius = 1.0;
};

//! Support covering all of R^d; no boundary correction applies.
struct Unbounded {};

using SupportRegion = std::variant<Box, BallRegion, Unbounded>;

//! Dimension of the support, or -1 for Unbounded (any dimension).
int support_dim(const SupportRegion& support);
bool support_contains(const SupportRegion& support,
                      const Eigen::Ref<const Vector>& x);

//! Volume of the unit d-ball, pi^(d/2) / Gamma(d/2 + 1).
double unit_ball_volume(int d);

//! Volume of B(x, r): unit_ball_volume(d) * r^d. Requires r >= 0.
double ball_volume(int d, double r);

//! Volume of the cap {u in B(0, radius) : u_1 >= h} for h in [-radius, radius].
//! Exact in every dimension via the regularized incomplete Beta function.
double spherical_cap_volume(int d, double radius, double h);

//! Volume of B(x, r) ∩ support. Exact for Unbounded supports, ball supports
//! (two spherical caps) and boxes with d <= 2; boxes with d >= 3 use a
//! deterministic low-discrepancy quadrature with relative error <= 1e-3.
//! Requires r > 0.
double clipped_ball_volume(const SupportRegion& support,
                           const Eigen::Ref<const Vector>& x, double r);

//! Low-discrepancy (Halton) estimate of vol(B(x, r) ∩ box). This is the
//! route clipped_ball_volume takes for boxes with d >= 3; exposed so the
//! exact low-dimensional answers can cross-check it.
double qmc_box_ball_volume(const Box& box, const Eigen::Ref<const Vector>& x,
                           double r);

//! Exact area of the disk B((cx, cy), r) ∩ box in the plane.
double disk_box_area(double cx, double cy, double r, const Box& box);

}  // namespace knde
