#pragma once

#include "knde/geometry.hpp"
#include "knde/spatial.hpp"
#include "knde/types.hpp"

#include <string>
#include <variant>

namespace knde {

//! Compactly supported kernels on the unit ball, each integrating to one.
enum class KernelId { Box, Epanechnikov };

KernelId kernel_from_string(const std::string& id);
std::string to_string(KernelId id);

struct KnnPlain {
  Index k = 2;
};

struct KnnBoundary {
  Index k = 2;
  SupportRegion support;
};

struct KnnTruncated {
  Index k = 2;
  double a = 1.0;
};

struct Kde {
  double h = 1.0;
  KernelId kernel = KernelId::Epanechnikov;
};

using EstimatorSpec = std::variant<KnnPlain, KnnBoundary, KnnTruncated, Kde>;

//! "knn", "knn-bc", "knn-trunc" or "kde".
std::string estimator_name(const EstimatorSpec& spec);

//! (k-1) / (n * ball_volume(d, rho)); the value both kNN branches share once
//! the k-th neighbor distance rho is known. Throws DegenerateSampleError on
//! rho == 0.
double knn_density_from_rho(Index n, int d, Index k, double rho);

//! Plain kNN density estimate at x. Requires 2 <= k <= n.
double knn_estimate(const KdTree& index, Index k,
                    const Eigen::Ref<const Vector>& x);

//! Boundary-corrected estimate: ball volume replaced by its intersection
//! with the known support. Dominates the plain estimate pointwise on S.
double bc_knn_estimate(const KdTree& index, Index k,
                       const SupportRegion& support,
                       const Eigen::Ref<const Vector>& x);

//! Truncated estimate: falls back to the fixed-radius count
//! n(x, a) / (n * ball_volume(d, a)) once the k-th neighbor is farther
//! than a. May be zero, never negative or infinite.
double trunc_knn_estimate(const KdTree& index, Index k, double a,
                          const Eigen::Ref<const Vector>& x);

//! Compact-kernel density estimate; evaluated through a radius query.
double kde_estimate(const KdTree& index, double h, KernelId kernel,
                    const Eigen::Ref<const Vector>& x);

//! Dispatch on the spec variant.
double estimate(const EstimatorSpec& spec, const KdTree& index,
                const Eigen::Ref<const Vector>& x);

}  // namespace knde
