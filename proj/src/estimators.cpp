#include "knde/estimators.hpp"

#include <cmath>
#include <sstream>

namespace knde {

namespace {

void check_k(Index k, Index n) {
  if (k < 2) throw std::invalid_argument("kNN estimators require k >= 2");
  if (k > n) throw std::invalid_argument("k must not exceed the sample count");
}

}  // namespace

KernelId kernel_from_string(const std::string& id) {
  if (id == "box") return KernelId::Box;
  if (id == "epanechnikov") return KernelId::Epanechnikov;
  throw std::invalid_argument("unknown kernel id '" + id + "'");
}

std::string to_string(KernelId id) {
  return id == KernelId::Box ? "box" : "epanechnikov";
}

std::string estimator_name(const EstimatorSpec& spec) {
  switch (spec.index()) {
    case 0: return "knn";
    case 1: return "knn-bc";
    case 2: return "knn-trunc";
    default: return "kde";
  }
}

double knn_density_from_rho(Index n, int d, Index k, double rho) {
  if (rho == 0.0) {
    std::ostringstream msg;
    msg << "degenerate estimate: " << k
        << " or more samples coincide with the query point";
    throw DegenerateSampleError(msg.str());
  }
  return static_cast<double>(k - 1) /
         (static_cast<double>(n) * ball_volume(d, rho));
}

double knn_estimate(const KdTree& index, Index k,
                    const Eigen::Ref<const Vector>& x) {
  check_k(k, index.size());
  double rho = index.kth_distance(x, k);
  return knn_density_from_rho(index.size(), index.dim(), k, rho);
}

double bc_knn_estimate(const KdTree& index, Index k,
                       const SupportRegion& support,
                       const Eigen::Ref<const Vector>& x) {
  check_k(k, index.size());
  double rho = index.kth_distance(x, k);
  if (rho == 0.0) return knn_density_from_rho(index.size(), index.dim(), k, rho);
  double vs = clipped_ball_volume(support, x, rho);
  if (vs <= 0.0)
    throw std::logic_error(
        "clipped ball volume vanished; query point lies outside the support");
  return static_cast<double>(k - 1) / (static_cast<double>(index.size()) * vs);
}

double trunc_knn_estimate(const KdTree& index, Index k, double a,
                          const Eigen::Ref<const Vector>& x) {
  check_k(k, index.size());
  if (a <= 0.0) throw std::invalid_argument("truncation radius a must be > 0");
  double rho = index.kth_distance(x, k);
  if (rho <= a)
    return knn_density_from_rho(index.size(), index.dim(), k, rho);
  Index count = index.range_count(x, a);
  return static_cast<double>(count) /
         (static_cast<double>(index.size()) * ball_volume(index.dim(), a));
}

double kde_estimate(const KdTree& index, double h, KernelId kernel,
                    const Eigen::Ref<const Vector>& x) {
  if (h <= 0.0) throw std::invalid_argument("bandwidth h must be > 0");
  const int d = index.dim();
  const double h2 = h * h;
  double acc = 0.0;
  if (kernel == KernelId::Box) {
    index.for_each_within(x, h, [&](double) { acc += 1.0; });
    acc /= unit_ball_volume(d);
  } else {
    // Epanechnikov on the unit ball: (d+2)/(2 v_d) * (1 - |u|^2)+.
    index.for_each_within(x, h, [&](double sq) { acc += 1.0 - sq / h2; });
    acc *= (d + 2) / (2.0 * unit_ball_volume(d));
  }
  return acc / (static_cast<double>(index.size()) * std::pow(h, d));
}

double estimate(const EstimatorSpec& spec, const KdTree& index,
                const Eigen::Ref<const Vector>& x) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, KnnPlain>)
          return knn_estimate(index, s.k, x);
        else if constexpr (std::is_same_v<T, KnnBoundary>)
          return bc_knn_estimate(index, s.k, s.support, x);
        else if constexpr (std::is_same_v<T, KnnTruncated>)
          return trunc_knn_estimate(index, s.k, s.a, x);
        else
          return kde_estimate(index, s.h, s.kernel, x);
      },
      spec);
}

}  // namespace knde
