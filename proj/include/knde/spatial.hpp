#pragma once

#include "knde/types.hpp"

#include <functional>
#include <vector>

namespace knde {

//! Exact spatial index over an immutable point set.
//!
//! Nearest-neighbor and radius queries return the same results as a linear
//! scan: pruning is conservative and every comparison runs on squared
//! Euclidean distances through the shared squared_distance() path, so there
//! is no approximation and no floating-point divergence from the oracle.
//! For d == 1 the index is a sorted backbone with binary-search queries;
//! for d >= 2 it is a bounding-box k-d tree. Queries never mutate the index.
class KdTree {
 public:
  explicit KdTree(PointMatrix points);
  explicit KdTree(const SampleSet& samples) : KdTree(samples.points) {}

  Index size() const { return pts_.rows(); }
  int dim() const { return static_cast<int>(pts_.cols()); }
  const PointMatrix& points() const { return pts_; }

  //! Distance from x to its k-th nearest sample, counting multiplicity.
  //! Requires 1 <= k <= size().
  double kth_distance(const Eigen::Ref<const Vector>& x, Index k) const;

  //! Number of samples in the closed ball B(x, radius). Requires radius >= 0.
  Index range_count(const Eigen::Ref<const Vector>& x, double radius) const;

  //! Calls visit(squared_distance) for every sample in the closed ball
  //! B(x, radius), in a deterministic traversal order.
  void for_each_within(const Eigen::Ref<const Vector>& x, double radius,
                       const std::function<void(double)>& visit) const;

  //! k-th neighbor distances for a batch of d == 1 queries sorted ascending.
  //! Equivalent to calling kth_distance per query but amortizes the sweep to
  //! O(n + queries) via a sliding window over the sorted backbone.
  std::vector<double> kth_distances_ascending(const std::vector<double>& queries,
                                              Index k) const;

 private:
  struct Node {
    Index begin = 0, end = 0;   // point range covered by this node
    Index left = -1, right = -1;
    bool leaf() const { return left < 0; }
  };

  Index build_node(std::vector<Index>& perm, const PointMatrix& src,
                   Index begin, Index end);
  double min_sq_to_node(Index node, const Eigen::Ref<const Vector>& x) const;
  void check_query(const Eigen::Ref<const Vector>& x) const;

  PointMatrix pts_;  // reordered so leaves (or the d==1 backbone) are contiguous
  std::vector<Node> nodes_;
  std::vector<double> box_lo_, box_hi_;  // per node, flat d-strided
};

//! Linear-scan reference queries used to validate the index.
double brute_kth_distance(const PointMatrix& pts,
                          const Eigen::Ref<const Vector>& x, Index k);
Index brute_range_count(const PointMatrix& pts,
                        const Eigen::Ref<const Vector>& x, double radius);

}  // namespace knde
