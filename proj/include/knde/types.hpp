#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace knde {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;

//! One sample per row; row-major so a point is contiguous in memory.
using PointMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

//! i.i.d. draws from one distribution plus the provenance that produced them.
struct SampleSet {
  PointMatrix points;  // n x d
  std::uint64_t seed = 0;
  std::string dist_id;

  Index n() const { return points.rows(); }
  int dim() const { return static_cast<int>(points.cols()); }
};

//! Thrown when an estimate is requested at a point coinciding with >= k
//! samples (the k-th neighbor distance is zero).
class DegenerateSampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! Shared arithmetic path for every distance comparison in the library.
//! Index queries and brute-force oracles must both go through this.
inline double squared_distance(const PointMatrix& pts, Index i,
                               const Eigen::Ref<const Vector>& x) {
  return (pts.row(i).transpose() - x).squaredNorm();
}

}  // namespace knde
