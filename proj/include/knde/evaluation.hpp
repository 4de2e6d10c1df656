#pragma once

#include "knde/distributions.hpp"
#include "knde/estimators.hpp"
#include "knde/geometry.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace knde {

//! Uniform lattice over an axis-aligned region. Points are the Cartesian
//! product of per-axis progressions lo, lo+step, ..., <= hi, enumerated
//! row-major (axis 0 slowest), and are materialized lazily.
class EvaluationGrid {
 public:
  EvaluationGrid(Box region, double step);

  //! Coarse grid with roughly `total` points spread evenly per axis.
  static EvaluationGrid with_total_points(Box region, Index total);

  Index size() const { return total_; }
  int dim() const { return region_.dim(); }
  const Box& region() const { return region_; }
  const std::vector<Index>& axis_counts() const { return counts_; }
  double axis_value(int axis, Index j) const {
    // Clamp so rounding in lo + j*step never pushes the last lattice point
    // past the region (and off a bounded support).
    return std::min(region_.lo(axis) + static_cast<double>(j) * steps_[axis],
                    region_.hi(axis));
  }
  Vector point(Index i) const;

 private:
  EvaluationGrid(Box region, std::vector<Index> counts,
                 std::vector<double> steps);

  Box region_;
  std::vector<Index> counts_;
  std::vector<double> steps_;
  Index total_ = 0;
};

struct TrialError {
  double l1 = 0.0;
  double linf = 0.0;
};

//! Per-trial and trial-averaged errors of one (distribution, estimator, n).
struct ErrorReport {
  std::string dist_id;
  int dim = 1;
  EstimatorSpec estimator;
  Index n = 0;
  Index trials = 0;
  std::uint64_t base_seed = 0;
  std::vector<TrialError> per_trial;
  double l1 = 0.0;    // mean of per_trial l1
  double linf = 0.0;  // mean of per_trial linf
};

//! Grid protocol core: l1 = mean(|fhat - truth|) * volume(region), linf =
//! max(|fhat - truth|). Compensated summation keeps the mean stable to the
//! point order. Exposed with callables so stubs can stand in for estimators.
TrialError grid_errors(const std::function<double(const Vector&)>& fhat,
                       const std::function<double(const Vector&)>& truth,
                       const EvaluationGrid& grid);

//! One-trial errors of an estimator configured by `spec` against the true
//! pdf, on an index built once for the whole grid.
TrialError eval_errors(const EstimatorSpec& spec, const SampleSet& samples,
                       const Distribution& dist, const EvaluationGrid& grid);

//! Same, reusing a caller-owned index over samples.points (the index must
//! have been built from exactly those points).
TrialError eval_errors_with_index(const EstimatorSpec& spec,
                                  const KdTree& index,
                                  const Distribution& dist,
                                  const EvaluationGrid& grid);

//! Runs `trials` independent trials; trial t draws samples with seed
//! base_seed + t. Reported l1/linf are the per-trial means; the result is
//! bit-identical however many threads execute it.
ErrorReport run_trials(const EstimatorSpec& spec, const Distribution& dist,
                       Index n, const EvaluationGrid& grid, Index trials,
                       std::uint64_t base_seed, int threads = 0);

}  // namespace knde
