#include "knde/evaluation.hpp"

#include "knde/parallel.hpp"

#include <cmath>
#include <sstream>

namespace knde {

namespace {

//! Kahan-compensated accumulator; makes grid means order-stable to 1e-12.
class CompensatedSum {
 public:
  void add(double v) {
    double y = v - carry_;
    double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

std::string point_to_string(const Vector& x) {
  std::ostringstream os;
  os << "(";
  for (Index j = 0; j < x.size(); ++j) {
    if (j) os << ", ";
    os << x(j);
  }
  os << ")";
  return os.str();
}

//! d == 1 fast path for the kNN-family estimators: one ascending sweep
//! computes every grid point's k-th neighbor distance, then each estimate
//! is formed from rho exactly as the per-point operations would.
TrialError knn_grid_errors_1d(const EstimatorSpec& spec, const KdTree& index,
                              const Distribution& dist,
                              const EvaluationGrid& grid) {
  const Index n = index.size();
  const Index g = grid.size();
  std::vector<double> xs(static_cast<std::size_t>(g));
  for (Index i = 0; i < g; ++i) xs[static_cast<std::size_t>(i)] = grid.axis_value(0, i);

  Index k = 0;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (!std::is_same_v<T, Kde>) k = s.k;
      },
      spec);
  if (k < 2) throw std::invalid_argument("kNN estimators require k >= 2");
  if (k > n) throw std::invalid_argument("k must not exceed the sample count");
  std::vector<double> rho = index.kth_distances_ascending(xs, k);

  CompensatedSum sum;
  double worst = 0.0;
  Vector x(1);
  for (Index i = 0; i < g; ++i) {
    x(0) = xs[static_cast<std::size_t>(i)];
    double r = rho[static_cast<std::size_t>(i)];
    double fhat = 0.0;
    try {
      if (const auto* t = std::get_if<KnnTruncated>(&spec)) {
        if (r <= t->a) {
          fhat = knn_density_from_rho(n, 1, k, r);
        } else {
          Index count = index.range_count(x, t->a);
          fhat = static_cast<double>(count) /
                 (static_cast<double>(n) * ball_volume(1, t->a));
        }
      } else if (const auto* b = std::get_if<KnnBoundary>(&spec)) {
        if (r == 0.0) knn_density_from_rho(n, 1, k, r);  // throws
        double vs = clipped_ball_volume(b->support, x, r);
        if (vs <= 0.0)
          throw std::logic_error(
              "clipped ball volume vanished; query point lies outside the "
              "support");
        fhat = static_cast<double>(k - 1) / (static_cast<double>(n) * vs);
      } else {
        fhat = knn_density_from_rho(n, 1, k, r);
      }
    } catch (const DegenerateSampleError& e) {
      throw DegenerateSampleError(std::string(e.what()) + " at grid point " +
                                  point_to_string(x));
    }
    double diff = std::abs(fhat - dist.pdf(x));
    sum.add(diff);
    worst = std::max(worst, diff);
  }
  return TrialError{sum.value() / static_cast<double>(g) *
                        grid.region().volume(),
                    worst};
}

}  // namespace

EvaluationGrid::EvaluationGrid(Box region, std::vector<Index> counts,
                               std::vector<double> steps)
    : region_(std::move(region)),
      counts_(std::move(counts)),
      steps_(std::move(steps)) {
  total_ = 1;
  for (Index c : counts_) total_ *= c;
}

EvaluationGrid::EvaluationGrid(Box region, double step)
    : region_(region) {
  if (step <= 0.0) throw std::invalid_argument("grid step must be > 0");
  const int d = region.dim();
  counts_.resize(d);
  steps_.assign(d, step);
  total_ = 1;
  for (int j = 0; j < d; ++j) {
    double side = region.hi(j) - region.lo(j);
    if (step > side)
      throw std::invalid_argument("grid step exceeds a region side");
    counts_[j] =
        static_cast<Index>(std::floor(side / step * (1.0 + 1e-12) + 1e-12)) + 1;
    total_ *= counts_[j];
  }
}

EvaluationGrid EvaluationGrid::with_total_points(Box region, Index total) {
  if (total < 1) throw std::invalid_argument("grid needs at least one point");
  const int d = region.dim();
  Index per_axis = std::max<Index>(
      2, static_cast<Index>(std::llround(std::pow(
             static_cast<double>(total), 1.0 / static_cast<double>(d)))));
  std::vector<Index> counts(d, per_axis);
  std::vector<double> steps(d);
  for (int j = 0; j < d; ++j)
    steps[j] = (region.hi(j) - region.lo(j)) /
               static_cast<double>(per_axis - 1);
  return EvaluationGrid(std::move(region), std::move(counts),
                        std::move(steps));
}

Vector EvaluationGrid::point(Index i) const {
  const int d = dim();
  Vector x(d);
  for (int j = d - 1; j >= 0; --j) {
    Index c = counts_[j];
    x(j) = axis_value(j, i % c);
    i /= c;
  }
  return x;
}

TrialError grid_errors(const std::function<double(const Vector&)>& fhat,
                       const std::function<double(const Vector&)>& truth,
                       const EvaluationGrid& grid) {
  CompensatedSum sum;
  double worst = 0.0;
  const Index g = grid.size();
  for (Index i = 0; i < g; ++i) {
    Vector x = grid.point(i);
    double diff = std::abs(fhat(x) - truth(x));
    sum.add(diff);
    worst = std::max(worst, diff);
  }
  return TrialError{sum.value() / static_cast<double>(g) *
                        grid.region().volume(),
                    worst};
}

TrialError eval_errors_with_index(const EstimatorSpec& spec,
                                  const KdTree& index,
                                  const Distribution& dist,
                                  const EvaluationGrid& grid) {
  if (grid.dim() != dist.dim() || index.dim() != dist.dim())
    throw std::invalid_argument(
        "grid, sample and distribution dimensions must agree");

  if (grid.dim() == 1 && !std::holds_alternative<Kde>(spec))
    return knn_grid_errors_1d(spec, index, dist, grid);

  return grid_errors(
      [&](const Vector& x) {
        try {
          return estimate(spec, index, x);
        } catch (const DegenerateSampleError& e) {
          throw DegenerateSampleError(std::string(e.what()) +
                                      " at grid point " + point_to_string(x));
        }
      },
      [&](const Vector& x) { return dist.pdf(x); }, grid);
}

TrialError eval_errors(const EstimatorSpec& spec, const SampleSet& samples,
                       const Distribution& dist, const EvaluationGrid& grid) {
  if (samples.dim() != dist.dim())
    throw std::invalid_argument(
        "grid, sample and distribution dimensions must agree");
  KdTree index(samples);
  return eval_errors_with_index(spec, index, dist, grid);
}

ErrorReport run_trials(const EstimatorSpec& spec, const Distribution& dist,
                       Index n, const EvaluationGrid& grid, Index trials,
                       std::uint64_t base_seed, int threads) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");

  std::vector<TrialError> results(static_cast<std::size_t>(trials));
  parallel_for(trials, threads, [&](Index t) {
    std::uint64_t seed = base_seed + static_cast<std::uint64_t>(t);
    try {
      SampleSet samples = dist.sample(n, seed);
      results[static_cast<std::size_t>(t)] =
          eval_errors(spec, samples, dist, grid);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "trial " << t << " (seed " << seed << ") failed: " << e.what();
      throw std::runtime_error(msg.str());
    }
  });

  CompensatedSum l1sum, linfsum;
  for (const TrialError& r : results) {
    l1sum.add(r.l1);
    linfsum.add(r.linf);
  }
  ErrorReport report;
  report.dist_id = dist.name();
  report.dim = dist.dim();
  report.estimator = spec;
  report.n = n;
  report.trials = trials;
  report.base_seed = base_seed;
  report.per_trial = std::move(results);
  report.l1 = l1sum.value() / static_cast<double>(trials);
  report.linf = linfsum.value() / static_cast<double>(trials);
  return report;
}

}  // namespace knde
