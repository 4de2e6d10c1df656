#pragma once

#include "knde/evaluation.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace knde {

//! k ~ c * n^(2/(d+2)), the rate that optimizes both error norms on bounded
//! supports; clamped into [2, n-1].
Index select_k_bounded(Index n, int d, double c);

//! k ~ c * n^(4/(d+4)), the sup-norm rate for unbounded supports.
Index select_k_linf_unbounded(Index n, int d, double c);

struct TailParams {
  Index k = 2;
  double a = 1.0;
};

//! Truncated-estimator parameters: with beta' = min(beta, 1/2),
//! k ~ c_k * n^(2 beta' / (d beta'^2 + 1)) and
//! a ~ c_a * n^(-beta'^2 / (d beta'^2 + 1)).
TailParams select_params_tail(Index n, int d, double beta, double c_k,
                              double c_a);

//! Negated least-squares slope of ln(err) against ln(n); 0.33 means the
//! error decays like n^(-0.33). Requires >= 3 points, all positive.
double fit_slope(const std::vector<std::pair<double, double>>& series);

enum class KRule { Bounded, LinfUnbounded, Tail };

KRule k_rule_from_string(const std::string& id);
std::string to_string(KRule rule);

enum class EstimatorKind { Plain, Boundary, Truncated };

EstimatorKind estimator_kind_from_string(const std::string& id);
std::string to_string(EstimatorKind kind);

struct ConvergencePoint {
  Index n = 0;
  Index k = 0;
  double a = 0.0;  // 0 when the estimator has no truncation radius
  double mean_l1 = 0.0;
  double mean_linf = 0.0;
};

//! Error-vs-n series with fitted and theoretical exponents.
struct ConvergenceReport {
  std::string dist_id;
  int dim = 1;
  std::string estimator;  // "knn" | "knn-bc" | "knn-trunc"
  Index trials = 0;
  std::uint64_t base_seed = 0;
  std::string rule_descriptor;  // e.g. "bounded, c=1"
  std::vector<ConvergencePoint> series;
  double slope_l1 = 0.0;
  double slope_linf = 0.0;
  double theory_l1 = 0.0;
  double theory_linf = 0.0;
};

//! Theoretical exponents attached to reports; never used in measurement.
double theory_l1_exponent(const Distribution& dist);
double theory_linf_exponent(const Distribution& dist);

//! Runs run_trials at every n in n_list (strictly increasing, >= 3 entries)
//! with k (and a) chosen by the rule, then fits both slopes. The n-th entry
//! uses base seed base_seed + n_index * 1000003 so the fan-out order is
//! irrelevant.
ConvergenceReport convergence_experiment(
    const Distribution& dist, EstimatorKind kind, KRule rule,
    const std::vector<Index>& n_list, Index trials, const EvaluationGrid& grid,
    std::uint64_t base_seed, double c_k = 1.0, double c_a = 1.0,
    int threads = 0);

struct RatioPoint {
  Index n = 0;
  double l1_knn = 0.0;
  double l1_kde = 0.0;
  double ratio = 0.0;
  Index best_k = 0;   // tuned truncated-kNN neighbor count
  double best_a = 0.0;
  double best_h = 0.0;  // tuned KDE bandwidth
};

struct RatioReport {
  std::string dist_id;
  int dim = 1;
  Index trials = 0;
  std::uint64_t base_seed = 0;
  std::string tuning;  // descriptor of the searched grids
  std::vector<RatioPoint> series;
};

//! Candidate generator: the estimator configurations searched at a given n.
using CandidateFactory = std::function<std::vector<EstimatorSpec>(Index n)>;

//! Generic tuned comparison: for each n both factories' candidates are
//! evaluated on the same trial samples (one index per trial), each method
//! keeps its minimum trial-averaged l1, and the report records the ratio
//! method_a / method_b.
RatioReport tuned_ratio_experiment(const Distribution& dist,
                                   const CandidateFactory& method_a,
                                   const CandidateFactory& method_b,
                                   const std::vector<Index>& n_list,
                                   Index trials, const EvaluationGrid& grid,
                                   std::uint64_t base_seed, int threads = 0);

//! The truncated-kNN vs KDE study: k over kTuningGridSize log-spaced values
//! in [4, n/2] (a fixed by the tail rule), h over kTuningGridSize log-spaced
//! values in [1/n, 1]. Requires dist.tail_beta().
RatioReport compare_knn_kde(const Distribution& dist,
                            const std::vector<Index>& n_list, Index trials,
                            const EvaluationGrid& grid,
                            std::uint64_t base_seed, int threads = 0);

inline constexpr int kTuningGridSize = 12;

//! Log-spaced integer ladder used for k tuning; deduplicated, ascending.
std::vector<Index> log_spaced_ints(int count, Index lo, Index hi);
std::vector<double> log_spaced(int count, double lo, double hi);

}  // namespace knde
