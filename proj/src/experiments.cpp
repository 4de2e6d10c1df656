#include "knde/experiments.hpp"

#include "knde/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace knde {

namespace {

constexpr std::uint64_t kSeedStride = 1000003;  // > any realistic trial count

Index clamp_k(double raw, Index n) {
  Index k = static_cast<Index>(std::llround(raw));
  k = std::max<Index>(k, 2);
  k = std::min<Index>(k, n - 1);
  return k;
}

double kahan_mean(const std::vector<double>& values) {
  double sum = 0.0, carry = 0.0;
  for (double v : values) {
    double y = v - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(values.size());
}

}  // namespace

Index select_k_bounded(Index n, int d, double c) {
  if (n < 4) throw std::invalid_argument("n must be >= 4");
  if (c <= 0.0) throw std::invalid_argument("multiplier c must be > 0");
  return clamp_k(c * std::pow(static_cast<double>(n), 2.0 / (d + 2)), n);
}

Index select_k_linf_unbounded(Index n, int d, double c) {
  if (n < 4) throw std::invalid_argument("n must be >= 4");
  if (c <= 0.0) throw std::invalid_argument("multiplier c must be > 0");
  return clamp_k(c * std::pow(static_cast<double>(n), 4.0 / (d + 4)), n);
}

TailParams select_params_tail(Index n, int d, double beta, double c_k,
                              double c_a) {
  if (n < 4) throw std::invalid_argument("n must be >= 4");
  if (!(beta > 0.0 && beta <= 1.0))
    throw std::invalid_argument("tail exponent beta must lie in (0, 1]");
  if (c_k <= 0.0 || c_a <= 0.0)
    throw std::invalid_argument("multipliers must be > 0");
  double bp = std::min(beta, 0.5);
  double denom = d * bp * bp + 1.0;
  double nk = std::pow(static_cast<double>(n), 2.0 * bp / denom);
  double na = std::pow(static_cast<double>(n), -bp * bp / denom);
  return TailParams{clamp_k(c_k * nk, n), c_a * na};
}

double fit_slope(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 3)
    throw std::invalid_argument("slope fit needs at least 3 points");
  const Index m = static_cast<Index>(series.size());
  Vector xs(m), ys(m);
  for (Index i = 0; i < m; ++i) {
    auto [n, err] = series[static_cast<std::size_t>(i)];
    if (!(n > 0.0) || !(err > 0.0))
      throw std::invalid_argument("slope fit requires positive n and err");
    xs(i) = std::log(n);
    ys(i) = std::log(err);
  }
  Vector xc = xs.array() - xs.mean();
  Vector yc = ys.array() - ys.mean();
  double den = xc.squaredNorm();
  if (den == 0.0) throw std::invalid_argument("slope fit needs distinct n");
  return -(xc.dot(yc) / den);
}

KRule k_rule_from_string(const std::string& id) {
  if (id == "bounded") return KRule::Bounded;
  if (id == "linf-unbounded") return KRule::LinfUnbounded;
  if (id == "tail") return KRule::Tail;
  throw std::invalid_argument("unknown k rule '" + id + "'");
}

std::string to_string(KRule rule) {
  switch (rule) {
    case KRule::Bounded: return "bounded";
    case KRule::LinfUnbounded: return "linf-unbounded";
    case KRule::Tail: return "tail";
  }
  throw std::logic_error("unreachable k rule");
}

EstimatorKind estimator_kind_from_string(const std::string& id) {
  if (id == "knn") return EstimatorKind::Plain;
  if (id == "knn-bc") return EstimatorKind::Boundary;
  if (id == "knn-trunc") return EstimatorKind::Truncated;
  throw std::invalid_argument("unknown convergence estimator '" + id + "'");
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Plain: return "knn";
    case EstimatorKind::Boundary: return "knn-bc";
    case EstimatorKind::Truncated: return "knn-trunc";
  }
  throw std::logic_error("unreachable estimator kind");
}

double theory_l1_exponent(const Distribution& dist) {
  const int d = dist.dim();
  if (dist.has_bounded_support()) return 1.0 / (d + 2);
  double beta = dist.tail_beta().value_or(1.0);
  return std::min(beta / (d * beta * beta + 1.0), 2.0 / (d + 4));
}

double theory_linf_exponent(const Distribution& dist) {
  const int d = dist.dim();
  if (dist.has_bounded_support()) return 1.0 / (d + 2);
  // Unbounded supports: the sup-norm bound balances k/N (d <= 2) or
  // (k/N)^(2/d) (d > 2) against k^(-1/2).
  return d <= 2 ? 1.0 / 3.0 : 2.0 / (d + 4);
}

ConvergenceReport convergence_experiment(
    const Distribution& dist, EstimatorKind kind, KRule rule,
    const std::vector<Index>& n_list, Index trials, const EvaluationGrid& grid,
    std::uint64_t base_seed, double c_k, double c_a, int threads) {
  if (n_list.size() < 3)
    throw std::invalid_argument("n_list needs at least 3 entries");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw std::invalid_argument("n_list must be strictly increasing");
  if (kind == EstimatorKind::Truncated && rule != KRule::Tail)
    throw std::invalid_argument("truncated estimator requires the tail rule");
  if (rule == KRule::Tail && kind != EstimatorKind::Truncated)
    throw std::invalid_argument("tail rule requires the truncated estimator");

  ConvergenceReport report;
  report.dist_id = dist.name();
  report.dim = dist.dim();
  report.estimator = to_string(kind);
  report.trials = trials;
  report.base_seed = base_seed;
  report.rule_descriptor = to_string(rule) + ", c=" + std::to_string(c_k);
  report.theory_l1 = theory_l1_exponent(dist);
  report.theory_linf = theory_linf_exponent(dist);

  for (std::size_t idx = 0; idx < n_list.size(); ++idx) {
    Index n = n_list[idx];
    ConvergencePoint point;
    point.n = n;
    EstimatorSpec spec;
    if (kind == EstimatorKind::Truncated) {
      auto beta = dist.tail_beta();
      if (!beta)
        throw std::invalid_argument(
            "truncated estimator requires a distribution with tail_beta");
      TailParams p = select_params_tail(n, dist.dim(), *beta, c_k, c_a);
      point.k = p.k;
      point.a = p.a;
      spec = KnnTruncated{p.k, p.a};
    } else {
      Index k = rule == KRule::Bounded
                    ? select_k_bounded(n, dist.dim(), c_k)
                    : select_k_linf_unbounded(n, dist.dim(), c_k);
      point.k = k;
      if (kind == EstimatorKind::Boundary)
        spec = KnnBoundary{k, dist.support()};
      else
        spec = KnnPlain{k};
    }
    std::uint64_t seed = base_seed + static_cast<std::uint64_t>(idx) * kSeedStride;
    ErrorReport r = run_trials(spec, dist, n, grid, trials, seed, threads);
    point.mean_l1 = r.l1;
    point.mean_linf = r.linf;
    report.series.push_back(point);
  }

  std::vector<std::pair<double, double>> l1s, linfs;
  for (const auto& p : report.series) {
    l1s.emplace_back(static_cast<double>(p.n), p.mean_l1);
    linfs.emplace_back(static_cast<double>(p.n), p.mean_linf);
  }
  report.slope_l1 = fit_slope(l1s);
  report.slope_linf = fit_slope(linfs);
  return report;
}

std::vector<double> log_spaced(int count, double lo, double hi) {
  if (count < 1 || !(lo > 0.0) || !(hi >= lo))
    throw std::invalid_argument("log_spaced needs count >= 1, 0 < lo <= hi");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    out.push_back(lo);
    return out;
  }
  double ratio = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) out.push_back(lo * std::exp(ratio * i));
  return out;
}

std::vector<Index> log_spaced_ints(int count, Index lo, Index hi) {
  std::vector<double> raw =
      log_spaced(count, static_cast<double>(lo), static_cast<double>(hi));
  std::vector<Index> out;
  for (double v : raw) {
    Index k = static_cast<Index>(std::llround(v));
    k = std::clamp<Index>(k, lo, hi);
    if (out.empty() || out.back() != k) out.push_back(k);
  }
  return out;
}

RatioReport tuned_ratio_experiment(const Distribution& dist,
                                   const CandidateFactory& method_a,
                                   const CandidateFactory& method_b,
                                   const std::vector<Index>& n_list,
                                   Index trials, const EvaluationGrid& grid,
                                   std::uint64_t base_seed, int threads) {
  if (n_list.empty()) throw std::invalid_argument("n_list must be nonempty");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");

  RatioReport report;
  report.dist_id = dist.name();
  report.dim = dist.dim();
  report.trials = trials;
  report.base_seed = base_seed;

  for (std::size_t idx = 0; idx < n_list.size(); ++idx) {
    Index n = n_list[idx];
    std::vector<EstimatorSpec> cands = method_a(n);
    std::vector<EstimatorSpec> cands_b = method_b(n);
    const std::size_t na = cands.size();
    cands.insert(cands.end(), cands_b.begin(), cands_b.end());
    if (na == 0 || cands.size() == na)
      throw std::invalid_argument("both methods need at least one candidate");

    std::uint64_t seed = base_seed + static_cast<std::uint64_t>(idx) * kSeedStride;

    // One sample set and one index per trial serve every candidate; the
    // per-candidate means then match run_trials on that candidate exactly.
    std::vector<std::vector<double>> l1(cands.size(),
                                        std::vector<double>(trials));
    parallel_for(trials, threads, [&](Index t) {
      SampleSet samples = dist.sample(n, seed + static_cast<std::uint64_t>(t));
      KdTree index(samples);
      for (std::size_t c = 0; c < cands.size(); ++c)
        l1[c][static_cast<std::size_t>(t)] =
            eval_errors_with_index(cands[c], index, dist, grid).l1;
    });

    auto best_of = [&](std::size_t begin, std::size_t end) {
      std::size_t best = begin;
      double best_l1 = kahan_mean(l1[begin]);
      for (std::size_t c = begin + 1; c < end; ++c) {
        double m = kahan_mean(l1[c]);
        if (m < best_l1) {
          best_l1 = m;
          best = c;
        }
      }
      return std::make_pair(best, best_l1);
    };
    auto [ia, la] = best_of(0, na);
    auto [ib, lb] = best_of(na, cands.size());

    RatioPoint point;
    point.n = n;
    point.l1_knn = la;
    point.l1_kde = lb;
    point.ratio = la / lb;
    if (const auto* t = std::get_if<KnnTruncated>(&cands[ia])) {
      point.best_k = t->k;
      point.best_a = t->a;
    }
    if (const auto* kd = std::get_if<Kde>(&cands[ib])) point.best_h = kd->h;
    report.series.push_back(point);
  }
  return report;
}

RatioReport compare_knn_kde(const Distribution& dist,
                            const std::vector<Index>& n_list, Index trials,
                            const EvaluationGrid& grid,
                            std::uint64_t base_seed, int threads) {
  auto beta = dist.tail_beta();
  if (!beta)
    throw std::invalid_argument(
        "compare requires a distribution with tail_beta set");
  const int d = dist.dim();

  CandidateFactory knn = [d, b = *beta](Index n) {
    double a = select_params_tail(n, d, b, 1.0, 1.0).a;
    std::vector<EstimatorSpec> specs;
    for (Index k : log_spaced_ints(kTuningGridSize, 4, n / 2))
      specs.push_back(KnnTruncated{k, a});
    return specs;
  };
  CandidateFactory kde = [](Index n) {
    std::vector<EstimatorSpec> specs;
    for (double h :
         log_spaced(kTuningGridSize, 1.0 / static_cast<double>(n), 1.0))
      specs.push_back(Kde{h, KernelId::Epanechnikov});
    return specs;
  };

  RatioReport report = tuned_ratio_experiment(dist, knn, kde, n_list, trials,
                                              grid, base_seed, threads);
  report.tuning = "k: 12 log-spaced in [4, n/2]; h: 12 log-spaced in [1/n, 1]";
  return report;
}

}  // namespace knde
