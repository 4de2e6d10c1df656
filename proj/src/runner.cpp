#include "knde/runner.hpp"

#include "knde/distributions.hpp"
#include "knde/estimators.hpp"
#include "knde/evaluation.hpp"
#include "knde/experiments.hpp"
#include "knde/report_io.hpp"
#include "knde/svg_plot.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace knde {

namespace {

namespace fs = std::filesystem;

Vector parse_point(const RunConfig& cfg, const std::string& key, int dim) {
  std::vector<double> raw = cfg.get_double_list(key);
  if (raw.size() == 1 && dim > 1) raw.assign(dim, raw[0]);  // broadcast
  if (static_cast<int>(raw.size()) != dim)
    throw std::invalid_argument("option '" + key + "' must list " +
                                std::to_string(dim) + " coordinates");
  Vector v(dim);
  for (int j = 0; j < dim; ++j) v(j) = raw[static_cast<std::size_t>(j)];
  return v;
}

Distribution make_distribution(const RunConfig& cfg) {
  DistId id = dist_id_from_string(cfg.get("dist"));
  int dim = static_cast<int>(cfg.get_int_or("dim", 1));
  if (dim < 1) throw std::invalid_argument("option 'dim' must be >= 1");
  return Distribution(id, dim);
}

SupportRegion parse_support(const RunConfig& cfg, int dim) {
  const std::string kind = cfg.get("support");
  if (kind == "box")
    return make_box(parse_point(cfg, "support-lo", dim),
                    parse_point(cfg, "support-hi", dim));
  if (kind == "ball") {
    double r = cfg.get_double("support-radius");
    if (r <= 0.0)
      throw std::invalid_argument("option 'support-radius' must be > 0");
    return BallRegion{parse_point(cfg, "support-center", dim), r};
  }
  if (kind == "unbounded") return Unbounded{};
  throw std::invalid_argument("option 'support' must be box, ball or unbounded");
}

//! Builds the estimator for the estimate/eval commands from explicit
//! parameters. knn-bc demands an explicit support here.
EstimatorSpec parse_estimator(const RunConfig& cfg, const Distribution& dist,
                              Index n) {
  const std::string name = cfg.get("estimator");
  auto get_k = [&]() {
    Index k = cfg.get_int("k");
    if (k < 2) throw std::invalid_argument("option 'k' must be >= 2");
    if (k >= n)
      throw std::invalid_argument("option 'k' must be smaller than n");
    return k;
  };
  if (name == "knn") return KnnPlain{get_k()};
  if (name == "knn-bc")
    return KnnBoundary{get_k(), parse_support(cfg, dist.dim())};
  if (name == "knn-trunc") {
    double a = cfg.get_double("a");
    if (a <= 0.0) throw std::invalid_argument("option 'a' must be > 0");
    return KnnTruncated{get_k(), a};
  }
  if (name == "kde") {
    double h = cfg.get_double("h");
    if (h <= 0.0) throw std::invalid_argument("option 'h' must be > 0");
    return Kde{h, kernel_from_string(cfg.get_or("kernel", "epanechnikov"))};
  }
  throw std::invalid_argument("unknown estimator '" + name + "'");
}

Box parse_region(const RunConfig& cfg, const Distribution& dist) {
  if (cfg.has("region-lo") || cfg.has("region-hi"))
    return make_box(parse_point(cfg, "region-lo", dist.dim()),
                    parse_point(cfg, "region-hi", dist.dim()));
  return dist.effective_region(cfg.get_double_or("region-tol", 1e-4));
}

EvaluationGrid parse_grid(const RunConfig& cfg, const Distribution& dist,
                          double default_step) {
  Box region = parse_region(cfg, dist);
  if (cfg.has("grid-points"))
    return EvaluationGrid::with_total_points(region, cfg.get_int("grid-points"));
  return EvaluationGrid(region, cfg.get_double_or("step", default_step));
}

void write_artifact(const fs::path& dir, const std::string& name,
                    const std::string& content, std::ostream& out) {
  fs::create_directories(dir);
  fs::path path = dir / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  out << "wrote " << path.string() << "\n";
}

int run_estimate(const RunConfig& cfg, std::ostream& out) {
  Distribution dist = make_distribution(cfg);
  Index n = cfg.get_int("n");
  if (n < 1) throw std::invalid_argument("option 'n' must be >= 1");
  EstimatorSpec spec = parse_estimator(cfg, dist, n);
  Vector at = parse_point(cfg, "at", dist.dim());
  SampleSet samples = dist.sample(n, cfg.get_seed_or("seed", 1));
  KdTree index(samples);
  out << format_double(estimate(spec, index, at)) << "\n";
  return 0;
}

int run_eval(const RunConfig& cfg, std::ostream& out) {
  Distribution dist = make_distribution(cfg);
  Index n = cfg.get_int("n");
  if (n < 2) throw std::invalid_argument("option 'n' must be >= 2");
  EstimatorSpec spec = parse_estimator(cfg, dist, n);
  EvaluationGrid grid = parse_grid(cfg, dist, 0.01);
  ErrorReport report = run_trials(
      spec, dist, n, grid, cfg.get_int_or("trials", 100),
      cfg.get_seed_or("seed", 1), static_cast<int>(cfg.get_int_or("threads", 0)));
  fs::path dir = resolve_out_dir(cfg);
  write_artifact(dir, "results.csv", to_csv(report), out);
  write_artifact(dir, "summary.json", summary_json(report), out);
  return 0;
}

std::vector<Index> parse_n_list(const RunConfig& cfg,
                                const std::string& fallback) {
  RunConfig defaults;
  defaults.set("n-list", cfg.get_or("n-list", fallback));
  return defaults.get_index_list("n-list");
}

int run_converge(const RunConfig& cfg, std::ostream& out) {
  Distribution dist = make_distribution(cfg);
  EstimatorKind kind =
      estimator_kind_from_string(cfg.get_or("estimator", "knn"));
  KRule rule = k_rule_from_string(cfg.get_or(
      "rule", kind == EstimatorKind::Truncated ? "tail" : "bounded"));
  if (kind == EstimatorKind::Boundary && !dist.has_bounded_support() &&
      !cfg.has("support"))
    throw std::invalid_argument(
        "estimator knn-bc on an unbounded distribution needs an explicit "
        "'support'");

  std::vector<Index> n_list =
      parse_n_list(cfg, "500,1000,2000,4000,8000,16000");
  EvaluationGrid grid = parse_grid(cfg, dist, 0.01);
  ConvergenceReport report = convergence_experiment(
      dist, kind, rule, n_list, cfg.get_int_or("trials", 100), grid,
      cfg.get_seed_or("seed", 1), cfg.get_double_or("c-k", 1.0),
      cfg.get_double_or("c-a", 1.0),
      static_cast<int>(cfg.get_int_or("threads", 0)));

  fs::path dir = resolve_out_dir(cfg);
  write_artifact(dir, "results.csv", to_csv(report), out);
  write_artifact(dir, "summary.json", summary_json(report), out);
  write_artifact(dir, "plot.svg", render_convergence_svg(report), out);
  out << "slope_l1 " << format_double(report.slope_l1) << " (theory "
      << format_double(report.theory_l1) << ")\n";
  out << "slope_linf " << format_double(report.slope_linf) << " (theory "
      << format_double(report.theory_linf) << ")\n";
  return 0;
}

int run_compare(const RunConfig& cfg, std::ostream& out) {
  Distribution dist = make_distribution(cfg);
  std::vector<Index> n_list = parse_n_list(cfg, "1000,10000,100000");
  RunConfig grid_cfg = cfg;
  if (!cfg.has("region-tol") && !cfg.has("region-lo"))
    grid_cfg.set("region-tol", "1e-3");
  EvaluationGrid grid = parse_grid(grid_cfg, dist, 0.5);
  RatioReport report = compare_knn_kde(
      dist, n_list, cfg.get_int_or("trials", 8), grid,
      cfg.get_seed_or("seed", 1), static_cast<int>(cfg.get_int_or("threads", 0)));

  fs::path dir = resolve_out_dir(cfg);
  write_artifact(dir, "results.csv", to_csv(report), out);
  write_artifact(dir, "summary.json", summary_json(report), out);
  write_artifact(dir, "plot.svg", render_ratio_svg(report), out);
  for (const auto& p : report.series)
    out << "n " << p.n << " ratio " << format_double(p.ratio) << "\n";
  return 0;
}

}  // namespace

std::string resolve_out_dir(const RunConfig& cfg) {
  if (cfg.has("out")) return cfg.get("out");
  if (const char* env = std::getenv("KNDE_OUT"); env && *env) return env;
  return "out";
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "estimate") return run_estimate(cfg, out);
    if (cfg.command == "eval") return run_eval(cfg, out);
    if (cfg.command == "converge") return run_converge(cfg, out);
    if (cfg.command == "compare") return run_compare(cfg, out);
    throw std::invalid_argument("unknown command '" + cfg.command + "'");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace knde
