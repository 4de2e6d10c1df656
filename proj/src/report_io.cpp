#include "knde/report_io.hpp"

#include <json.hpp>

#include <charconv>
#include <sstream>

namespace knde {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

long long parse_int(const std::string& s) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::invalid_argument("invalid integer '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::invalid_argument("invalid seed '" + s + "'");
  return v;
}

struct CsvRow {
  std::string dist;
  int d = 1;
  std::string estimator;
  Index n = 0;
  std::string k, h, a;
  Index trials = 0;
  double l1 = 0.0, linf = 0.0;
  std::uint64_t seed = 0;
};

void append_row(std::string& out, const CsvRow& row) {
  out += row.dist;
  out += ',';
  out += std::to_string(row.d);
  out += ',';
  out += row.estimator;
  out += ',';
  out += std::to_string(row.n);
  out += ',';
  out += row.k;
  out += ',';
  out += row.h;
  out += ',';
  out += row.a;
  out += ',';
  out += std::to_string(row.trials);
  out += ',';
  out += format_double(row.l1);
  out += ',';
  out += format_double(row.linf);
  out += ',';
  out += std::to_string(row.seed);
  out += '\n';
}

std::vector<CsvRow> parse_rows(const std::string& csv) {
  std::vector<std::string> lines = split(csv, '\n');
  if (lines.empty() || lines.front() != kCsvHeader)
    throw std::invalid_argument("unexpected CSV header");
  std::vector<CsvRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> f = split(lines[i], ',');
    if (f.size() != 11)
      throw std::invalid_argument("CSV row has wrong field count");
    CsvRow row;
    row.dist = f[0];
    row.d = static_cast<int>(parse_int(f[1]));
    row.estimator = f[2];
    row.n = parse_int(f[3]);
    row.k = f[4];
    row.h = f[5];
    row.a = f[6];
    row.trials = parse_int(f[7]);
    row.l1 = parse_double(f[8]);
    row.linf = parse_double(f[9]);
    row.seed = parse_u64(f[10]);
    rows.push_back(std::move(row));
  }
  return rows;
}

json series_json(const ConvergenceReport& report) {
  json arr = json::array();
  for (const auto& p : report.series) {
    json item;
    item["n"] = p.n;
    item["k"] = p.k;
    if (p.a > 0.0) item["a"] = p.a;
    item["l1"] = p.mean_l1;
    item["linf"] = p.mean_linf;
    arr.push_back(item);
  }
  return arr;
}

}  // namespace

const char* const kCsvHeader = "dist,d,estimator,n,k,h,a,trials,l1,linf,seed";

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::invalid_argument("invalid number '" + s + "'");
  return v;
}

std::string to_csv(const ErrorReport& report) {
  std::string out = kCsvHeader;
  out += '\n';
  CsvRow row;
  row.dist = report.dist_id;
  row.d = report.dim;
  row.estimator = estimator_name(report.estimator);
  row.n = report.n;
  row.trials = report.trials;
  row.l1 = report.l1;
  row.linf = report.linf;
  row.seed = report.base_seed;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, KnnPlain> ||
                      std::is_same_v<T, KnnBoundary>) {
          row.k = std::to_string(s.k);
        } else if constexpr (std::is_same_v<T, KnnTruncated>) {
          row.k = std::to_string(s.k);
          row.a = format_double(s.a);
        } else {
          row.h = format_double(s.h);
        }
      },
      report.estimator);
  append_row(out, row);
  return out;
}

std::string to_csv(const ConvergenceReport& report) {
  std::string out = kCsvHeader;
  out += '\n';
  for (std::size_t i = 0; i < report.series.size(); ++i) {
    const auto& p = report.series[i];
    CsvRow row;
    row.dist = report.dist_id;
    row.d = report.dim;
    row.estimator = report.estimator;
    row.n = p.n;
    row.k = std::to_string(p.k);
    if (p.a > 0.0) row.a = format_double(p.a);
    row.trials = report.trials;
    row.l1 = p.mean_l1;
    row.linf = p.mean_linf;
    row.seed = report.base_seed + static_cast<std::uint64_t>(i) * 1000003;
    append_row(out, row);
  }
  return out;
}

std::string to_csv(const RatioReport& report) {
  std::string out = kCsvHeader;
  out += '\n';
  for (std::size_t i = 0; i < report.series.size(); ++i) {
    const auto& p = report.series[i];
    std::uint64_t seed =
        report.base_seed + static_cast<std::uint64_t>(i) * 1000003;
    CsvRow knn;
    knn.dist = report.dist_id;
    knn.d = report.dim;
    knn.estimator = "knn-trunc";
    knn.n = p.n;
    knn.k = std::to_string(p.best_k);
    knn.a = format_double(p.best_a);
    knn.trials = report.trials;
    knn.l1 = p.l1_knn;
    knn.linf = 0.0;
    knn.seed = seed;
    CsvRow kde = knn;
    kde.estimator = "kde";
    kde.k.clear();
    kde.a.clear();
    kde.h = format_double(p.best_h);
    kde.l1 = p.l1_kde;
    append_row(out, knn);
    append_row(out, kde);
  }
  return out;
}

ConvergenceReport convergence_report_from_csv(const std::string& csv) {
  std::vector<CsvRow> rows = parse_rows(csv);
  if (rows.empty()) throw std::invalid_argument("CSV contains no rows");
  ConvergenceReport report;
  report.dist_id = rows.front().dist;
  report.dim = rows.front().d;
  report.estimator = rows.front().estimator;
  report.trials = rows.front().trials;
  report.base_seed = rows.front().seed;
  for (const CsvRow& row : rows) {
    ConvergencePoint p;
    p.n = row.n;
    p.k = parse_int(row.k);
    p.a = row.a.empty() ? 0.0 : parse_double(row.a);
    p.mean_l1 = row.l1;
    p.mean_linf = row.linf;
    report.series.push_back(p);
  }
  std::vector<std::pair<double, double>> l1s, linfs;
  for (const auto& p : report.series) {
    l1s.emplace_back(static_cast<double>(p.n), p.mean_l1);
    linfs.emplace_back(static_cast<double>(p.n), p.mean_linf);
  }
  report.slope_l1 = fit_slope(l1s);
  report.slope_linf = fit_slope(linfs);
  Distribution dist(dist_id_from_string(report.dist_id), report.dim);
  report.theory_l1 = theory_l1_exponent(dist);
  report.theory_linf = theory_linf_exponent(dist);
  return report;
}

RatioReport ratio_report_from_csv(const std::string& csv) {
  std::vector<CsvRow> rows = parse_rows(csv);
  if (rows.empty() || rows.size() % 2 != 0)
    throw std::invalid_argument("ratio CSV must pair knn-trunc and kde rows");
  RatioReport report;
  report.dist_id = rows.front().dist;
  report.dim = rows.front().d;
  report.trials = rows.front().trials;
  report.base_seed = rows.front().seed;
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    const CsvRow& knn = rows[i];
    const CsvRow& kde = rows[i + 1];
    if (knn.estimator != "knn-trunc" || kde.estimator != "kde" ||
        knn.n != kde.n)
      throw std::invalid_argument("ratio CSV must pair knn-trunc and kde rows");
    RatioPoint p;
    p.n = knn.n;
    p.l1_knn = knn.l1;
    p.l1_kde = kde.l1;
    p.ratio = p.l1_knn / p.l1_kde;
    p.best_k = parse_int(knn.k);
    p.best_a = parse_double(knn.a);
    p.best_h = parse_double(kde.h);
    report.series.push_back(p);
  }
  return report;
}

std::string summary_json(const ConvergenceReport& report) {
  json j;
  j["dist"] = report.dist_id;
  j["d"] = report.dim;
  j["estimator"] = report.estimator;
  j["rule"] = report.rule_descriptor;
  j["trials"] = report.trials;
  j["seed"] = report.base_seed;
  j["series"] = series_json(report);
  j["slope_l1"] = report.slope_l1;
  j["slope_linf"] = report.slope_linf;
  j["theory_l1"] = report.theory_l1;
  j["theory_linf"] = report.theory_linf;
  return j.dump(2) + "\n";
}

std::string summary_json(const RatioReport& report) {
  json j;
  j["dist"] = report.dist_id;
  j["d"] = report.dim;
  j["trials"] = report.trials;
  j["seed"] = report.base_seed;
  j["tuning"] = report.tuning;
  json arr = json::array();
  for (const auto& p : report.series) {
    json item;
    item["n"] = p.n;
    item["l1_knn"] = p.l1_knn;
    item["l1_kde"] = p.l1_kde;
    item["ratio"] = p.ratio;
    item["k"] = p.best_k;
    item["a"] = p.best_a;
    item["h"] = p.best_h;
    arr.push_back(item);
  }
  j["series"] = arr;
  return j.dump(2) + "\n";
}

std::string summary_json(const ErrorReport& report) {
  json j;
  j["dist"] = report.dist_id;
  j["d"] = report.dim;
  j["estimator"] = estimator_name(report.estimator);
  j["n"] = report.n;
  j["trials"] = report.trials;
  j["seed"] = report.base_seed;
  j["l1"] = report.l1;
  j["linf"] = report.linf;
  json arr = json::array();
  for (const auto& t : report.per_trial) {
    json item;
    item["l1"] = t.l1;
    item["linf"] = t.linf;
    arr.push_back(item);
  }
  j["per_trial"] = arr;
  return j.dump(2) + "\n";
}

}  // namespace knde
