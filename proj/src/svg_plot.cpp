#include "knde/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace knde {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 60.0;

struct AxisMap {
  double lo = 0.0, hi = 1.0, pix_lo = 0.0, pix_hi = 1.0;
  double operator()(double v) const {
    return pix_lo + (v - lo) / (hi - lo) * (pix_hi - pix_lo);
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void open_svg(std::ostringstream& svg) {
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n"
      << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
}

void axes_frame(std::ostringstream& svg) {
  svg << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
      << kWidth - 2 * kMargin << "\" height=\"" << kHeight - 2 * kMargin
      << "\" fill=\"none\" stroke=\"black\"/>\n";
}

void decade_ticks_x(std::ostringstream& svg, const AxisMap& xmap) {
  for (int e = static_cast<int>(std::ceil(xmap.lo));
       e <= static_cast<int>(std::floor(xmap.hi)); ++e) {
    double px = xmap(e);
    svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << kHeight - kMargin
        << "\" x2=\"" << fmt(px) << "\" y2=\"" << kHeight - kMargin + 6
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << fmt(px) << "\" y=\"" << kHeight - kMargin + 22
        << "\" font-size=\"12\" text-anchor=\"middle\">1e" << e << "</text>\n";
  }
}

void polyline(std::ostringstream& svg, const std::vector<double>& xs,
              const std::vector<double>& ys, const char* color,
              const char* cls) {
  svg << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) svg << ' ';
    svg << fmt(xs[i]) << ',' << fmt(ys[i]);
  }
  svg << "\"/>\n";
}

}  // namespace

std::string render_convergence_svg(const ConvergenceReport& report) {
  if (report.series.empty())
    throw std::invalid_argument("cannot plot an empty convergence report");

  double xlo = std::log10(static_cast<double>(report.series.front().n));
  double xhi = std::log10(static_cast<double>(report.series.back().n));
  double ylo = 0.0, yhi = 0.0;
  bool first = true;
  for (const auto& p : report.series) {
    for (double v : {p.mean_l1, p.mean_linf}) {
      if (!(v > 0.0))
        throw std::invalid_argument("log-log plot needs positive errors");
      double lv = std::log10(v);
      ylo = first ? lv : std::min(ylo, lv);
      yhi = first ? lv : std::max(yhi, lv);
      first = false;
    }
  }
  if (xhi - xlo < 1e-12) xhi = xlo + 1.0;
  if (yhi - ylo < 1e-12) yhi = ylo + 1.0;

  AxisMap xmap{xlo, xhi, kMargin, kWidth - kMargin};
  AxisMap ymap{ylo, yhi, kHeight - kMargin, kMargin};

  std::ostringstream svg;
  open_svg(svg);
  axes_frame(svg);
  decade_ticks_x(svg, xmap);

  std::vector<double> xs, y1, yi;
  for (const auto& p : report.series) {
    xs.push_back(xmap(std::log10(static_cast<double>(p.n))));
    y1.push_back(ymap(std::log10(p.mean_l1)));
    yi.push_back(ymap(std::log10(p.mean_linf)));
  }
  polyline(svg, xs, y1, "#1f77b4", "l1");
  polyline(svg, xs, yi, "#d62728", "linf");

  svg << "<text x=\"" << kMargin + 10 << "\" y=\"" << kMargin - 24
      << "\" font-size=\"13\">" << report.dist_id << " d=" << report.dim
      << " " << report.estimator << "</text>\n";
  svg << "<text x=\"" << kMargin + 10 << "\" y=\"" << kMargin - 8
      << "\" font-size=\"13\" fill=\"#1f77b4\">l1 slope " << fmt(report.slope_l1)
      << " (theory " << fmt(report.theory_l1) << ")</text>\n";
  svg << "<text x=\"" << kMargin + 280 << "\" y=\"" << kMargin - 8
      << "\" font-size=\"13\" fill=\"#d62728\">linf slope "
      << fmt(report.slope_linf) << " (theory " << fmt(report.theory_linf)
      << ")</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::string render_ratio_svg(const RatioReport& report) {
  if (report.series.empty())
    throw std::invalid_argument("cannot plot an empty ratio report");

  double xlo = std::log10(static_cast<double>(report.series.front().n));
  double xhi = std::log10(static_cast<double>(report.series.back().n));
  double ylo = 1.0, yhi = 1.0;  // always include the reference line
  for (const auto& p : report.series) {
    ylo = std::min(ylo, p.ratio);
    yhi = std::max(yhi, p.ratio);
  }
  double pad = 0.1 * std::max(yhi - ylo, 0.2);
  ylo -= pad;
  yhi += pad;
  if (xhi - xlo < 1e-12) xhi = xlo + 1.0;

  AxisMap xmap{xlo, xhi, kMargin, kWidth - kMargin};
  AxisMap ymap{ylo, yhi, kHeight - kMargin, kMargin};

  std::ostringstream svg;
  open_svg(svg);
  axes_frame(svg);
  decade_ticks_x(svg, xmap);

  svg << "<line class=\"ref-one\" x1=\"" << kMargin << "\" y1=\""
      << fmt(ymap(1.0)) << "\" x2=\"" << kWidth - kMargin << "\" y2=\""
      << fmt(ymap(1.0)) << "\" stroke=\"#999999\" stroke-dasharray=\"6,4\"/>\n";

  std::vector<double> xs, ys;
  for (const auto& p : report.series) {
    xs.push_back(xmap(std::log10(static_cast<double>(p.n))));
    ys.push_back(ymap(p.ratio));
  }
  polyline(svg, xs, ys, "#2ca02c", "ratio");

  svg << "<text x=\"" << kMargin + 10 << "\" y=\"" << kMargin - 8
      << "\" font-size=\"13\">" << report.dist_id
      << " l1 ratio knn-trunc / kde</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace knde
