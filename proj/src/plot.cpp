#include "nlkl/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

#include "nlkl/errors.hpp"
#include "nlkl/io.hpp"

namespace nlkl {
namespace fs = std::filesystem;

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;

  double to_unit(double v) const {
    const double t = log ? std::log10(v) : v;
    return hi > lo ? (t - lo) / (hi - lo) : 0.5;
  }
  double from_internal(double t) const { return log ? std::pow(10.0, t) : t; }
};

bool usable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }

Axis fit_axis(const std::vector<Series>& series, bool use_x, bool log) {
  double lo = INFINITY, hi = -INFINITY;
  for (const Series& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double v = use_x ? s.x[i] : s.y[i];
      const double w = use_x ? s.y[i] : s.x[i];
      if (!usable(v, log) || !std::isfinite(w)) continue;
      const double t = log ? std::log10(v) : v;
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  }
  if (!std::isfinite(lo)) return {0.0, 1.0, log};
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad, log};
}

}  // namespace

std::string line_plot_svg(const PlotSpec& spec, const std::vector<Series>& series) {
  const Axis ax = fit_axis(series, true, spec.logx);
  const Axis ay = fit_axis(series, false, spec.logy);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + ax.to_unit(v) * pw; };
  auto py = [&](double v) { return kTop + (1.0 - ay.to_unit(v)) * ph; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
       "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) + "\" fill=\"white\"/>\n";
  s += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
       escape(spec.title) + "</text>\n";
  s += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(pw) + "\" height=\"" + fmt(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double f = i / 4.0;
    const double vx = ax.from_internal(ax.lo + f * (ax.hi - ax.lo));
    const double vy = ay.from_internal(ay.lo + f * (ay.hi - ay.lo));
    const double gx = kLeft + f * pw;
    const double gy = kTop + (1.0 - f) * ph;
    s += "<line x1=\"" + fmt(gx) + "\" y1=\"" + fmt(kTop + ph) + "\" x2=\"" + fmt(gx) + "\" y2=\"" +
         fmt(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt(gx) + "\" y=\"" + fmt(kTop + ph + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + tick_label(vx) + "</text>\n";
    s += "<line x1=\"" + fmt(kLeft - 5) + "\" y1=\"" + fmt(gy) + "\" x2=\"" + fmt(kLeft) + "\" y2=\"" + fmt(gy) +
         "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(gy + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + tick_label(vy) + "</text>\n";
  }
  s += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"" + fmt(kHeight - 10) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + escape(spec.xlabel) + "</text>\n";
  s += "<text x=\"16\" y=\"" + fmt(kTop + ph / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 " +
       fmt(kTop + ph / 2) + ")\">" + escape(spec.ylabel) + "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& ser = series[k];
    const std::string color = kColors[k % (sizeof kColors / sizeof kColors[0])];
    std::string pts;
    std::string marks;
    for (std::size_t i = 0; i < ser.x.size() && i < ser.y.size(); ++i) {
      if (!usable(ser.x[i], spec.logx) || !usable(ser.y[i], spec.logy)) continue;
      const std::string xy = fmt(px(ser.x[i])) + "," + fmt(py(ser.y[i]));
      pts += (pts.empty() ? "" : " ") + xy;
      if (ser.x.size() <= 40) {
        marks += "<circle cx=\"" + fmt(px(ser.x[i])) + "\" cy=\"" + fmt(py(ser.y[i])) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
      }
    }
    if (!pts.empty()) {
      s += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
      s += marks;
    }
    const double ly = kTop + 14.0 + 18.0 * static_cast<double>(k);
    s += "<line x1=\"" + fmt(kWidth - kRight + 12) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(kWidth - kRight + 32) +
         "\" y2=\"" + fmt(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + fmt(kWidth - kRight + 38) + "\" y=\"" + fmt(ly + 4) +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(ser.label) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

std::vector<fs::path> emit_plots(const RunReport& report, const fs::path& outdir) {
  std::vector<fs::path> written;
  if (report.records.empty()) return written;

  using Group = std::pair<std::string, double>;
  using Line = std::pair<std::string, std::size_t>;
  std::vector<Group> group_order;
  std::map<Group, std::vector<Line>> line_order;
  // (group, line, dx) -> error samples
  std::map<std::tuple<Group, Line, double>, std::vector<double>> samples;
  std::map<Group, std::vector<std::size_t>> pair_counts;
  for (const CellRecord& r : report.records) {
    const Group g{r.kernel, r.nsr};
    if (!line_order.count(g)) group_order.push_back(g);
    auto& lines = line_order[g];
    const Line l{r.regularizer, r.pairs};
    if (std::find(lines.begin(), lines.end(), l) == lines.end()) lines.push_back(l);
    auto& bucket = samples[{g, l, r.dx}];
    if (r.status == "ok" && std::isfinite(r.error)) bucket.push_back(r.error);
  }

  for (const Group& g : group_order) {
    const auto& lines = line_order[g];
    bool several_pairs = false;
    for (const Line& l : lines) several_pairs = several_pairs || l.second != lines.front().second;

    std::vector<Series> series;
    std::string csv = "regularizer,pairs,dx,mean_error,std_error,count\n";
    for (const Line& l : lines) {
      Series s;
      s.label = l.first + (several_pairs ? " N=" + std::to_string(l.second) : "");
      for (const auto& [key, errs] : samples) {
        if (std::get<0>(key) != g || std::get<1>(key) != l) continue;
        const double dx = std::get<2>(key);
        double mean = NAN, sd = NAN;
        if (!errs.empty()) {
          mean = 0.0;
          for (double e : errs) mean += e;
          mean /= static_cast<double>(errs.size());
          double v = 0.0;
          for (double e : errs) v += (e - mean) * (e - mean);
          sd = errs.size() > 1 ? std::sqrt(v / static_cast<double>(errs.size() - 1)) : 0.0;
        }
        s.x.push_back(dx);
        s.y.push_back(mean);
        csv += l.first + "," + std::to_string(l.second) + "," + format_double(dx) + "," +
               (std::isfinite(mean) ? format_double(mean) : "nan") + "," +
               (std::isfinite(sd) ? format_double(sd) : "nan") + "," + std::to_string(errs.size()) + "\n";
      }
      series.push_back(std::move(s));
    }
    char stem[96];
    std::snprintf(stem, sizeof stem, "error_%s_nsr%g", g.first.c_str(), g.second);
    PlotSpec spec;
    spec.title = g.first + " kernel, nsr " + tick_label(g.second);
    spec.xlabel = "dx";
    spec.ylabel = "relative L2(rho) error";
    spec.logx = true;
    spec.logy = true;
    const fs::path svg = outdir / (std::string(stem) + ".svg");
    const fs::path table = outdir / (std::string(stem) + ".csv");
    write_text(svg, line_plot_svg(spec, series));
    write_text(table, csv);
    written.push_back(svg);
    written.push_back(table);
  }
  return written;
}

std::string estimate_overlay_svg(const std::vector<double>& r, const std::vector<double>& estimate,
                                 const std::vector<double>& truth) {
  PlotSpec spec{"estimated kernel", "r", "phi(r)", false, false};
  std::vector<Series> s{{"estimate", r, estimate}};
  if (!truth.empty()) s.push_back({"truth", r, truth});
  return line_plot_svg(spec, s);
}

std::string lcurve_svg(const LCurve& curve, double chosen_lambda) {
  Series s{"L-curve", {}, {}};
  Series pick{"lambda0", {}, {}};
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    s.x.push_back(curve.points[i].x);
    s.y.push_back(curve.points[i].y);
    if (curve.lambdas[i] == chosen_lambda) {
      pick.x.push_back(curve.points[i].x);
      pick.y.push_back(curve.points[i].y);
    }
  }
  return line_plot_svg({"L-curve", "log E", "log R", false, false}, {s, pick});
}

std::string dispersion_svg(const DispersionCurve& curve) {
  std::vector<double> omega(curve.omega2.size());
  for (std::size_t i = 0; i < omega.size(); ++i) omega[i] = std::sqrt(std::max(curve.omega2[i], 0.0));
  return line_plot_svg({"dispersion", "k", "omega, group velocity", false, false},
                       {{"omega", curve.k, omega}, {"group velocity", curve.k, curve.group_velocity}});
}

}  // namespace nlkl
