#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace nanotalbot::cli {

namespace {

constexpr const char* palette[] = {"#1f4e9c", "#c0392b", "#27864a", "#8e44ad", "#d68910",
                                   "#17808a", "#555555"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  if (v == 0) return "0";
  const double a = std::abs(v);
  if (a >= 1e-3 && a < 1e4)
    std::snprintf(buf, sizeof buf, "%g", v);
  else
    std::snprintf(buf, sizeof buf, "%.0e", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  bool log;
  double lo, hi;
  double pixel_lo, pixel_hi;

  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0); }
  double map(double v) const {
    const double t = log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo))
                         : (v - lo) / (hi - lo);
    return pixel_lo + t * (pixel_hi - pixel_lo);
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      const int a = static_cast<int>(std::floor(std::log10(lo)));
      const int b = static_cast<int>(std::ceil(std::log10(hi)));
      const int step = std::max(1, (b - a) / 8);
      for (int e = a; e <= b; e += step) {
        const double v = std::pow(10.0, e);
        if (v >= lo * (1 - 1e-9) && v <= hi * (1 + 1e-9)) out.push_back(v);
      }
      return out;
    }
    const double raw = (hi - lo) / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
      if (m * mag >= raw) {
        step = m * mag;
        break;
      }
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step)
      out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return out;
  }
};

Axis make_axis(bool log, const std::vector<const std::vector<double>*>& data, double p0,
               double p1) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto* d : data)
    for (double v : *d)
      if (std::isfinite(v) && (!log || v > 0)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  if (!std::isfinite(lo)) {
    lo = log ? 1.0 : 0.0;
    hi = log ? 10.0 : 1.0;
  }
  if (log) {
    lo = std::pow(10.0, std::floor(std::log10(lo)));
    hi = std::pow(10.0, std::ceil(std::log10(hi)));
    if (hi <= lo) hi = lo * 10.0;
  } else {
    if (hi <= lo) {
      const double pad = lo == 0 ? 1.0 : std::abs(lo) * 0.1;
      lo -= pad;
      hi += pad;
    }
    const double pad = 0.04 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  return {log, lo, hi, p0, p1};
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  const double left = 90, right = 20, top = 40, bottom = 60;
  const double w = spec.width, h = spec.height;
  std::vector<const std::vector<double>*> xs, ys;
  for (const auto& s : spec.series) {
    xs.push_back(&s.x);
    ys.push_back(&s.y);
  }
  const Axis ax = make_axis(spec.log_x, xs, left, w - right);
  const Axis ay = make_axis(spec.log_y, ys, h - bottom, top);

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << spec.width
    << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
    << escape(spec.title) << "</text>\n";

  for (double t : ax.ticks()) {
    const double px = ax.map(t);
    o << "<line x1=\"" << num(px) << "\" y1=\"" << num(top) << "\" x2=\"" << num(px)
      << "\" y2=\"" << num(h - bottom) << "\" stroke=\"#e4e4e4\"/>\n"
      << "<text x=\"" << num(px) << "\" y=\"" << num(h - bottom + 16)
      << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double py = ay.map(t);
    o << "<line x1=\"" << num(left) << "\" y1=\"" << num(py) << "\" x2=\"" << num(w - right)
      << "\" y2=\"" << num(py) << "\" stroke=\"#e4e4e4\"/>\n"
      << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py + 4)
      << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
  }
  o << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\""
    << num(w - left - right) << "\" height=\"" << num(h - top - bottom)
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << num(left + (w - left - right) / 2) << "\" y=\"" << num(h - 18)
    << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
  o << "<text transform=\"translate(20," << num(top + (h - top - bottom) / 2)
    << ") rotate(-90)\" text-anchor=\"middle\">" << escape(spec.y_label) << "</text>\n";

  o << "<clipPath id=\"plot\"><rect x=\"" << num(left) << "\" y=\"" << num(top)
    << "\" width=\"" << num(w - left - right) << "\" height=\"" << num(h - top - bottom)
    << "\"/></clipPath>\n<g clip-path=\"url(#plot)\">\n";
  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const Series& s = spec.series[k];
    const char* color = palette[k % std::size(palette)];
    std::string dash = s.dashed ? " stroke-dasharray=\"7 4\"" : "";
    std::ostringstream path;
    bool pen_down = false;
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!ax.usable(s.x[i]) || !ay.usable(s.y[i])) {
        pen_down = false;
        continue;
      }
      path << (pen_down ? " L" : " M") << num(ax.map(s.x[i])) << ',' << num(ay.map(s.y[i]));
      pen_down = true;
    }
    o << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.6\"" << dash << "/>\n";
    if (s.markers)
      for (std::size_t i = 0; i < n; ++i)
        if (ax.usable(s.x[i]) && ay.usable(s.y[i]))
          o << "<circle cx=\"" << num(ax.map(s.x[i])) << "\" cy=\"" << num(ay.map(s.y[i]))
            << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
  }
  o << "</g>\n";

  double ly = top + 16;
  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const Series& s = spec.series[k];
    if (s.label.empty()) continue;
    const char* color = palette[k % std::size(palette)];
    const double lx = w - right - 190;
    o << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 28)
      << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"1.6\""
      << (s.dashed ? " stroke-dasharray=\"7 4\"" : "") << "/>\n"
      << "<text x=\"" << num(lx + 34) << "\" y=\"" << num(ly) << "\">" << escape(s.label)
      << "</text>\n";
    ly += 16;
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace nanotalbot::cli
