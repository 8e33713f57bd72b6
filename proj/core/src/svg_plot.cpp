#include "tempergap/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace tempergap {
namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string svg_plot(const std::vector<PlotSeries>& series, const PlotOptions& o) {
  auto tx = [&](double v) { return o.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return o.log_y ? std::log10(v) : v; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("svg_plot: series '" + s.name + "' has mismatched lengths");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if ((o.log_x && s.x[i] <= 0) || (o.log_y && s.y[i] <= 0)) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;

  const double L = 70, R = 20, T = 40, B = 55;
  const double W = o.width - L - R, H = o.height - T - B;
  auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * W; };
  auto py = [&](double v) { return T + H - (ty(v) - y0) / (y1 - y0) * H; };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(o.width) + "\" height=\"" +
                    std::to_string(o.height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(L + W / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" + escape(o.title) + "</text>\n";
  svg += "<rect x=\"" + num(L) + "\" y=\"" + num(T) + "\" width=\"" + num(W) + "\" height=\"" + num(H) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = x0 + (x1 - x0) * k / 4.0;
    const double fy = y0 + (y1 - y0) * k / 4.0;
    const double gx = L + W * k / 4.0;
    const double gy = T + H - H * k / 4.0;
    const double lx = o.log_x ? std::pow(10.0, fx) : fx;
    const double ly = o.log_y ? std::pow(10.0, fy) : fy;
    svg += "<line x1=\"" + num(gx) + "\" y1=\"" + num(T + H) + "\" x2=\"" + num(gx) + "\" y2=\"" + num(T + H + 5) +
           "\" stroke=\"black\"/><text x=\"" + num(gx) + "\" y=\"" + num(T + H + 18) + "\" text-anchor=\"middle\">" +
           num(lx) + "</text>\n";
    svg += "<line x1=\"" + num(L - 5) + "\" y1=\"" + num(gy) + "\" x2=\"" + num(L) + "\" y2=\"" + num(gy) +
           "\" stroke=\"black\"/><text x=\"" + num(L - 8) + "\" y=\"" + num(gy + 4) + "\" text-anchor=\"end\">" + num(ly) +
           "</text>\n";
  }
  svg += "<text x=\"" + num(L + W / 2) + "\" y=\"" + num(o.height - 12) + "\" text-anchor=\"middle\">" + escape(o.x_label) +
         "</text>\n";
  svg += "<text transform=\"translate(16," + num(T + H / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
         escape(o.y_label) + "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const std::string color = kColors[s % 6];
    std::string pts;
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      if ((o.log_x && series[s].x[i] <= 0) || (o.log_y && series[s].y[i] <= 0)) continue;
      pts += num(px(series[s].x[i])) + "," + num(py(series[s].y[i])) + " ";
      svg += "<circle cx=\"" + num(px(series[s].x[i])) + "\" cy=\"" + num(py(series[s].y[i])) + "\" r=\"3\" fill=\"" +
             color + "\"/>\n";
    }
    svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    svg += "<text x=\"" + num(L + 10) + "\" y=\"" + num(T + 15 + 14 * s) + "\" fill=\"" + color + "\">" +
           escape(series[s].name) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace tempergap
