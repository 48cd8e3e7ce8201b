#include <algorithm>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "specsel/harness.hpp"

namespace specsel {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 60, kRight = 180, kTop = 40, kBottom = 50;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

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

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_study_svg(const std::vector<RateEstimate>& table, const std::string& title) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RateEstimate*>> series;
  for (const auto& r : table) {
    if (r.series.empty()) continue;
    auto& pts = series[r.series];
    if (pts.empty()) order.push_back(r.series);
    pts.push_back(&r);
  }

  double xmin = 0, xmax = 1;
  bool first = true;
  for (const auto& [name, pts] : series)
    for (const auto* p : pts) {
      xmin = first ? p->x : std::min(xmin, p->x);
      xmax = first ? p->x : std::max(xmax, p->x);
      first = false;
    }
  if (xmax <= xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return kTop + (1.0 - y) * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(kLeft) + "\" y=\"24\" font-size=\"15\">" + escape(title) + "</text>\n";

  // Axes and gridlines.
  for (int i = 0; i <= 5; ++i) {
    const double y = i / 5.0;
    svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(sy(y)) + "\" x2=\"" + num(kLeft + pw) + "\" y2=\"" +
           num(sy(y)) + "\" stroke=\"#e0e0e0\"/>\n";
    svg += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(sy(y) + 4) + "\" text-anchor=\"end\">" + num(y) +
           "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double x = xmin + (xmax - xmin) * i / 4.0;
    svg += "<text x=\"" + num(sx(x)) + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">" + num(x) +
           "</text>\n";
  }
  svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 10) +
         "\" text-anchor=\"middle\">parameter</text>\n";
  svg += "<text transform=\"translate(16," + num(kTop + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">selection rate</text>\n";

  for (std::size_t s = 0; s < order.size(); ++s) {
    auto pts = series[order[s]];
    std::stable_sort(pts.begin(), pts.end(), [](const RateEstimate* a, const RateEstimate* b) { return a->x < b->x; });
    const std::string colour = kPalette[s % std::size(kPalette)];

    std::string band, line;
    for (const auto* p : pts) band += num(sx(p->x)) + "," + num(sy(p->ci_high)) + " ";
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) band += num(sx((*it)->x)) + "," + num(sy((*it)->ci_low)) + " ";
    for (const auto* p : pts) line += num(sx(p->x)) + "," + num(sy(p->rate)) + " ";
    band.pop_back();
    line.pop_back();
    svg += "<polygon points=\"" + band + "\" fill=\"" + colour + "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    svg += "<polyline points=\"" + line + "\" fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";

    const double ly = kTop + 10 + 18.0 * static_cast<double>(s);
    svg += "<line x1=\"" + num(kLeft + pw + 12) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(kLeft + pw + 32) +
           "\" y2=\"" + num(ly) + "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + num(kLeft + pw + 38) + "\" y=\"" + num(ly + 4) + "\">" + escape(order[s]) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace specsel
