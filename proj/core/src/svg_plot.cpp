#include <algorithm>
#include <cstdio>
#include <sstream>

#include "qslab/experiments.hpp"

namespace qslab {

std::string render_figure1_svg(const Figure1Result& result) {
  constexpr double width = 480.0;
  constexpr double height = 480.0;
  constexpr double margin = 56.0;
  double limit = 0.0;
  for (const auto& r : result.records) limit = std::max({limit, r.tau, r.tau_min});
  if (limit <= 0.0) limit = 1.0;
  limit *= 1.05;
  const double span = width - 2.0 * margin;
  auto px = [&](double v) { return margin + span * v / limit; };
  auto py = [&](double v) { return height - margin - span * v / limit; };

  std::ostringstream svg;
  char buf[256];
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                px(0), py(0), px(limit), py(0));
  svg << buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                px(0), py(0), px(0), py(limit));
  svg << buf;
  // tau = tau_min
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"gray\" "
                "stroke-dasharray=\"4 3\"/>\n",
                px(0), py(0), px(limit), py(limit));
  svg << buf;
  for (const auto& r : result.records) {
    const double radius = 1.0 + 4.0 * r.purity;
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.2f\" fill=\"%s\" fill-opacity=\"0.5\"/>\n",
                  px(r.tau_min), py(r.tau), radius, r.is_optimal ? "#2ca02c" : "#1f77b4");
    svg << buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" font-size=\"14\">tau_min</text>\n",
                width / 2, height - 16.0);
  svg << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"16\" y=\"%.1f\" text-anchor=\"middle\" font-size=\"14\" "
                "transform=\"rotate(-90 16 %.1f)\">tau</text>\n",
                height / 2, height / 2);
  svg << buf;
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace qslab
