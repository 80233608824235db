#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "chbend/heisenberg.hpp"
#include "cli.hpp"

namespace chbend::cli {

namespace {

constexpr double kPane = 500.0;
constexpr double kMargin = 20.0;

double percentile_norm(const std::vector<CsvPoint>& points, double q) {
  std::vector<double> norms;
  for (const auto& p : points) {
    if (!p.point.infinite) norms.push_back(cygan_norm(p.point));
  }
  if (norms.empty()) return 1.0;
  const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(norms.size()))) - 1;
  const auto at = norms.begin() + static_cast<std::ptrdiff_t>(std::min(k, norms.size() - 1));
  std::nth_element(norms.begin(), at, norms.end());
  return *at > 0.0 ? *at : 1.0;
}

void pane_frame(std::ostringstream& os, double x0, const char* label_x, const char* label_y) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "<g><rect x=\"%g\" y=\"0\" width=\"%g\" height=\"%g\" fill=\"white\" stroke=\"#888\"/>"
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"#ccc\"/>"
                "<line x1=\"%g\" y1=\"0\" x2=\"%g\" y2=\"%g\" stroke=\"#ccc\"/>"
                "<text x=\"%g\" y=\"%g\" font-size=\"12\">%s</text>"
                "<text x=\"%g\" y=\"14\" font-size=\"12\">%s</text></g>\n",
                x0, kPane, kPane, x0, kPane / 2, x0 + kPane, kPane / 2, x0 + kPane / 2, x0 + kPane / 2, kPane,
                x0 + kPane - 40, kPane / 2 - 4, label_x, x0 + kPane / 2 + 4, label_y);
  os << buf;
}

}  // namespace

std::string render_svg(const std::vector<CsvPoint>& points, double extent) {
  const double e = extent > 0.0 ? extent : percentile_norm(points, 0.98);
  const double half = kPane / 2 - kMargin;
  auto sx = [&](double x0, double x) { return x0 + kPane / 2 + half * x; };
  auto sy = [&](double y) { return kPane / 2 - half * y; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 500\" width=\"1000\" height=\"500\">\n";
  pane_frame(os, 0.0, "Re xi", "Im xi");
  pane_frame(os, kPane, "Re xi", "v");
  char buf[160];
  std::snprintf(buf, sizeof buf, "<text x=\"6\" y=\"494\" font-size=\"11\">extent %.6g</text>\n", e);
  os << buf;

  os << "<g fill=\"#1f4e9a\">\n";
  std::size_t drawn = 0;
  for (const auto& p : points) {
    if (p.point.infinite) continue;
    const double x = p.point.xi.real() / e, y = p.point.xi.imag() / e, v = p.point.v / (e * e);
    if (std::abs(x) <= 1.0 && std::abs(y) <= 1.0) {
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"0.8\"/>\n", sx(0.0, x), sy(y));
      os << buf;
      ++drawn;
    }
    if (std::abs(x) <= 1.0 && std::abs(v) <= 1.0) {
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"0.8\"/>\n", sx(kPane, x), sy(v));
      os << buf;
    }
  }
  os << "</g>\n<!-- " << drawn << " of " << points.size() << " points inside the window -->\n</svg>\n";
  return os.str();
}

}  // namespace chbend::cli
