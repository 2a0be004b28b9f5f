#include "annulus/svg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

namespace annulus::svg {

namespace {

constexpr double kWidth = 800;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

class Canvas {
 public:
  explicit Canvas(const View& v) : v_(v), height_(kWidth * (v.yhi - v.ylo) / (v.xhi - v.xlo)) {
    out_ << std::fixed << std::setprecision(4);
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height_
         << "\" viewBox=\"0 0 " << kWidth << " " << height_ << "\">\n";
    out_ << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  double sx(double x) const { return (x - v_.xlo) / (v_.xhi - v_.xlo) * kWidth; }
  double sy(double y) const { return height_ - (y - v_.ylo) / (v_.yhi - v_.ylo) * height_; }

  void polyline(const std::vector<Point>& pts, const std::string& style, bool closed = false) {
    out_ << (closed ? "<polygon" : "<polyline") << " points=\"";
    for (size_t i = 0; i < pts.size(); ++i) {
      if (i) out_ << ' ';
      out_ << sx(pts[i].x.to_double()) << ',' << sy(pts[i].y.to_double());
    }
    out_ << "\" " << style << "/>\n";
  }

  void domain_marks() {
    for (long k = static_cast<long>(std::ceil(v_.xlo)); k <= static_cast<long>(std::floor(v_.xhi)); ++k)
      out_ << "<line x1=\"" << sx(k) << "\" y1=\"0\" x2=\"" << sx(k) << "\" y2=\"" << height_
           << "\" stroke=\"#999\" stroke-dasharray=\"4 4\"/>\n";
  }

  void line(const EssentialLine& l, const std::string& colour, double opacity) {
    const auto pts = l.clipped(Rational::from_double(v_.ylo) - Rational(1), Rational::from_double(v_.yhi) + Rational(1));
    std::ostringstream style;
    style << "fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" stroke-opacity=\"" << std::fixed
          << std::setprecision(2) << opacity << "\"";
    if (opacity < 1) style << " stroke-dasharray=\"6 3\"";
    polyline(pts, style.str());
  }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  View v_;
  double height_;
  std::ostringstream out_;
};

void draw_lines(Canvas& canvas, const std::vector<EssentialLine>& lines, const View& view) {
  const long lo = static_cast<long>(std::floor(view.xlo)) - 3, hi = static_cast<long>(std::ceil(view.xhi)) + 3;
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string colour = kPalette[i % std::size(kPalette)];
    for (long k = lo; k <= hi; ++k) {
      if (k == 0) continue;
      canvas.line(lines[i].translated({Rational(k), Rational(0)}), colour, 0.25);
    }
    canvas.line(lines[i], colour, 1.0);
  }
}

}  // namespace

std::string lines_figure(const std::vector<EssentialLine>& lines, const View& view) {
  Canvas canvas(view);
  canvas.domain_marks();
  draw_lines(canvas, lines, view);
  return canvas.finish();
}

std::string bricks_figure(const bricks::BrickComplex& cx, const bricks::RegionReport* region,
                          const std::vector<EssentialLine>& lines, const View& view) {
  Canvas canvas(view);
  std::set<bricks::Member> shaded;
  std::set<int> orbits;
  if (region) {
    for (const auto& m : region->reachable) {
      shaded.insert(m);
      orbits.insert(m.first);
    }
  }
  const auto ids = cx.brick_ids();
  const long lo = static_cast<long>(std::floor(view.xlo)) - 1, hi = static_cast<long>(std::ceil(view.xhi)) + 1;
  for (int b : ids) {
    const size_t colour = static_cast<size_t>(std::lower_bound(ids.begin(), ids.end(), b) - ids.begin());
    for (long k = lo; k <= hi; ++k) {
      const bool in = region && (region->use_t_union ? orbits.count(b) > 0 : shaded.count({b, k}) > 0);
      std::ostringstream style;
      style << "fill=\"" << kPalette[colour % std::size(kPalette)] << "\" fill-opacity=\"" << (in ? "0.55" : "0.12")
            << "\" stroke=\"#333\" stroke-width=\"0.5\"";
      for (const auto& [c, o] : cx.members(b)) canvas.polyline(cx.cell_polygon(c, o + k), style.str(), true);
    }
  }
  canvas.domain_marks();
  for (size_t i = 0; i < lines.size(); ++i) canvas.line(lines[i], "#000", 1.0);
  return canvas.finish();
}

}  // namespace annulus::svg
