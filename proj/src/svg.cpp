#include "euler_plane/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "euler_plane/error.hpp"

namespace euler_plane::cli {

namespace {

constexpr double kGeo = 600.0;     // geometry panel side
constexpr double kChartW = 400.0;  // chart column width
constexpr double kHeight = 600.0;

std::string num(double v) {
  if (std::abs(v) < 5e-4) v = 0.0;  // no "-0.000"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct Frame {
  double x0, y0, x1, y1;  // data bbox
  double ox, oy, w, h;    // pixel box
  double sx() const { return w / (x1 - x0); }
  double sy() const { return h / (y1 - y0); }
  double px(double x) const { return ox + (x - x0) * sx(); }
  double py(double y) const { return oy + h - (y - y0) * sy(); }
};

Frame geometry_frame(const SvgFigure& f) {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
  auto grow = [&](const Point& p) {
    if (!p.allFinite()) return;
    x0 = std::min(x0, p.x());
    y0 = std::min(y0, p.y());
    x1 = std::max(x1, p.x());
    y1 = std::max(y1, p.y());
  };
  for (const SvgCurve& c : f.curves)
    for (const Point& p : c.points) grow(p);
  for (const SvgCrossing& c : f.crossings) grow(c.location);
  if (!(x0 <= x1))
    for (const Annulus& a : f.annuli) {
      grow(a.center + Vector(a.r_out, a.r_out));
      grow(a.center - Vector(a.r_out, a.r_out));
    }
  if (!(x0 <= x1)) x0 = y0 = -1, x1 = y1 = 1;
  // square, padded
  const double side = std::max({x1 - x0, y1 - y0, 1e-6}) * 1.1;
  const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
  return {cx - side / 2, cy - side / 2, cx + side / 2, cy + side / 2, 20, 20, kGeo - 40, kGeo - 40};
}

void geometry(std::string& out, const SvgFigure& f) {
  const Frame fr = geometry_frame(f);
  out += "<g class=\"geometry\" clip-path=\"url(#geo)\">\n";
  for (const Annulus& a : f.annuli) {
    const double cx = fr.px(a.center.x()), cy = fr.py(a.center.y());
    const double ro = a.r_out * fr.sx(), ri = a.r_in * fr.sx();
    out += "<path class=\"annulus\" fill=\"#999\" fill-opacity=\"0.25\" fill-rule=\"evenodd\" d=\"M " + num(cx + ro) +
           " " + num(cy) + " A " + num(ro) + " " + num(ro) + " 0 1 0 " + num(cx - ro) + " " + num(cy) + " A " +
           num(ro) + " " + num(ro) + " 0 1 0 " + num(cx + ro) + " " + num(cy) + " M " + num(cx + ri) + " " + num(cy) +
           " A " + num(ri) + " " + num(ri) + " 0 1 0 " + num(cx - ri) + " " + num(cy) + " A " + num(ri) + " " +
           num(ri) + " 0 1 0 " + num(cx + ri) + " " + num(cy) + " Z\"/>\n";
  }
  for (const SvgCurve& c : f.curves) {
    out += "<polyline class=\"" + c.css_class + "\" fill=\"none\" points=\"";
    for (std::size_t k = 0; k < c.points.size(); ++k) {
      if (!c.points[k].allFinite()) continue;
      out += (k ? " " : "") + num(fr.px(c.points[k].x())) + "," + num(fr.py(c.points[k].y()));
    }
    out += "\"";
    if (c.arrow) out += " marker-end=\"url(#arrow)\"";
    out += "/>\n";
  }
  for (const SvgCrossing& c : f.crossings) {
    const double x = fr.px(c.location.x()), y = fr.py(c.location.y());
    out += "<circle class=\"crossing\" cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"3\" fill=\"" +
           (c.sign > 0 ? "#c00" : "#00c") + "\"/>\n";
    out += "<text class=\"sign\" x=\"" + num(x + 4) + "\" y=\"" + num(y - 4) + "\" font-size=\"10\">" +
           (c.sign > 0 ? "+" : "&#8722;") + "</text>\n";
  }
  out += "</g>\n";
}

void axes(std::string& out, const Frame& fr, const std::string& title) {
  out += "<rect x=\"" + num(fr.ox) + "\" y=\"" + num(fr.oy) + "\" width=\"" + num(fr.w) + "\" height=\"" + num(fr.h) +
         "\" fill=\"none\" stroke=\"#ccc\"/>\n";
  out += "<line class=\"axis\" x1=\"" + num(fr.ox) + "\" y1=\"" + num(fr.py(0)) + "\" x2=\"" + num(fr.ox + fr.w) +
         "\" y2=\"" + num(fr.py(0)) + "\" stroke=\"#888\"/>\n";
  out += "<text x=\"" + num(fr.ox) + "\" y=\"" + num(fr.oy - 4) + "\" font-size=\"12\">" + title + "</text>\n";
}

void bars(std::string& out, const SvgFigure& f, double left) {
  int lo = 0, hi = 0, top = 1;
  for (const auto& [i, v] : f.bars) {
    lo = std::min(lo, i);
    hi = std::max(hi, i);
    top = std::max(top, std::abs(v));
  }
  const Frame fr{lo - 0.5, -top * 1.1, hi + 0.5, top * 1.1, left + 20, 30, kChartW - 40, kHeight / 2 - 50};
  out += "<g class=\"bars\">\n";
  axes(out, fr, "a_i");
  const double w = 0.8 * fr.sx();
  for (const auto& [i, v] : f.bars) {
    if (v == 0) continue;
    const double y = fr.py(std::max(v, 0));
    out += "<rect class=\"bar\" data-i=\"" + std::to_string(i) + "\" x=\"" + num(fr.px(i) - w / 2) + "\" y=\"" +
           num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(std::abs(v) * fr.sy()) + "\" fill=\"" +
           (v > 0 ? "#c00" : "#00c") + "\"/>\n";
  }
  out += "</g>\n";
}

void xn(std::string& out, const SvgFigure& f, double left) {
  const int n = *f.xn;
  const int range = f.xn_range > 0 ? f.xn_range : 3 * (2 * n + 1);
  const double top = 2 * n + 1;
  const Frame fr{-range - 0.5, -top * 1.2, range + 0.5, top * 1.2, left + 20, kHeight / 2 + 30, kChartW - 40,
                 kHeight / 2 - 50};
  out += "<g class=\"xn-graph\">\n";
  axes(out, fr, "X_" + std::to_string(n) + "(i)");
  out += "<polyline class=\"xn\" data-n=\"" + std::to_string(n) + "\" fill=\"none\" stroke=\"#060\" points=\"";
  bool first = true;
  for (const auto& [i, v] : xn_graph(n, range)) {
    out += (first ? "" : " ") + num(fr.px(i)) + "," + num(fr.py(v));
    first = false;
  }
  out += "\"/>\n</g>\n";
}

}  // namespace

std::vector<std::pair<int, int>> xn_graph(int n, int range) {
  std::vector<std::pair<int, int>> g;
  for (int i = -range; i <= range; ++i) g.emplace_back(i, std::clamp(i, -(2 * n + 1), 2 * n + 1));
  return g;
}

std::string render_svg(const SvgFigure& f) {
  const bool geo = !f.curves.empty() || !f.annuli.empty() || !f.crossings.empty();
  const bool charts = !f.bars.empty() || f.xn.has_value();
  const double width = (geo ? kGeo : 0) + (charts ? kChartW : 0);
  const double height = f.empty() ? 0 : kHeight;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
                    "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  if (geo) {
    out += "<defs>\n<marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" "
           "markerHeight=\"6\" orient=\"auto-start-reverse\"><path d=\"M 0 0 L 10 5 L 0 10 z\"/></marker>\n"
           "<clipPath id=\"geo\"><rect x=\"0\" y=\"0\" width=\"" + num(kGeo) + "\" height=\"" + num(kHeight) +
           "\"/></clipPath>\n</defs>\n<style>.tau{stroke:#000;stroke-width:2}.image{stroke:#c60;stroke-width:1.5}"
           ".orbit{stroke:#36c;stroke-width:1}.boundary{stroke:#000;stroke-width:1.5}</style>\n";
    geometry(out, f);
  }
  const double left = geo ? kGeo : 0;
  if (!f.bars.empty()) bars(out, f, left);
  if (f.xn) xn(out, f, left);
  out += "</svg>\n";
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    if (!o) throw Error(ErrorCode::IoError, "cannot open " + tmp.string() + " for writing");
    o << content;
    o.flush();
    if (!o) throw Error(ErrorCode::IoError, "write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot move " + tmp.string() + " to " + path);
  }
}

}  // namespace euler_plane::cli
