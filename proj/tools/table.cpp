#include "table.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "qradar/errors.hpp"

namespace qradar::cli {

void CsvTable::add_column(const std::string& name, bool plot) {
  header.push_back(name);
  plotted.push_back(plot);
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ConfigError("table: no column named " + name);
  return static_cast<std::size_t>(it - header.begin());
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // drops the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_csv(std::ostream& out, const CsvTable& t) {
  for (const auto& m : t.metadata) out << "# " << m << "\n";
  for (std::size_t j = 0; j < t.header.size(); ++j) out << (j ? "," : "") << quote(t.header[j]);
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_number(row[j]);
    out << "\n";
  }
}

// ---------------------------------------------------------------- svg

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 180.0;
constexpr double kTop = 20.0;
constexpr double kBottom = 50.0;

const std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                          "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f"};

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;

  double t(double v) const {
    const double a = log ? std::log10(v) : v;
    return (a - lo) / (hi - lo);
  }
  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
};

Axis make_axis(const std::vector<double>& values, bool log) {
  Axis ax;
  ax.log = log;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : values) {
    if (!ax.usable(v)) continue;
    const double a = log ? std::log10(v) : v;
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(lo))) {
    lo -= 0.5;
    hi += 0.5;
  }
  ax.lo = lo;
  ax.hi = hi;
  return ax;
}

std::vector<double> ticks(const Axis& ax) {
  std::vector<double> out;
  if (ax.log) {
    const double first = std::ceil(ax.lo);
    const double last = std::floor(ax.hi);
    const double step = std::max(1.0, std::ceil((last - first + 1.0) / 8.0));
    for (double e = first; e <= last + 1e-9; e += step) out.push_back(std::pow(10.0, e));
    if (out.empty()) out = {std::pow(10.0, ax.lo), std::pow(10.0, ax.hi)};
  } else {
    for (int i = 0; i <= 4; ++i) out.push_back(ax.lo + (ax.hi - ax.lo) * i / 4.0);
  }
  return out;
}

void frame(std::ostringstream& os, double w, double h) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth, "%.0f") << "\" height=\""
     << fmt(kHeight, "%.0f") << "\" viewBox=\"0 0 " << fmt(kWidth, "%.0f") << " " << fmt(kHeight, "%.0f")
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
     << "\" fill=\"none\" stroke=\"black\"/>\n";
}

void axis_labels(std::ostringstream& os, const Axis& xa, const Axis& ya, double w, double h,
                 const std::string& xname, const std::string& yname) {
  for (double v : ticks(xa)) {
    const double x = kLeft + xa.t(v) * w;
    os << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(kTop + h) << "\" x2=\"" << fmt(x) << "\" y2=\""
       << fmt(kTop + h + 4) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(kTop + h + 16) << "\" text-anchor=\"middle\">"
       << fmt(v, "%.3g") << "</text>\n";
  }
  for (double v : ticks(ya)) {
    const double y = kTop + (1.0 - ya.t(v)) * h;
    os << "<line x1=\"" << fmt(kLeft - 4) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(kLeft) << "\" y2=\""
       << fmt(y) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\">"
       << fmt(v, "%.3g") << "</text>\n";
  }
  os << "<text x=\"" << fmt(kLeft + w / 2) << "\" y=\"" << fmt(kHeight - 10) << "\" text-anchor=\"middle\">"
     << escape(xname) << "</text>\n";
  os << "<text x=\"14\" y=\"" << fmt(kTop + h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
     << fmt(kTop + h / 2) << ")\">" << escape(yname) << "</text>\n";
}

std::string line_chart(const CsvTable& t) {
  const double w = kWidth - kLeft - kRight;
  const double h = kHeight - kTop - kBottom;
  std::vector<double> xs, ys;
  std::vector<std::size_t> cols;
  for (std::size_t j = 1; j < t.header.size(); ++j)
    if (j < t.plotted.size() && t.plotted[j]) cols.push_back(j);
  for (const auto& r : t.rows) {
    xs.push_back(r[0]);
    for (std::size_t j : cols) ys.push_back(r[j]);
  }
  const Axis xa = make_axis(xs, t.log_x);
  const Axis ya = make_axis(ys, t.log_y);

  std::ostringstream os;
  frame(os, w, h);
  axis_labels(os, xa, ya, w, h, t.header[0], t.log_y ? "value (log)" : "value");
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const std::size_t j = cols[k];
    const char* color = kPalette[k % kPalette.size()];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& r : t.rows) {
      if (!xa.usable(r[0]) || !ya.usable(r[j])) continue;
      os << (first ? "" : " ") << fmt(kLeft + xa.t(r[0]) * w) << "," << fmt(kTop + (1.0 - ya.t(r[j])) * h);
      first = false;
    }
    os << "\"/>\n";
    const double ly = kTop + 14.0 * (k + 1);
    os << "<line x1=\"" << fmt(kWidth - kRight + 10) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
       << fmt(kWidth - kRight + 30) << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << color
       << "\" stroke-width=\"1.5\"/>\n"
       << "<text x=\"" << fmt(kWidth - kRight + 34) << "\" y=\"" << fmt(ly) << "\">" << escape(t.header[j])
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

// Piecewise-linear approximation of viridis.
std::string colour(double t) {
  static const std::array<std::array<double, 3>, 5> stops{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140},
                                                           {94, 201, 98}, {253, 231, 37}}};
  if (!std::isfinite(t)) return "#cccccc";
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), 3);
  const double f = t - static_cast<double>(i);
  char buf[8];
  int c[3];
  for (int k = 0; k < 3; ++k) c[k] = static_cast<int>(std::lround(stops[i][k] + f * (stops[i + 1][k] - stops[i][k])));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

std::string heatmap(const CsvTable& t, const HeatmapLayout& hm) {
  if (hm.nx * hm.ny != t.rows.size()) throw ConfigError("svg: heatmap layout does not match the table");
  const double w = kWidth - kLeft - kRight;
  const double h = kHeight - kTop - kBottom;
  std::vector<double> vals;
  for (const auto& r : t.rows) vals.push_back(r[hm.value_column]);
  const Axis va = make_axis(vals, false);
  const double cw = w / static_cast<double>(hm.nx);
  const double ch = h / static_cast<double>(hm.ny);

  std::ostringstream os;
  frame(os, w, h);
  for (std::size_t ix = 0; ix < hm.nx; ++ix) {
    for (std::size_t iy = 0; iy < hm.ny; ++iy) {
      const double v = t.rows[ix * hm.ny + iy][hm.value_column];
      os << "<rect class=\"cell\" x=\"" << fmt(kLeft + cw * ix) << "\" y=\"" << fmt(kTop + h - ch * (iy + 1))
         << "\" width=\"" << fmt(cw) << "\" height=\"" << fmt(ch) << "\" fill=\"" << colour(va.t(v)) << "\"/>\n";
    }
  }
  // Corner labels only: the cells are index-spaced, whatever the axis scale.
  const double x0 = t.rows.front()[hm.x_column];
  const double x1 = t.rows.back()[hm.x_column];
  const double y0 = t.rows.front()[hm.y_column];
  const double y1 = t.rows[hm.ny - 1][hm.y_column];
  os << "<text x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop + h + 16) << "\">" << fmt(x0, "%.3g") << "</text>\n"
     << "<text x=\"" << fmt(kLeft + w) << "\" y=\"" << fmt(kTop + h + 16) << "\" text-anchor=\"end\">"
     << fmt(x1, "%.3g") << "</text>\n"
     << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(kTop + h) << "\" text-anchor=\"end\">" << fmt(y0, "%.3g")
     << "</text>\n"
     << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(kTop + 10) << "\" text-anchor=\"end\">"
     << fmt(y1, "%.3g") << "</text>\n";
  os << "<text x=\"" << fmt(kLeft + w / 2) << "\" y=\"" << fmt(kHeight - 10) << "\" text-anchor=\"middle\">"
     << escape(t.header[hm.x_column]) << "</text>\n";
  os << "<text x=\"14\" y=\"" << fmt(kTop + h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
     << fmt(kTop + h / 2) << ")\">" << escape(t.header[hm.y_column]) << (hm.log_y ? " (log)" : "") << "</text>\n";
  // colour bar
  const double bx = kWidth - kRight + 20;
  for (int k = 0; k < 20; ++k) {
    os << "<rect x=\"" << fmt(bx) << "\" y=\"" << fmt(kTop + h - h * (k + 1) / 20.0) << "\" width=\"16\" height=\""
       << fmt(h / 20.0) << "\" fill=\"" << colour((k + 0.5) / 20.0) << "\"/>\n";
  }
  os << "<text x=\"" << fmt(bx + 20) << "\" y=\"" << fmt(kTop + h) << "\">" << fmt(va.lo, "%.3g") << "</text>\n"
     << "<text x=\"" << fmt(bx + 20) << "\" y=\"" << fmt(kTop + 10) << "\">" << fmt(va.hi, "%.3g") << "</text>\n"
     << "<text x=\"" << fmt(bx) << "\" y=\"" << fmt(kTop + h + 16) << "\">" << escape(t.header[hm.value_column])
     << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace

std::string render_svg(const CsvTable& t) {
  if (t.rows.empty() || t.header.size() < 2) throw ConfigError("svg: table is empty, nothing to draw");
  return t.heatmap ? heatmap(t, *t.heatmap) : line_chart(t);
}

}  // namespace qradar::cli
