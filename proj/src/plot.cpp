#include "mvlsw/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "mvlsw/error.hpp"
#include "mvlsw/io.hpp"

namespace mvlsw {

namespace {

constexpr double kPanelWidth = 360.0;
constexpr double kPanelHeight = 220.0;
constexpr double kLeft = 64.0, kRight = 16.0, kTop = 28.0, kBottom = 40.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
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

struct Curve {
  std::string name;   // CSV column
  std::string title;  // panel title
  std::span<const double> values;
  std::span<const double> lower, upper;  // empty without interval
};

std::string pair_label(std::size_t p, std::size_t q) {
  return "p" + std::to_string(p + 1) + "q" + std::to_string(q + 1);
}

std::pair<double, double> value_range(const std::vector<Curve>& curves) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& c : curves)
    for (auto s : {c.values, c.lower, c.upper})
      for (double v : s) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  if (!(lo <= hi)) return {-1.0, 1.0};
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
    const double pad = std::max(1.0, std::abs(hi) * 0.1);
    return {lo - pad, hi + pad};
  }
  const double pad = 0.04 * (hi - lo);
  return {lo - pad, hi + pad};
}

class SvgWriter {
 public:
  SvgWriter(double width, double height) : width_(width), height_(height) {}

  void text(double x, double y, std::string_view s, std::string_view anchor = "middle", int size = 11) {
    body_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << size
          << "\" text-anchor=\"" << anchor << "\">" << xml_escape(s) << "</text>\n";
  }
  void line(double x1, double y1, double x2, double y2, std::string_view stroke = "#000") {
    body_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
          << "\" stroke=\"" << stroke << "\" stroke-width=\"1\"/>\n";
  }
  void rect(double x, double y, double w, double h, std::string_view fill, std::string_view stroke = "none") {
    body_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w) << "\" height=\"" << num(h)
          << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\"/>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, std::string_view stroke, double width,
                bool dashed = false) {
    body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width) << "\"";
    if (dashed) body_ << " stroke-dasharray=\"4 3\"";
    body_ << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) body_ << (i ? " " : "") << num(pts[i].first) << ',' << num(pts[i].second);
    body_ << "\"/>\n";
  }

  std::string str() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width_) << "\" height=\""
        << num(height_) << "\" viewBox=\"0 0 " << num(width_) << ' ' << num(height_) << "\" font-family=\"sans-serif\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

 private:
  double width_, height_;
  std::ostringstream body_;
};

// Draws one line panel with its top-left corner at (ox, oy).
void draw_panel(SvgWriter& svg, double ox, double oy, const Curve& c, std::pair<double, double> yr,
                const PlotSpec& spec) {
  const double x0 = ox + kLeft, x1 = ox + kPanelWidth - kRight;
  const double y0 = oy + kTop, y1 = oy + kPanelHeight - kBottom;
  const std::size_t T = c.values.size();
  auto px = [&](std::size_t k) { return x0 + (x1 - x0) * (T > 1 ? static_cast<double>(k) / static_cast<double>(T - 1) : 0.0); };
  auto py = [&](double v) {
    const double clamped = std::clamp(v, yr.first, yr.second);
    return y1 - (y1 - y0) * (clamped - yr.first) / (yr.second - yr.first);
  };

  svg.rect(x0, y0, x1 - x0, y1 - y0, "none", "#000");
  svg.text((x0 + x1) / 2, oy + 18, c.title, "middle", 12);
  for (double v : {yr.first, (yr.first + yr.second) / 2, yr.second}) {
    svg.line(x0 - 4, py(v), x0, py(v));
    svg.text(x0 - 6, py(v) + 4, num(v), "end", 10);
  }
  for (std::size_t k : {std::size_t{0}, T / 2, T - 1}) {
    svg.line(px(k), y1, px(k), y1 + 4);
    svg.text(px(k), y1 + 16, std::to_string(k), "middle", 10);
  }
  svg.text((x0 + x1) / 2, y1 + 32, "location k", "middle", 11);
  if (!spec.ylab.empty()) svg.text(ox + 12, (y0 + y1) / 2, spec.ylab, "middle", 11);
  if (yr.first < 0 && yr.second > 0) svg.line(x0, py(0), x1, py(0), "#bbb");

  auto trace = [&](std::span<const double> s) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) pts.emplace_back(px(k), py(s[k]));
    return pts;
  };
  if (!c.lower.empty()) {
    svg.polyline(trace(c.lower), "#d62728", spec.line_width, true);
    svg.polyline(trace(c.upper), "#d62728", spec.line_width, true);
  }
  svg.polyline(trace(c.values), "#1f4e9c", spec.line_width);
}

std::string curves_csv(const std::vector<Curve>& curves, std::size_t T) {
  const bool with_interval = !curves.empty() && !curves.front().lower.empty();
  std::string out = "k";
  for (const auto& c : curves) {
    out += ',' + c.name;
    if (with_interval) out += ',' + c.name + "_lower," + c.name + "_upper";
  }
  out += '\n';
  for (std::size_t k = 0; k < T; ++k) {
    out += std::to_string(k);
    for (const auto& c : curves) {
      out += ',' + format_double(c.values[k]);
      if (with_interval) out += ',' + format_double(c.lower[k]) + ',' + format_double(c.upper[k]);
    }
    out += '\n';
  }
  return out;
}

std::string ramp_color(double t) {
  // Linear ramp from pale yellow to dark blue.
  static constexpr double lo[3] = {255, 255, 204}, hi[3] = {12, 44, 132};
  t = std::clamp(t, 0.0, 1.0);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(lo[0] + t * (hi[0] - lo[0]))),
                static_cast<int>(std::lround(lo[1] + t * (hi[1] - lo[1]))),
                static_cast<int>(std::lround(lo[2] + t * (hi[2] - lo[2]))));
  return buf;
}

RenderedPlot render_heatmap(const MvLswArray& x, const PlotSpec& spec, std::size_t p, std::size_t q) {
  const std::size_t J = x.levels(), T = x.length();
  RenderedPlot out;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t j = 0; j < J; ++j) {
    const auto s = x.series(p, q, j);
    for (std::size_t k = 0; k < T; ++k) {
      out.csv += (k ? "," : "") + format_double(s[k]);
      lo = std::min(lo, s[k]);
      hi = std::max(hi, s[k]);
    }
    out.csv += '\n';
  }
  if (spec.ylim) std::tie(lo, hi) = *spec.ylim;
  if (!(hi > lo)) hi = lo + 1.0;

  const double cell_w = std::max(720.0 / static_cast<double>(T), 0.25), cell_h = 18.0;
  const double plot_w = cell_w * static_cast<double>(T), plot_h = cell_h * static_cast<double>(J);
  const double width = kLeft + plot_w + 90.0, height = kTop + plot_h + kBottom + 8.0;
  SvgWriter svg(width, height);
  svg.text(kLeft + plot_w / 2, 18, "pair (" + std::to_string(p + 1) + ", " + std::to_string(q + 1) + ")", "middle", 12);
  for (std::size_t j = 0; j < J; ++j) {
    const auto s = x.series(p, q, j);
    const double y = kTop + cell_h * static_cast<double>(j);
    for (std::size_t k = 0; k < T; ++k)
      svg.rect(kLeft + cell_w * static_cast<double>(k), y, cell_w + 0.05, cell_h, ramp_color((s[k] - lo) / (hi - lo)));
    svg.text(kLeft - 6, y + cell_h / 2 + 4, "j=" + std::to_string(j + 1), "end", 10);
  }
  svg.rect(kLeft, kTop, plot_w, plot_h, "none", "#000");
  svg.text(kLeft, kTop + plot_h + 16, "0", "middle", 10);
  svg.text(kLeft + plot_w, kTop + plot_h + 16, std::to_string(T - 1), "middle", 10);
  svg.text(kLeft + plot_w / 2, kTop + plot_h + 32, "location k", "middle", 11);

  const double bx = kLeft + plot_w + 24.0;
  constexpr int steps = 32;
  for (int i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / (steps - 1);
    svg.rect(bx, kTop + plot_h * (1.0 - static_cast<double>(i + 1) / steps), 14, plot_h / steps + 0.5, ramp_color(t));
  }
  svg.text(bx + 18, kTop + 8, num(hi), "start", 10);
  svg.text(bx + 18, kTop + plot_h, num(lo), "start", 10);
  if (!spec.ylab.empty()) svg.text(bx + 7, kTop + plot_h + 24, spec.ylab, "middle", 10);
  out.svg = svg.str();
  return out;
}

}  // namespace

std::vector<int> parse_plot_info(std::string_view text) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const auto v = parse_double(text.substr(start, end - start));
    if (!v || *v != std::floor(*v) || std::abs(*v) > 1e9)
      throw Error(ErrorCode::InfoMismatch, "plot info '" + std::string(text) + "' is not a list of integers");
    out.push_back(static_cast<int>(*v));
    start = end + 1;
  }
  return out;
}

void validate_plot_spec(const PlotSpec& spec, const MvLswArray& x) {
  const auto P = static_cast<int>(x.channels()), J = static_cast<int>(x.levels());
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InfoMismatch, msg); };
  auto check_channel = [&](int c) {
    if (c < 1 || c > P) fail("channel " + std::to_string(c) + " outside 1.." + std::to_string(P));
  };
  auto check_level = [&](int j) {
    if (j < 1 || j > J) fail("level " + std::to_string(j) + " outside 1.." + std::to_string(J));
  };
  const std::size_t n = spec.info.size();
  switch (spec.style) {
    case 1:
      if (n != 3) fail("style 1 needs info p,q,j");
      check_channel(spec.info[0]);
      check_channel(spec.info[1]);
      check_level(spec.info[2]);
      break;
    case 2:
      if (n != 1) fail("style 2 needs info j");
      check_level(spec.info[0]);
      if (!spec.include_diagonal && P < 2) fail("no off-diagonal pairs to draw");
      break;
    case 3:
    case 4:
      if (n != 2) fail("style " + std::to_string(spec.style) + " needs info p,q");
      check_channel(spec.info[0]);
      check_channel(spec.info[1]);
      break;
    default: fail("plot style must be 1, 2, 3 or 4");
  }
  if (spec.ylim && !(spec.ylim->second > spec.ylim->first)) fail("ylim must be increasing");
}

RenderedPlot render_plot(const MvLswArray& x, const PlotSpec& spec, const IntervalPair* interval) {
  validate_plot_spec(spec, x);
  if (interval && (!x.same_shape(interval->lower) || !x.same_shape(interval->upper)))
    throw Error(ErrorCode::DimensionMismatch, "interval bounds differ in shape from the plotted array");

  if (spec.style == 4) {
    if (interval) throw Error(ErrorCode::InfoMismatch, "intervals cannot be overlaid on a heatmap");
    return render_heatmap(x, spec, static_cast<std::size_t>(spec.info[0] - 1),
                          static_cast<std::size_t>(spec.info[1] - 1));
  }

  auto make_curve = [&](std::size_t p, std::size_t q, std::size_t j, std::string name, std::string title) {
    Curve c{std::move(name), std::move(title), x.series(p, q, j), {}, {}};
    if (interval) {
      c.lower = interval->lower.series(p, q, j);
      c.upper = interval->upper.series(p, q, j);
    }
    return c;
  };

  // Each curve goes in grid cell (row, col).
  std::vector<Curve> curves;
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  std::size_t rows = 1, cols = 1;
  const std::size_t P = x.channels();
  if (spec.style == 1) {
    const auto p = static_cast<std::size_t>(spec.info[0] - 1), q = static_cast<std::size_t>(spec.info[1] - 1);
    const auto j = static_cast<std::size_t>(spec.info[2] - 1);
    curves.push_back(make_curve(p, q, j, pair_label(p, q) + "j" + std::to_string(j + 1),
                                "pair (" + std::to_string(p + 1) + ", " + std::to_string(q + 1) + "), level " +
                                    std::to_string(j + 1)));
    cells.emplace_back(0, 0);
  } else if (spec.style == 2) {
    const auto j = static_cast<std::size_t>(spec.info[0] - 1);
    const std::size_t offset = spec.include_diagonal ? 0 : 1;
    rows = cols = P - offset;
    for (std::size_t p = 0; p < P; ++p)
      for (std::size_t q = p + offset; q < P; ++q) {
        curves.push_back(make_curve(p, q, j, pair_label(p, q),
                                    "pair (" + std::to_string(p + 1) + ", " + std::to_string(q + 1) + "), level " +
                                        std::to_string(j + 1)));
        cells.emplace_back(p, q - offset);
      }
  } else {
    const auto p = static_cast<std::size_t>(spec.info[0] - 1), q = static_cast<std::size_t>(spec.info[1] - 1);
    rows = x.levels();
    for (std::size_t j = 0; j < x.levels(); ++j) {
      curves.push_back(make_curve(p, q, j, "j" + std::to_string(j + 1),
                                  "pair (" + std::to_string(p + 1) + ", " + std::to_string(q + 1) + "), level " +
                                      std::to_string(j + 1)));
      cells.emplace_back(j, 0);
    }
  }

  const auto yr = spec.ylim ? *spec.ylim : value_range(curves);
  SvgWriter svg(kPanelWidth * static_cast<double>(cols), kPanelHeight * static_cast<double>(rows));
  for (std::size_t i = 0; i < curves.size(); ++i)
    draw_panel(svg, kPanelWidth * static_cast<double>(cells[i].second), kPanelHeight * static_cast<double>(cells[i].first),
               curves[i], yr, spec);
  return {svg.str(), curves_csv(curves, x.length())};
}

void emit_plot(const MvLswArray& x, const PlotSpec& spec, const IntervalPair* interval,
               const std::filesystem::path& out) {
  const RenderedPlot r = render_plot(x, spec, interval);
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    f << text;
    if (!f) throw Error(ErrorCode::IoError, "write failed for " + path.string());
  };
  if (out.extension() == ".csv") {
    write(out, r.csv);
    return;
  }
  write(out, r.svg);
  std::filesystem::path sidecar = out;
  sidecar.replace_extension(".csv");
  write(sidecar, r.csv);
}

}  // namespace mvlsw
