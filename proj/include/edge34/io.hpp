#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace edge34 {

inline constexpr const char* kVersion = "0.1.0";

// shortest-independent, locale-free: always 17 significant digits
inline std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

struct CsvHeader {
  std::string command;
  std::map<std::string, std::string> params;  // alpha, s, tolerances, ...
};

inline void write_csv_header(std::ostream& os, const CsvHeader& h, const std::vector<std::string>& columns) {
  os << "# edge34 " << kVersion << " " << h.command << "\n";
  for (const auto& [k, v] : h.params) os << "# " << k << "=" << v << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << "\n";
}

inline void write_csv_row(std::ostream& os, const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt17(row[i]);
  os << "\n";
}

struct Series {
  std::string label;
  std::vector<double> x, y;
};

namespace detail {

inline std::vector<double> ticks(double lo, double hi, int target = 6) {
  const double span = hi - lo;
  if (!(span > 0)) return {lo};
  const double raw = span / target, mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0})
    if (f * mag >= raw) {
      step = f * mag;
      break;
    }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return t;
}

inline std::string short_num(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 4);
  return std::string(buf, r.ptr);
}

}  // namespace detail

// static line chart on a fixed 800x500 viewBox
inline void write_svg(std::ostream& os, const std::vector<Series>& series, const std::string& xlabel,
                      const std::string& ylabel) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (x0 > x1) x0 = 0, x1 = 1;
  if (y0 > y1) y0 = 0, y1 = 1;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  const double L = 70, R = 780, T = 20, B = 450;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (R - L); };
  auto py = [&](double y) { return B - (y - y0) / (y1 - y0) * (B - T); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
  os << "<g stroke=\"black\"><line x1=\"" << L << "\" y1=\"" << B << "\" x2=\"" << R << "\" y2=\"" << B << "\"/>"
     << "<line x1=\"" << L << "\" y1=\"" << B << "\" x2=\"" << L << "\" y2=\"" << T << "\"/></g>\n";
  for (double t : detail::ticks(x0, x1))
    os << "<line x1=\"" << px(t) << "\" y1=\"" << B << "\" x2=\"" << px(t) << "\" y2=\"" << B + 5
       << "\" stroke=\"black\"/><text x=\"" << px(t) << "\" y=\"" << B + 18 << "\" text-anchor=\"middle\">"
       << detail::short_num(t) << "</text>\n";
  for (double t : detail::ticks(y0, y1))
    os << "<line x1=\"" << L - 5 << "\" y1=\"" << py(t) << "\" x2=\"" << L << "\" y2=\"" << py(t)
       << "\" stroke=\"black\"/><text x=\"" << L - 8 << "\" y=\"" << py(t) + 4 << "\" text-anchor=\"end\">"
       << detail::short_num(t) << "</text>\n";
  os << "<text x=\"" << (L + R) / 2 << "\" y=\"490\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  os << "<text x=\"15\" y=\"" << (T + B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " << (T + B) / 2
     << ")\">" << ylabel << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    os << "<polyline fill=\"none\" stroke=\"" << colors[k % 5] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (std::isfinite(s.y[i])) os << detail::short_num(px(s.x[i])) << "," << detail::short_num(py(s.y[i])) << " ";
    os << "\"/>\n";
    os << "<text x=\"" << R - 10 << "\" y=\"" << T + 15 * (k + 1) << "\" text-anchor=\"end\" fill=\"" << colors[k % 5]
       << "\">" << s.label << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace edge34
