#include "nonbloch/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace nonbloch {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

std::string num(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2f", v);
  return b;
}

std::string tick(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

}  // namespace

std::string SvgPlot::render(int width, int height) const {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12 * (1 + std::abs(x0))) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12 * (1 + std::abs(y0))) y0 -= 0.5, y1 += 0.5;
  const double padx = 0.03 * (x1 - x0), pady = 0.05 * (y1 - y0);
  x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;

  const double L = 70, R = 20, T = 36, B = 50;
  const double pw = width - L - R, ph = height - T - B;
  auto X = [&](double x) { return L + (x - x0) / (x1 - x0) * pw; };
  auto Y = [&](double y) { return T + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << esc(title)
     << "</text>\n"
     << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
    os << "<text x=\"" << num(X(xv)) << "\" y=\"" << num(T + ph + 16) << "\" text-anchor=\"middle\">"
       << tick(xv) << "</text>\n"
       << "<text x=\"" << num(L - 6) << "\" y=\"" << num(Y(yv) + 4) << "\" text-anchor=\"end\">" << tick(yv)
       << "</text>\n";
  }
  os << "<text x=\"" << num(L + pw / 2) << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
     << esc(xlabel) << "</text>\n"
     << "<text transform=\"translate(16," << num(T + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
     << esc(ylabel) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* col = kColors[k % std::size(kColors)];
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (s.scatter) {
      for (std::size_t i = 0; i < n; ++i)
        if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
          os << "<circle cx=\"" << num(X(s.x[i])) << "\" cy=\"" << num(Y(s.y[i])) << "\" r=\"1.6\" fill=\""
             << col << "\"/>\n";
    } else {
      os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.4\" points=\"";
      for (std::size_t i = 0; i < n; ++i)
        if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) os << num(X(s.x[i])) << ',' << num(Y(s.y[i])) << ' ';
      os << "\"/>\n";
    }
    if (!s.label.empty())
      os << "<text x=\"" << num(L + pw - 8) << "\" y=\"" << num(T + 16 + 15 * k) << "\" text-anchor=\"end\" fill=\""
         << col << "\">" << esc(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace nonbloch
