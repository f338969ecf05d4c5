#include "roughweyl/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace roughweyl {

namespace {

constexpr double kWidth = 640.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 30.0, kBottom = 50.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct Axes {
  double lx0, lx1, ly0, ly1; // log10 ranges

  double x(double lam) const { return kLeft + (std::log10(lam) - lx0) / (lx1 - lx0) * (kWidth - kLeft - kRight); }
  double y(double n) const {
    return kHeight - kBottom - (std::log10(n) - ly0) / (ly1 - ly0) * (kHeight - kTop - kBottom);
  }
};

std::string staircase(const Axes& ax, const std::vector<double>& v) {
  std::string d = "M" + fmt(ax.x(v[0])) + "," + fmt(ax.y(1.0));
  for (std::size_t k = 1; k < v.size(); ++k) {
    d += " H" + fmt(ax.x(v[k]));
    d += " V" + fmt(ax.y(static_cast<double>(k + 1)));
  }
  return d;
}

} // namespace

void emit_svg(std::ostream& os, const Spectrum& s, const WeylTarget& target) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  std::size_t nmax = 1;
  for (const auto* v : {&s.pos, &s.neg}) {
    if (v->empty()) continue;
    lo = std::min(lo, v->back());
    hi = std::max(hi, v->front());
    nmax = std::max(nmax, v->size());
  }
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  if (!(hi > 0.0)) {
    os << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"" << fmt(kHeight / 2)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">no eigenvalues</text>\n</svg>\n";
    return;
  }
  // Pad the lambda range by a decade fraction so the end steps stay visible.
  Axes ax{std::log10(lo) - 0.05, std::log10(hi) + 0.05, 0.0, std::log10(static_cast<double>(nmax)) + 0.1};
  if (ax.lx1 - ax.lx0 < 0.2) {
    ax.lx0 -= 0.1;
    ax.lx1 += 0.1;
  }

  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kTop, y1 = kHeight - kBottom;
  os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y0) << "\" width=\"" << fmt(x1 - x0) << "\" height=\""
     << fmt(y1 - y0) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int e = static_cast<int>(std::ceil(ax.lx0)); e <= static_cast<int>(std::floor(ax.lx1)); ++e) {
    const double xp = ax.x(std::pow(10.0, e));
    os << "<line x1=\"" << fmt(xp) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(xp) << "\" y2=\"" << fmt(y1 + 5)
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fmt(xp) << "\" y=\"" << fmt(y1 + 18) << "\" text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  for (int e = 0; e <= static_cast<int>(std::floor(ax.ly1)); ++e) {
    const double yp = ax.y(std::pow(10.0, e));
    os << "<line x1=\"" << fmt(x0 - 5) << "\" y1=\"" << fmt(yp) << "\" x2=\"" << fmt(x0) << "\" y2=\"" << fmt(yp)
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fmt(x0 - 8) << "\" y=\"" << fmt(yp + 4) << "\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  os << "<text x=\"" << fmt((x0 + x1) / 2) << "\" y=\"" << fmt(kHeight - 10)
     << "\" text-anchor=\"middle\">lambda</text>\n";
  os << "<text x=\"15\" y=\"" << fmt((y0 + y1) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
     << fmt((y0 + y1) / 2) << ")\">N(lambda)</text>\n";
  os << "</g>\n";

  os << "<clipPath id=\"plot\"><rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y0) << "\" width=\"" << fmt(x1 - x0)
     << "\" height=\"" << fmt(y1 - y0) << "\"/></clipPath>\n";
  os << "<g clip-path=\"url(#plot)\" fill=\"none\" stroke-width=\"1.5\">\n";
  const char* colors[2] = {"#1f77b4", "#d62728"};
  const std::vector<double>* sides[2] = {&s.pos, &s.neg};
  const double cs[2] = {target.c_plus, target.c_minus};
  for (int i = 0; i < 2; ++i) {
    if (sides[i]->empty()) continue;
    os << "<path d=\"" << staircase(ax, *sides[i]) << "\" stroke=\"" << colors[i] << "\"/>\n";
    if (cs[i] > 0.0) {
      const double la = std::pow(10.0, ax.lx0), lb = std::pow(10.0, ax.lx1);
      os << "<line x1=\"" << fmt(ax.x(la)) << "\" y1=\"" << fmt(ax.y(cs[i] / la)) << "\" x2=\"" << fmt(ax.x(lb))
         << "\" y2=\"" << fmt(ax.y(cs[i] / lb)) << "\" stroke=\"" << colors[i] << "\" stroke-dasharray=\"6,4\"/>\n";
    }
  }
  os << "</g>\n";

  os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  double ly = y0 + 15;
  const char* labels[2] = {"N+ (staircase), c+/lambda (dashed)", "N- (staircase), c-/lambda (dashed)"};
  for (int i = 0; i < 2; ++i) {
    if (sides[i]->empty()) continue;
    os << "<line x1=\"" << fmt(x1 - 230) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\"" << fmt(x1 - 210) << "\" y2=\""
       << fmt(ly - 4) << "\" stroke=\"" << colors[i] << "\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << fmt(x1 - 205) << "\" y=\"" << fmt(ly) << "\">" << labels[i] << "</text>\n";
    ly += 16;
  }
  os << "</g>\n</svg>\n";
}

} // namespace roughweyl
