#include "setevo/svg.hpp"

#include <cstdio>
#include <algorithm>
#include <sstream>

namespace setevo {

namespace {

constexpr const char* kDark = "#3b4a6b";
constexpr const char* kLight = "#c9d8f0";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

void rows(std::ostringstream& os, const BinaryField& m, const char* fill, int px) {
  const int n = m.grid().cells();
  for (int j = 0; j < n; ++j) {
    int i = 0;
    while (i < n) {
      if (!m.at(i, j)) {
        ++i;
        continue;
      }
      const int start = i;
      while (i < n && m.at(i, j)) ++i;
      os << "<rect x=\"" << start * px << "\" y=\"" << (n - 1 - j) * px << "\" width=\"" << (i - start) * px
         << "\" height=\"" << px << "\" fill=\"" << fill << "\"/>\n";
    }
  }
}

}  // namespace

std::string grid_svg(const BinaryField& z, const BinaryField& forcing_open, const std::string& title) {
  require_same_grid(z.grid(), forcing_open.grid(), "grid plot");
  const int n = z.grid().cells();
  const int px = n <= 128 ? 4 : 2;
  const int size = n * px;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << size << "\" height=\""
     << size + 24 << "\" viewBox=\"0 -24 " << size << " " << size + 24 << "\" shape-rendering=\"crispEdges\">\n"
     << "<title>" << escape(title) << "</title>\n"
     << "<text x=\"4\" y=\"-8\" font-family=\"sans-serif\" font-size=\"14\">" << escape(title) << "</text>\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << size << "\" height=\"" << size << "\" fill=\"white\" stroke=\"black\"/>\n";
  rows(os, forcing_open, kDark, px);
  rows(os, z, kLight, px);
  os << "</svg>\n";
  return os.str();
}

std::string profile_svg(const Profile& p, const std::string& title) {
  const double W = 300.0;  // panel width in px for one unit of x
  const double pad = 20.0;
  std::ostringstream os;
  const double half_h = W, full_h = 2.0 * W;
  const double total_w = 2.0 * W + 3.0 * pad;
  const double total_h = full_h + 2.0 * pad + 24.0;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(total_w) << "\" height=\""
     << num(total_h) << "\">\n"
     << "<title>" << escape(title) << "</title>\n"
     << "<text x=\"" << num(pad) << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\">" << escape(title)
     << "</text>\n";

  auto panel = [&](double ox, double oy, double ymin, double ymax, double height) {
    auto X = [&](double x) { return num(ox + x * W); };
    auto Y = [&](double y) { return num(oy + (ymax - y) / (ymax - ymin) * height); };
    os << "<g>\n<rect x=\"" << num(ox) << "\" y=\"" << num(oy) << "\" width=\"" << num(W) << "\" height=\""
       << num(height) << "\" fill=\"white\" stroke=\"black\"/>\n";
    // F above the obstacle (and below -v in the full view).
    os << "<polygon fill=\"" << kDark << "\" points=\"";
    for (int i = 0; i <= p.N; ++i) os << X(p.x(i)) << "," << Y(std::min(p.v[i], ymax)) << " ";
    os << X(1.0) << "," << Y(ymax) << " " << X(0.0) << "," << Y(ymax) << "\"/>\n";
    if (ymin < 0.0) {
      os << "<polygon fill=\"" << kDark << "\" points=\"";
      for (int i = 0; i <= p.N; ++i) os << X(p.x(i)) << "," << Y(std::max(-p.v[i], ymin)) << " ";
      os << X(1.0) << "," << Y(ymin) << " " << X(0.0) << "," << Y(ymin) << "\"/>\n";
    }
    const double lo = ymin < 0.0 ? -1.0 : 0.0;
    os << "<polygon fill=\"" << kLight << "\" stroke=\"black\" stroke-width=\"0.8\" points=\"";
    for (int i = 0; i <= p.N; ++i) os << X(p.x(i)) << "," << Y(p.u[i]) << " ";
    for (int i = p.N; i >= 0; --i) os << X(p.x(i)) << "," << Y(lo < 0.0 ? -p.u[i] : 0.0) << " ";
    os << "\"/>\n</g>\n";
  };
  panel(pad, 24.0 + pad, 0.0, 1.0, half_h);
  panel(2.0 * pad + W, 24.0 + pad, -1.0, 1.0, full_h);
  os << "</svg>\n";
  return os.str();
}

}  // namespace setevo
