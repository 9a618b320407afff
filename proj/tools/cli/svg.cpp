#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "arraycap/error.hpp"
#include "arraycap/text_io.hpp"

namespace arraycap::cli {

namespace {

constexpr double kSize = 480.0;

// Two decimals keeps the files small and stable.
std::string fmt(double v) { return format_number(std::round(v * 100.0) / 100.0); }

std::string title(const CapacityMap& map) {
  std::string out = "capacity (bits/s/Hz)";
  for (const char* key : {"geometry", "noise", "snr_db"})
    if (const auto* v = map.find_metadata(key)) out += std::string(" ") + key + "=" + *v;
  return out;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

void header(std::ostringstream& os, const CapacityMap& map) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kSize) << "\" height=\"" << fmt(kSize + 30)
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"10\" y=\"18\">" << escape(title(map)) << "</text>\n";
}

std::string polar_plot(const CapacityMap& map, double vmax) {
  std::ostringstream os;
  header(os, map);
  const double cx = kSize / 2, cy = kSize / 2 + 30, r = kSize / 2 - 30;
  for (int ring = 1; ring <= 4; ++ring) {
    os << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"" << fmt(r * ring / 4)
       << "\" fill=\"none\" stroke=\"#ccc\"/>\n";
    os << "<text x=\"" << fmt(cx + 2) << "\" y=\"" << fmt(cy - r * ring / 4 - 2) << "\" fill=\"#888\">"
       << fmt(vmax * ring / 4) << "</text>\n";
  }
  os << "<polygon fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < map.axis.size(); ++i) {
    const double rad = r * map.values[i] / vmax;
    os << (i ? " " : "") << fmt(cx + rad * std::cos(map.axis[i])) << ',' << fmt(cy - rad * std::sin(map.axis[i]));
  }
  os << "\"/>\n</svg>\n";
  return os.str();
}

std::string line_plot(const CapacityMap& map, double vmax) {
  std::ostringstream os;
  header(os, map);
  const double left = 50, right = kSize - 15, top = 40, bottom = kSize;
  const auto [lo_it, hi_it] = std::minmax_element(map.axis.begin(), map.axis.end());
  const bool logx = *lo_it > 0.0;
  auto tx = [&](double x) { return logx ? std::log10(x) : x; };
  const double x0 = tx(*lo_it);
  const double span = std::max(tx(*hi_it) - x0, 1e-12);
  auto px = [&](double x) { return left + (right - left) * (tx(x) - x0) / span; };
  auto py = [&](double v) { return bottom - (bottom - top) * v / vmax; };
  os << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(right - left) << "\" height=\""
     << fmt(bottom - top) << "\" fill=\"none\" stroke=\"#ccc\"/>\n";
  os << "<text x=\"4\" y=\"" << fmt(top + 4) << "\">" << fmt(vmax) << "</text>\n";
  os << "<text x=\"4\" y=\"" << fmt(bottom) << "\">0</text>\n";
  os << "<text x=\"" << fmt(left) << "\" y=\"" << fmt(bottom + 16) << "\">" << fmt(*lo_it) << "</text>\n";
  os << "<text x=\"" << fmt(right - 40) << "\" y=\"" << fmt(bottom + 16) << "\">" << fmt(*hi_it) << "</text>\n";
  os << "<text x=\"" << fmt((left + right) / 2 - 30) << "\" y=\"" << fmt(bottom + 16) << "\">" << escape(map.axis_name)
     << (logx ? " (log)" : "") << "</text>\n";
  os << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < map.axis.size(); ++i)
    os << (i ? " " : "") << fmt(px(map.axis[i])) << ',' << fmt(py(map.values[i]));
  os << "\"/>\n</svg>\n";
  return os.str();
}

}  // namespace

std::string render_svg(const CapacityMap& map) {
  if (map.axis.empty() || map.axis.size() != map.values.size()) throw InvalidArgument("cannot plot an empty map");
  double vmax = *std::max_element(map.values.begin(), map.values.end());
  vmax = vmax > 0.0 ? vmax * 1.05 : 1.0;
  return map.axis_name == "azimuth_rad" ? polar_plot(map, vmax) : line_plot(map, vmax);
}

}  // namespace arraycap::cli
