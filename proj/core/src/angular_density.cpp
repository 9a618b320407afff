#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <tuple>

#include "arraycap/error.hpp"
#include "arraycap/noisefield.hpp"
#include "grid_interp.hpp"
#include "text_io.hpp"

namespace arraycap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCoverSlack = 1e-9;

}  // namespace

AngularDensity::AngularDensity(std::vector<double> frequencies, std::vector<double> azimuths,
                               std::vector<double> polars, std::vector<double> values)
    : frequencies_(std::move(frequencies)),
      azimuths_(std::move(azimuths)),
      polars_(std::move(polars)),
      values_(std::move(values)) {
  detail::require_ascending(frequencies_, "angular density frequency");
  detail::require_ascending(azimuths_, "angular density azimuth");
  detail::require_ascending(polars_, "angular density polar");
  if (azimuths_.front() < 0.0 || azimuths_.back() >= kTwoPi)
    throw InvalidArgument("angular density azimuth grid must lie in [0, 2pi)");
  if (polars_.front() > kCoverSlack || polars_.back() < std::numbers::pi - kCoverSlack || polars_.front() < -kCoverSlack ||
      polars_.back() > std::numbers::pi + kCoverSlack)
    throw InvalidArgument("angular density polar grid must span [0, pi]");
  if (values_.size() != frequencies_.size() * azimuths_.size() * polars_.size())
    throw InvalidArgument("angular density sample count does not match the grid");
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("angular density samples must be nonnegative");
}

AngularDensity AngularDensity::isotropic(double power) {
  return AngularDensity({0.0}, {0.0}, {0.0, std::numbers::pi}, {power, power});
}

AngularDensity AngularDensity::sample(std::vector<double> frequencies, std::vector<double> azimuths,
                                      std::vector<double> polars,
                                      const std::function<double(double, double, double)>& fn) {
  std::vector<double> values;
  values.reserve(frequencies.size() * azimuths.size() * polars.size());
  for (double f : frequencies)
    for (double a : azimuths)
      for (double p : polars) values.push_back(fn(f, a, p));
  return AngularDensity(std::move(frequencies), std::move(azimuths), std::move(polars), std::move(values));
}

double AngularDensity::evaluate(double frequency, double azimuth, double polar) const {
  detail::Bracket bf{0, 0, 0.0};
  if (frequencies_.size() > 1) bf = detail::bracket(frequencies_, frequency, "frequency");

  // Periodic azimuth: the last interval wraps from the final node to the first + 2pi.
  double az = std::fmod(azimuth, kTwoPi);
  if (az < 0.0) az += kTwoPi;
  detail::Bracket ba{0, 0, 0.0};
  const std::size_t na = azimuths_.size();
  if (na > 1) {
    if (az < azimuths_.front()) az += kTwoPi;
    const auto it = std::upper_bound(azimuths_.begin(), azimuths_.end(), az);
    if (it == azimuths_.end()) {
      ba = {na - 1, 0, (az - azimuths_.back()) / (azimuths_.front() + kTwoPi - azimuths_.back())};
    } else {
      const auto hi = static_cast<std::size_t>(it - azimuths_.begin());
      ba = {hi - 1, hi, (az - azimuths_[hi - 1]) / (azimuths_[hi] - azimuths_[hi - 1])};
    }
  }

  const double pol = std::clamp(polar, polars_.front(), polars_.back());
  const auto bp = detail::bracket(polars_, pol, "polar angle");

  double out = 0.0;
  for (const auto& [fi, fw] : {std::pair{bf.lo, 1.0 - bf.t}, std::pair{bf.hi, bf.t}}) {
    if (fw == 0.0) continue;
    for (const auto& [ai, aw] : {std::pair{ba.lo, 1.0 - ba.t}, std::pair{ba.hi, ba.t}}) {
      if (aw == 0.0) continue;
      for (const auto& [pi, pw] : {std::pair{bp.lo, 1.0 - bp.t}, std::pair{bp.hi, bp.t}}) {
        if (pw == 0.0) continue;
        out += fw * aw * pw * at(fi, ai, pi);
      }
    }
  }
  return out;
}

namespace {

const std::vector<std::string> kHeader{"freq_hz", "azimuth_rad", "polar_rad", "power"};

}  // namespace

AngularDensity read_angular_density(std::istream& in) {
  const auto rows = detail::read_csv(in, kHeader, "angular density");
  if (rows.empty()) throw ParseError("angular density: no data rows");
  using Key = std::tuple<double, double, double>;
  std::map<Key, std::pair<double, std::size_t>> nodes;
  std::set<double> freqs, azs, pols;
  for (const auto& row : rows) {
    const std::string ctx = "angular density line " + std::to_string(row.line);
    const double f = detail::parse_number(row.fields[0], ctx);
    const double az = detail::parse_number(row.fields[1], ctx);
    const double pol = detail::parse_number(row.fields[2], ctx);
    const double power = detail::parse_number(row.fields[3], ctx);
    if (power < 0.0) throw ParseError(ctx + ": power must be nonnegative");
    const auto [it, inserted] = nodes.emplace(Key{f, az, pol}, std::make_pair(power, row.line));
    if (!inserted)
      throw ParseError(ctx + ": duplicate grid node (already given on line " + std::to_string(it->second.second) + ")");
    freqs.insert(f);
    azs.insert(az);
    pols.insert(pol);
  }
  std::vector<double> fg(freqs.begin(), freqs.end());
  std::vector<double> ag(azs.begin(), azs.end());
  std::vector<double> pg(pols.begin(), pols.end());
  std::vector<double> values;
  values.reserve(fg.size() * ag.size() * pg.size());
  for (double f : fg)
    for (double az : ag)
      for (double pol : pg) {
        const auto it = nodes.find(Key{f, az, pol});
        if (it == nodes.end())
          throw ParseError("angular density: missing grid node freq_hz=" + detail::format_number(f) +
                           " azimuth_rad=" + detail::format_number(az) + " polar_rad=" + detail::format_number(pol));
        values.push_back(it->second.first);
      }
  try {
    return AngularDensity(std::move(fg), std::move(ag), std::move(pg), std::move(values));
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("angular density: ") + e.what());
  }
}

AngularDensity load_angular_density(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open angular density file " + path.string());
  return read_angular_density(in);
}

void write_angular_density(std::ostream& out, const AngularDensity& density) {
  out << "freq_hz,azimuth_rad,polar_rad,power\n";
  std::size_t idx = 0;
  for (double f : density.frequencies())
    for (double a : density.azimuths())
      for (double p : density.polars())
        out << detail::format_number(f) << ',' << detail::format_number(a) << ',' << detail::format_number(p) << ','
            << detail::format_number(density.values()[idx++]) << '\n';
}

}  // namespace arraycap
