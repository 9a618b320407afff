#include "arraycap/scattering.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "arraycap/error.hpp"
#include "grid_interp.hpp"
#include "text_io.hpp"

namespace arraycap {

ScatteringTable::ScatteringTable(std::vector<double> frequencies, std::vector<double> azimuths,
                                 std::vector<double> polars, std::size_t mic_count,
                                 std::vector<std::complex<double>> samples)
    : frequencies_(std::move(frequencies)),
      azimuths_(std::move(azimuths)),
      polars_(std::move(polars)),
      mic_count_(mic_count),
      samples_(std::move(samples)) {
  detail::require_ascending(frequencies_, "scattering table frequency");
  detail::require_ascending(azimuths_, "scattering table azimuth");
  detail::require_ascending(polars_, "scattering table polar");
  if (mic_count_ == 0) throw InvalidArgument("scattering table needs at least one microphone");
  const std::size_t expected = frequencies_.size() * azimuths_.size() * polars_.size() * mic_count_;
  if (samples_.size() != expected)
    throw InvalidArgument("scattering table holds " + std::to_string(samples_.size()) + " samples, expected " +
                          std::to_string(expected));
}

ScatteringTable ScatteringTable::zeros(std::vector<double> frequencies, std::vector<double> azimuths,
                                       std::vector<double> polars, std::size_t mic_count) {
  const std::size_t n = frequencies.size() * azimuths.size() * polars.size() * mic_count;
  return ScatteringTable(std::move(frequencies), std::move(azimuths), std::move(polars), mic_count,
                         std::vector<std::complex<double>>(n));
}

Eigen::VectorXcd ScatteringTable::interpolate(double frequency, const Direction& direction) const {
  const auto bf = detail::bracket(frequencies_, frequency, "frequency");
  const auto ba = detail::bracket(azimuths_, direction.azimuth(), "azimuth");
  const auto bp = detail::bracket(polars_, direction.polar(), "polar angle");

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(mic_count_));
  const std::array<std::pair<std::size_t, double>, 2> fs{{{bf.lo, 1.0 - bf.t}, {bf.hi, bf.t}}};
  const std::array<std::pair<std::size_t, double>, 2> as{{{ba.lo, 1.0 - ba.t}, {ba.hi, ba.t}}};
  const std::array<std::pair<std::size_t, double>, 2> ps{{{bp.lo, 1.0 - bp.t}, {bp.hi, bp.t}}};
  for (const auto& [fi, fw] : fs) {
    if (fw == 0.0) continue;
    for (const auto& [ai, aw] : as) {
      if (aw == 0.0) continue;
      for (const auto& [pi, pw] : ps) {
        if (pw == 0.0) continue;
        const double w = fw * aw * pw;
        for (std::size_t m = 0; m < mic_count_; ++m)
          out(static_cast<Eigen::Index>(m)) += w * samples_[index(fi, ai, pi, m)];
      }
    }
  }
  return out;
}

SteeringVector total_steering(const SteeringVector& incident, const ScatteringTable& table) {
  if (static_cast<std::size_t>(incident.entries.size()) != table.mic_count())
    throw InvalidArgument("scattering table microphone count does not match the steering vector");
  SteeringVector total = incident;
  total.entries += table.interpolate(incident.frequency, direction_of(incident.source));
  return total;
}

namespace {

const std::vector<std::string> kHeader{"freq_hz", "azimuth_rad", "polar_rad", "mic_index", "re", "im"};

}  // namespace

ScatteringTable read_scattering_table(std::istream& in) {
  const auto rows = detail::read_csv(in, kHeader, "scattering table");
  if (rows.empty()) throw ParseError("scattering table: no data rows");

  using Key = std::tuple<double, double, double, std::size_t>;
  std::map<Key, std::pair<std::complex<double>, std::size_t>> nodes;
  std::set<double> freqs, azs, pols;
  std::size_t max_mic = 0;
  for (const auto& row : rows) {
    const std::string ctx = "scattering table line " + std::to_string(row.line);
    const double f = detail::parse_number(row.fields[0], ctx);
    const double az = detail::parse_number(row.fields[1], ctx);
    const double pol = detail::parse_number(row.fields[2], ctx);
    const double mic_d = detail::parse_number(row.fields[3], ctx);
    if (mic_d < 0.0 || mic_d != std::floor(mic_d) || mic_d > 1e6)
      throw ParseError(ctx + ": mic_index must be a non-negative integer");
    const auto mic = static_cast<std::size_t>(mic_d);
    const std::complex<double> value(detail::parse_number(row.fields[4], ctx), detail::parse_number(row.fields[5], ctx));
    const auto [it, inserted] = nodes.emplace(Key{f, az, pol, mic}, std::make_pair(value, row.line));
    if (!inserted)
      throw ParseError(ctx + ": duplicate grid node (already given on line " + std::to_string(it->second.second) + ")");
    freqs.insert(f);
    azs.insert(az);
    pols.insert(pol);
    max_mic = std::max(max_mic, mic);
  }

  std::vector<double> fg(freqs.begin(), freqs.end());
  std::vector<double> ag(azs.begin(), azs.end());
  std::vector<double> pg(pols.begin(), pols.end());
  const std::size_t mics = max_mic + 1;
  std::vector<std::complex<double>> samples;
  samples.reserve(fg.size() * ag.size() * pg.size() * mics);
  for (double f : fg)
    for (double az : ag)
      for (double pol : pg)
        for (std::size_t m = 0; m < mics; ++m) {
          const auto it = nodes.find(Key{f, az, pol, m});
          if (it == nodes.end())
            throw ParseError("scattering table: missing grid node freq_hz=" + detail::format_number(f) +
                             " azimuth_rad=" + detail::format_number(az) + " polar_rad=" + detail::format_number(pol) +
                             " mic_index=" + std::to_string(m));
          samples.push_back(it->second.first);
        }
  return ScatteringTable(std::move(fg), std::move(ag), std::move(pg), mics, std::move(samples));
}

ScatteringTable load_scattering_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scattering table " + path.string());
  return read_scattering_table(in);
}

void write_scattering_table(std::ostream& out, const ScatteringTable& table) {
  out << "freq_hz,azimuth_rad,polar_rad,mic_index,re,im\n";
  for (std::size_t f = 0; f < table.frequencies().size(); ++f)
    for (std::size_t a = 0; a < table.azimuths().size(); ++a)
      for (std::size_t p = 0; p < table.polars().size(); ++p)
        for (std::size_t m = 0; m < table.mic_count(); ++m) {
          const auto v = table.sample(f, a, p, m);
          out << detail::format_number(table.frequencies()[f]) << ',' << detail::format_number(table.azimuths()[a])
              << ',' << detail::format_number(table.polars()[p]) << ',' << m << ','
              << detail::format_number(v.real()) << ',' << detail::format_number(v.imag()) << '\n';
        }
}

void save_scattering_table(const std::filesystem::path& path, const ScatteringTable& table) {
  std::ostringstream buffer;
  write_scattering_table(buffer, table);
  detail::write_file_atomically(path, buffer.str());
}

}  // namespace arraycap
