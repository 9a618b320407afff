#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "arraycap/wavefield.hpp"

namespace arraycap {

/// Tabulated scattered field d^(S) on a (frequency x azimuth x polar) grid,
/// one complex value per microphone at each node. Immutable after
/// construction.
class ScatteringTable {
 public:
  /// `samples` is laid out frequency-major, then azimuth, then polar, then
  /// microphone. Grids must be strictly ascending and non-empty.
  ScatteringTable(std::vector<double> frequencies, std::vector<double> azimuths, std::vector<double> polars,
                  std::size_t mic_count, std::vector<std::complex<double>> samples);

  /// Table of zeros on the given grid.
  static ScatteringTable zeros(std::vector<double> frequencies, std::vector<double> azimuths,
                               std::vector<double> polars, std::size_t mic_count);

  const std::vector<double>& frequencies() const noexcept { return frequencies_; }
  const std::vector<double>& azimuths() const noexcept { return azimuths_; }
  const std::vector<double>& polars() const noexcept { return polars_; }
  std::size_t mic_count() const noexcept { return mic_count_; }
  const std::vector<std::complex<double>>& samples() const noexcept { return samples_; }

  std::complex<double> sample(std::size_t f, std::size_t az, std::size_t pol, std::size_t mic) const {
    return samples_.at(index(f, az, pol, mic));
  }

  /// Multilinear interpolation of the scattered field. Throws OutOfRange if
  /// the query lies outside the grid hull on any axis.
  Eigen::VectorXcd interpolate(double frequency, const Direction& direction) const;

  bool operator==(const ScatteringTable&) const = default;

 private:
  std::size_t index(std::size_t f, std::size_t az, std::size_t pol, std::size_t mic) const {
    return ((f * azimuths_.size() + az) * polars_.size() + pol) * mic_count_ + mic;
  }

  std::vector<double> frequencies_;
  std::vector<double> azimuths_;
  std::vector<double> polars_;
  std::size_t mic_count_;
  std::vector<std::complex<double>> samples_;
};

/// d = d^(I) + d^(S). The result is not unit modulus in general.
SteeringVector total_steering(const SteeringVector& incident, const ScatteringTable& table);

// CSV with header `freq_hz,azimuth_rad,polar_rad,mic_index,re,im`; rows in any
// order, but the node set must form a complete Cartesian grid.
ScatteringTable read_scattering_table(std::istream& in);
ScatteringTable load_scattering_table(const std::filesystem::path& path);
void write_scattering_table(std::ostream& out, const ScatteringTable& table);
void save_scattering_table(const std::filesystem::path& path, const ScatteringTable& table);

}  // namespace arraycap
