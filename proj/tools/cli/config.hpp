#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "arraycap/capacity.hpp"
#include "arraycap/optimize.hpp"

namespace arraycap::cli {

struct OptimizeConfig {
  DesignConstraints constraints;
  Aggregation aggregation = Aggregation::MeanOverAzimuth;
  OptimizerSettings settings;
  std::optional<std::filesystem::path> geometry_out;
};

/// A fully loaded run: every referenced file has been read and checked.
struct RunConfig {
  explicit RunConfig(ArrayGeometry g) : geometry(std::move(g)) {}

  ArrayGeometry geometry;
  std::string geometry_id;
  NoiseModel noise;
  SourceSpec source = FarField{Direction(0.0, Direction::kHorizontal)};
  std::optional<double> snr_db;
  std::optional<double> freq_hz;
  std::vector<double> azimuths;
  std::vector<double> frequencies;
  std::optional<SpectralWeights> weights;
  bool weights_renormalized = false;
  double speed_of_sound = kDefaultSpeedOfSound;
  std::shared_ptr<const ScatteringTable> scattering;
  std::optional<std::filesystem::path> output;
  std::uint64_t seed = 1;
  bool has_optimize_section = false;
  OptimizeConfig optimize;
};

/// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<double> snr_db;
  std::optional<double> freq_hz;
  std::optional<std::string> output;
  std::optional<std::uint64_t> seed;
};

/// Parses a JSON config document. Relative input paths resolve against
/// `base_dir`; output paths are used as given. Throws InvalidArgument naming
/// the offending field, IoError for unreadable inputs.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir, const Overrides& overrides);

RunConfig load_config(const std::filesystem::path& path, const Overrides& overrides);

/// `count` points over [0, 2 pi).
std::vector<double> uniform_azimuths(int count);

/// `count` points from `min_hz` to `max_hz`, geometric when `logarithmic`.
std::vector<double> frequency_points(int count, double min_hz, double max_hz, bool logarithmic);

}  // namespace arraycap::cli
