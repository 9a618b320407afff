#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace arraycap {

using Vec3 = Eigen::Vector3d;

/// Microphone positions in meters, Cartesian, in a fixed order.
///
/// Construction validates that there is at least one microphone, all
/// coordinates are finite and no two microphones coincide. Immutable after
/// construction.
class ArrayGeometry {
 public:
  explicit ArrayGeometry(std::vector<Vec3> positions, std::vector<std::string> labels = {});

  std::size_t size() const noexcept { return positions_.size(); }
  const std::vector<Vec3>& positions() const noexcept { return positions_; }
  const Vec3& position(std::size_t i) const { return positions_.at(i); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  Vec3 centroid() const;
  /// Largest distance of any microphone from the coordinate origin.
  double max_radius() const;

  ArrayGeometry translated(const Vec3& offset) const;
  ArrayGeometry rotated(const Eigen::Matrix3d& rotation) const;
  ArrayGeometry recentered() const { return translated(-centroid()); }
  /// Copy with the position of microphone `index` replaced; labels kept.
  ArrayGeometry with_position(std::size_t index, const Vec3& position) const;

 private:
  std::vector<Vec3> positions_;
  std::vector<std::string> labels_;
};

/// Symmetric matrix of Euclidean distances between microphones.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(Eigen::MatrixXd entries);

  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  double operator()(std::size_t m, std::size_t n) const {
    return entries_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  }
  const Eigen::MatrixXd& matrix() const noexcept { return entries_; }

 private:
  Eigen::MatrixXd entries_;
};

/// `count` microphones along x with uniform spacing, centered on the origin.
ArrayGeometry build_linear(int count, double spacing);

/// rows x cols grid in the x-y plane; columns advance along x, rows along y.
ArrayGeometry build_rectangular(int rows, int cols, double spacing);

/// Uniform circle in the x-y plane with the first microphone on +x. The
/// radius is chosen so that the chord between neighbours equals
/// `adjacent_spacing`.
ArrayGeometry build_circular(int count, double adjacent_spacing);

DistanceMatrix pairwise_distances(const ArrayGeometry& geometry);

/// Rotation by `angle` radians about +z.
Eigen::Matrix3d rotation_z(double angle);

// Geometry file: {"microphones": [{"label": "m0", "x_m": 0, "y_m": 0, "z_m": 0}, ...]}
ArrayGeometry read_geometry(std::istream& in);
ArrayGeometry load_geometry(const std::filesystem::path& path);
void write_geometry(std::ostream& out, const ArrayGeometry& geometry);
void save_geometry(const std::filesystem::path& path, const ArrayGeometry& geometry);

}  // namespace arraycap
