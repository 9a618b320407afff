#include "arraycap/geometry.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "arraycap/error.hpp"
#include "text_io.hpp"

namespace arraycap {

ArrayGeometry::ArrayGeometry(std::vector<Vec3> positions, std::vector<std::string> labels)
    : positions_(std::move(positions)), labels_(std::move(labels)) {
  if (positions_.empty()) throw InvalidArgument("geometry: at least one microphone is required");
  if (labels_.empty()) {
    labels_.reserve(positions_.size());
    for (std::size_t i = 0; i < positions_.size(); ++i) labels_.push_back("m" + std::to_string(i));
  }
  if (labels_.size() != positions_.size())
    throw InvalidArgument("geometry: label count does not match microphone count");
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (!positions_[i].allFinite())
      throw InvalidArgument("geometry: microphone " + labels_[i] + " has a non-finite coordinate");
    for (std::size_t j = 0; j < i; ++j) {
      if ((positions_[i] - positions_[j]).norm() <= 0.0)
        throw InvalidArgument("geometry: microphones " + labels_[j] + " and " + labels_[i] + " coincide");
    }
  }
}

Vec3 ArrayGeometry::centroid() const {
  Vec3 sum = Vec3::Zero();
  for (const auto& p : positions_) sum += p;
  return sum / static_cast<double>(positions_.size());
}

double ArrayGeometry::max_radius() const {
  double r = 0.0;
  for (const auto& p : positions_) r = std::max(r, p.norm());
  return r;
}

ArrayGeometry ArrayGeometry::translated(const Vec3& offset) const {
  std::vector<Vec3> moved = positions_;
  for (auto& p : moved) p += offset;
  return ArrayGeometry(std::move(moved), labels_);
}

ArrayGeometry ArrayGeometry::rotated(const Eigen::Matrix3d& rotation) const {
  std::vector<Vec3> moved = positions_;
  for (auto& p : moved) p = rotation * p;
  return ArrayGeometry(std::move(moved), labels_);
}

ArrayGeometry ArrayGeometry::with_position(std::size_t index, const Vec3& position) const {
  std::vector<Vec3> moved = positions_;
  moved.at(index) = position;
  return ArrayGeometry(std::move(moved), labels_);
}

DistanceMatrix::DistanceMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw InvalidArgument("distance matrix must be square");
}

namespace {

// Subtracting the centroid leaves ~1e-18 residue; snap it so the centered
// layouts are exactly symmetric about the origin.
std::vector<Vec3> centered(std::vector<Vec3> points) {
  Vec3 c = Vec3::Zero();
  for (const auto& p : points) c += p;
  c /= static_cast<double>(points.size());
  for (auto& p : points) {
    p -= c;
    for (int k = 0; k < 3; ++k)
      if (std::abs(p[k]) < 1e-15) p[k] = 0.0;
  }
  return points;
}

void require_spacing(double spacing) {
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw InvalidArgument("geometry: spacing must be positive and finite");
}

}  // namespace

ArrayGeometry build_linear(int count, double spacing) {
  return build_rectangular(1, count, spacing);
}

ArrayGeometry build_rectangular(int rows, int cols, double spacing) {
  if (rows < 1 || cols < 1) throw InvalidArgument("geometry: row and column counts must be at least 1");
  require_spacing(spacing);
  std::vector<Vec3> points;
  points.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) points.emplace_back(c * spacing, r * spacing, 0.0);
  return ArrayGeometry(centered(std::move(points)));
}

ArrayGeometry build_circular(int count, double adjacent_spacing) {
  if (count < 2) throw InvalidArgument("geometry: a circular array needs at least 2 microphones");
  require_spacing(adjacent_spacing);
  const double radius = adjacent_spacing / (2.0 * std::sin(std::numbers::pi / count));
  std::vector<Vec3> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / count;
    points.emplace_back(radius * std::cos(angle), radius * std::sin(angle), 0.0);
  }
  // Already centered analytically; only clean the round-off.
  for (auto& p : points)
    for (int k = 0; k < 3; ++k)
      if (std::abs(p[k]) < 1e-15 * radius) p[k] = 0.0;
  return ArrayGeometry(std::move(points));
}

DistanceMatrix pairwise_distances(const ArrayGeometry& geometry) {
  const auto m = static_cast<Eigen::Index>(geometry.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double l = (geometry.position(static_cast<std::size_t>(i)) -
                        geometry.position(static_cast<std::size_t>(j))).norm();
      d(i, j) = l;
      d(j, i) = l;
    }
  }
  return DistanceMatrix(std::move(d));
}

Eigen::Matrix3d rotation_z(double angle) {
  return Eigen::AngleAxisd(angle, Vec3::UnitZ()).toRotationMatrix();
}

ArrayGeometry read_geometry(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("geometry file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("microphones") || !doc["microphones"].is_array())
    throw ParseError("geometry file: expected an object with a \"microphones\" array");
  std::vector<Vec3> positions;
  std::vector<std::string> labels;
  std::size_t index = 0;
  for (const auto& mic : doc["microphones"]) {
    const std::string where = "geometry file: microphones[" + std::to_string(index) + "]";
    if (!mic.is_object()) throw ParseError(where + " is not an object");
    for (const char* key : {"x_m", "y_m", "z_m"}) {
      if (!mic.contains(key) || !mic[key].is_number()) throw ParseError(where + " is missing numeric field " + key);
    }
    positions.emplace_back(mic["x_m"].get<double>(), mic["y_m"].get<double>(), mic["z_m"].get<double>());
    labels.push_back(mic.contains("label") ? mic["label"].get<std::string>() : "m" + std::to_string(index));
    ++index;
  }
  try {
    return ArrayGeometry(std::move(positions), std::move(labels));
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("geometry file: ") + e.what());
  }
}

ArrayGeometry load_geometry(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open geometry file " + path.string());
  return read_geometry(in);
}

void write_geometry(std::ostream& out, const ArrayGeometry& geometry) {
  // Hand-written so numbers use shortest round-trip formatting.
  out << "{\n  \"microphones\": [\n";
  for (std::size_t i = 0; i < geometry.size(); ++i) {
    const auto& p = geometry.position(i);
    out << "    {\"label\": " << nlohmann::json(geometry.labels()[i]).dump() << ", \"x_m\": " << detail::format_number(p.x())
        << ", \"y_m\": " << detail::format_number(p.y()) << ", \"z_m\": " << detail::format_number(p.z()) << "}"
        << (i + 1 < geometry.size() ? ",\n" : "\n");
  }
  out << "  ]\n}\n";
}

void save_geometry(const std::filesystem::path& path, const ArrayGeometry& geometry) {
  std::ostringstream buffer;
  write_geometry(buffer, geometry);
  detail::write_file_atomically(path, buffer.str());
}

}  // namespace arraycap
