#include "config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "arraycap/error.hpp"
#include "arraycap/text_io.hpp"

namespace arraycap::cli {

using json = nlohmann::json;

namespace {

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A JSON object whose keys are consumed as they are read; leftovers are
// reported as unknown fields.
class Section {
 public:
  Section(const json& value, std::string path) : value_(value), path_(std::move(path)) {
    if (!value_.is_object()) fail("", "must be an object");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw ConfigError("config field '" + field(key) + "' " + message);
  }

  std::string field(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return value_.contains(key); }

  const json* find(const std::string& key) {
    used_.insert(key);
    const auto it = value_.find(key);
    return it == value_.end() ? nullptr : &*it;
  }

  std::optional<double> number(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) fail(key, "must be a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) fail(key, "must be finite");
    return x;
  }

  double number(const std::string& key, double fallback) { return number(key).value_or(fallback); }

  double required_number(const std::string& key) {
    const auto x = number(key);
    if (!x) fail(key, "is required");
    return *x;
  }

  std::optional<long long> integer(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) fail(key, "must be an integer");
    return v->get<long long>();
  }

  std::optional<std::string> string(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) fail(key, "must be a string");
    return v->get<std::string>();
  }

  std::optional<std::vector<double>> numbers(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_array()) fail(key, "must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : *v) {
      if (!e.is_number() || !std::isfinite(e.get<double>())) fail(key, "must be an array of finite numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  Vec3 vec3(const std::string& key, const Vec3& fallback) {
    const auto v = numbers(key);
    if (!v) return fallback;
    if (v->size() != 3) fail(key, "must hold three coordinates");
    return Vec3((*v)[0], (*v)[1], (*v)[2]);
  }

  std::optional<Section> child(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    return Section(*v, field(key));
  }

  void finish() const {
    for (const auto& [key, _] : value_.items())
      if (!used_.count(key)) fail(key, "is not a recognized setting");
  }

 private:
  const json& value_;
  std::string path_;
  std::set<std::string> used_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

int positive_int(Section& s, const std::string& key, int fallback) {
  const auto v = s.integer(key);
  if (!v) return fallback;
  if (*v <= 0 || *v > 1'000'000) s.fail(key, "must be a positive integer");
  return static_cast<int>(*v);
}

// Re-raises domain errors from the core with the field name attached.
template <typename F>
auto with_field(const Section& s, const std::string& key, F&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    s.fail(key, std::string("is invalid: ") + e.what());
  }
}

std::pair<ArrayGeometry, std::string> parse_geometry(Section& s, const std::filesystem::path& base) {
  const auto builder = s.string("builder");
  const auto file = s.string("file");
  const auto id = s.string("id");
  if (builder.has_value() == file.has_value()) s.fail("", "needs exactly one of 'builder' or 'file'");
  if (file) {
    auto geometry = load_geometry(resolve(base, *file));
    s.finish();
    return {std::move(geometry), id.value_or(std::filesystem::path(*file).stem().string())};
  }
  const double spacing = s.required_number("spacing_m");
  std::string default_id;
  auto geometry = with_field(s, "builder", [&] {
    if (*builder == "linear") {
      const int count = positive_int(s, "count", 0);
      if (count == 0) s.fail("count", "is required");
      default_id = "linear-" + std::to_string(count);
      return build_linear(count, spacing);
    }
    if (*builder == "rectangular") {
      const int rows = positive_int(s, "rows", 0);
      const int cols = positive_int(s, "cols", 0);
      if (rows == 0 || cols == 0) s.fail("", "needs 'rows' and 'cols'");
      default_id = "rectangular-" + std::to_string(rows) + "x" + std::to_string(cols);
      return build_rectangular(rows, cols, spacing);
    }
    if (*builder == "circular") {
      const int count = positive_int(s, "count", 0);
      if (count == 0) s.fail("count", "is required");
      default_id = "circular-" + std::to_string(count);
      return build_circular(count, spacing);
    }
    s.fail("builder", "must be one of linear, rectangular, circular");
  });
  s.finish();
  return {std::move(geometry), id.value_or(default_id + "@" + format_number(spacing) + "m")};
}

SourceSpec parse_source(Section& s) {
  const double az = s.number("azimuth_rad", 0.0);
  const double polar = s.number("polar_rad", Direction::kHorizontal);
  const auto range = s.number("range_m");
  s.finish();
  const Direction dir = with_field(s, "", [&] { return Direction(az, polar); });
  if (range) {
    if (*range <= 0.0) s.fail("range_m", "must be positive");
    return NearField{*range, dir};
  }
  return FarField{dir};
}

NoiseModel parse_noise(Section& s, const std::filesystem::path& base) {
  const auto model = s.string("model");
  if (!model) s.fail("model", "is required");
  NoiseModel noise;
  const double epsilon = s.number("epsilon", 0.01);
  if (epsilon < 0.0) s.fail("epsilon", "must be nonnegative");
  if (*model == "custom") {
    if (s.has("sigma2")) s.fail("sigma2", "does not apply to custom noise; the density sets the power");
    const auto file = s.string("density_file");
    if (!file) s.fail("density_file", "is required for custom noise");
    QuadratureResolution res;
    if (auto r = s.child("resolution")) {
      res.azimuth = positive_int(*r, "azimuth", res.azimuth);
      res.polar = positive_int(*r, "polar", res.polar);
      r->finish();
      if (res.azimuth < 8 || res.polar < 4) s.fail("resolution", "must be at least 8 azimuth by 4 polar nodes");
    }
    auto density = std::make_shared<AngularDensity>(load_angular_density(resolve(base, *file)));
    noise.field = CustomNoise{std::move(density), res, epsilon};
  } else {
    const double sigma2 = s.number("sigma2", 1.0);
    if (sigma2 <= 0.0) s.fail("sigma2", "must be positive");
    if (*model == "incoherent")
      noise.field = IncoherentNoise{sigma2};
    else if (*model == "spherical")
      noise.field = SphericalDiffuseNoise{sigma2, epsilon};
    else if (*model == "cylindrical")
      noise.field = CylindricalDiffuseNoise{sigma2, epsilon};
    else
      s.fail("model", "must be one of incoherent, spherical, cylindrical, custom");
    if (s.has("density_file")) s.fail("density_file", "only applies to custom noise");
    if (s.has("resolution")) s.fail("resolution", "only applies to custom noise");
  }
  if (const json* list = s.find("interferers")) {
    if (!list->is_array()) s.fail("interferers", "must be an array");
    for (std::size_t i = 0; i < list->size(); ++i) {
      Section item((*list)[i], s.field("interferers") + "[" + std::to_string(i) + "]");
      const double power = item.number("power", 1.0);
      if (power < 0.0) item.fail("power", "must be nonnegative");
      const double az = item.number("azimuth_rad", 0.0);
      const double polar = item.number("polar_rad", Direction::kHorizontal);
      const auto range = item.number("range_m");
      item.finish();
      const Direction dir = with_field(item, "", [&] { return Direction(az, polar); });
      if (range && *range <= 0.0) item.fail("range_m", "must be positive");
      noise.interferers.push_back({range ? SourceSpec{NearField{*range, dir}} : SourceSpec{FarField{dir}}, power});
    }
  }
  s.finish();
  return noise;
}

std::vector<double> parse_azimuth_grid(Section& s) {
  std::vector<double> out;
  if (s.has("values")) {
    if (s.has("count")) s.fail("", "takes either 'values' or 'count'");
    out = *s.numbers("values");
    for (double a : out)
      if (a < 0.0 || a >= 2.0 * std::numbers::pi) s.fail("values", "must lie in [0, 2 pi)");
  } else {
    const auto count = s.integer("count");
    if (!count || *count <= 0) s.fail("count", "must be a positive integer");
    out = uniform_azimuths(static_cast<int>(*count));
  }
  if (out.empty()) s.fail("values", "must not be empty");
  s.finish();
  return out;
}

std::vector<double> parse_frequency_grid(Section& s) {
  std::vector<double> out;
  if (s.has("values")) {
    for (const char* k : {"count", "min_hz", "max_hz", "spacing"})
      if (s.has(k)) s.fail(k, "cannot be combined with 'values'");
    out = *s.numbers("values");
    if (out.empty()) s.fail("values", "must not be empty");
  } else {
    const auto count = s.integer("count");
    if (count && *count <= 0) s.fail("count", "must be a positive integer");
    const double lo = s.number("min_hz", 100.0);
    const double hi = s.number("max_hz", 8000.0);
    const std::string spacing = s.string("spacing").value_or("log");
    if (spacing != "log" && spacing != "linear") s.fail("spacing", "must be 'log' or 'linear'");
    if (lo < 0.0 || hi < lo) s.fail("", "needs 0 <= min_hz <= max_hz");
    if (spacing == "log" && lo <= 0.0) s.fail("min_hz", "must be positive for log spacing");
    out = frequency_points(count ? static_cast<int>(*count) : 100, lo, hi, spacing == "log");
  }
  for (double f : out)
    if (f < 0.0) s.fail("values", "must be nonnegative");
  s.finish();
  return out;
}

OptimizeConfig parse_optimize(Section& s) {
  OptimizeConfig o;
  o.constraints.box_min = s.vec3("box_min", o.constraints.box_min);
  o.constraints.box_max = s.vec3("box_max", o.constraints.box_max);
  o.constraints.min_spacing = s.number("min_spacing", o.constraints.min_spacing);
  if (const auto fixed = s.numbers("fixed")) {
    for (double i : *fixed) {
      if (i < 0.0 || i != std::floor(i)) s.fail("fixed", "must list microphone indices");
      o.constraints.fixed.push_back(static_cast<std::size_t>(i));
    }
  }
  const std::string agg = s.string("aggregation").value_or("mean");
  if (agg == "mean")
    o.aggregation = Aggregation::MeanOverAzimuth;
  else if (agg == "min")
    o.aggregation = Aggregation::MinOverAzimuth;
  else
    s.fail("aggregation", "must be 'mean' or 'min'");
  if (const auto budget = s.integer("budget")) {
    if (*budget <= 0) s.fail("budget", "must be a positive integer");
    o.settings.budget = static_cast<std::size_t>(*budget);
  }
  o.settings.initial_step = s.number("initial_step", o.settings.initial_step);
  o.settings.min_step = s.number("min_step", o.settings.min_step);
  if (const auto r = s.integer("restarts")) {
    if (*r < 0) s.fail("restarts", "must be nonnegative");
    o.settings.restarts = static_cast<int>(*r);
  }
  if (o.settings.initial_step < 0.0) s.fail("initial_step", "must be nonnegative");
  if (o.settings.min_step <= 0.0) s.fail("min_step", "must be positive");
  if (const auto out = s.string("geometry_out")) o.geometry_out = *out;
  s.finish();
  with_field(s, "", [&] {
    o.constraints.validate();
    return 0;
  });
  return o;
}

}  // namespace

std::vector<double> uniform_azimuths(int count) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(2.0 * std::numbers::pi * i / count);
  return out;
}

std::vector<double> frequency_points(int count, double min_hz, double max_hz, bool logarithmic) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out.push_back(logarithmic ? min_hz * std::pow(max_hz / min_hz, t) : min_hz + t * (max_hz - min_hz));
  }
  if (count > 1) out.back() = max_hz;
  return out;
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir, const Overrides& overrides) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  Section root(doc, "");

  auto geo_section = root.child("geometry");
  if (!geo_section) root.fail("geometry", "is required");
  auto [geometry, geometry_id] = parse_geometry(*geo_section, base_dir);
  RunConfig cfg(std::move(geometry));
  cfg.geometry_id = std::move(geometry_id);

  auto noise_section = root.child("noise");
  if (!noise_section) root.fail("noise", "is required");
  cfg.noise = parse_noise(*noise_section, base_dir);

  if (auto s = root.child("source")) cfg.source = parse_source(*s);

  cfg.snr_db = overrides.snr_db ? overrides.snr_db : root.number("snr_db");
  if (overrides.snr_db && !std::isfinite(*overrides.snr_db)) root.fail("snr_db", "must be finite");
  cfg.freq_hz = overrides.freq_hz ? overrides.freq_hz : root.number("freq_hz");
  if (overrides.freq_hz) root.find("freq_hz");
  if (overrides.snr_db) root.find("snr_db");
  if (cfg.freq_hz && !(*cfg.freq_hz >= 0.0 && std::isfinite(*cfg.freq_hz))) root.fail("freq_hz", "must be a nonnegative number");

  if (auto s = root.child("azimuth_grid"))
    cfg.azimuths = parse_azimuth_grid(*s);
  else
    cfg.azimuths = uniform_azimuths(360);
  if (auto s = root.child("frequency_grid"))
    cfg.frequencies = parse_frequency_grid(*s);
  else
    cfg.frequencies = frequency_points(100, 100.0, 8000.0, true);

  cfg.speed_of_sound = root.number("speed_of_sound", kDefaultSpeedOfSound);
  if (cfg.speed_of_sound <= 0.0) root.fail("speed_of_sound", "must be positive");

  if (const auto file = root.string("weights_file"))
    cfg.weights = load_spectral_weights(resolve(base_dir, *file), &cfg.weights_renormalized);
  if (const auto file = root.string("scattering_file")) {
    auto table = load_scattering_table(resolve(base_dir, *file));
    if (table.mic_count() != cfg.geometry.size())
      root.fail("scattering_file", "has " + std::to_string(table.mic_count()) + " microphones but the geometry has " +
                                       std::to_string(cfg.geometry.size()));
    cfg.scattering = std::make_shared<const ScatteringTable>(std::move(table));
  }

  const auto output = root.string("output");
  if (overrides.output)
    cfg.output = *overrides.output;
  else if (output)
    cfg.output = *output;

  if (const auto seed = root.integer("seed")) {
    if (*seed < 0) root.fail("seed", "must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(*seed);
  }
  if (overrides.seed) cfg.seed = *overrides.seed;

  if (auto s = root.child("optimize")) {
    cfg.has_optimize_section = true;
    cfg.optimize = parse_optimize(*s);
  }
  cfg.optimize.settings.seed = cfg.seed;
  root.finish();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const Overrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path(), overrides);
}

}  // namespace arraycap::cli
