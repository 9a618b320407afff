#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "arraycap/capacity.hpp"
#include "commands.hpp"

namespace fs = std::filesystem;
using namespace arraycap;

namespace {

const fs::path kConfigs = ARRAYCAP_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(ARRAYCAP_SCRATCH_DIR);
  fs::create_directories(dir);
  const fs::path p = dir / name;
  fs::remove(p);
  return p;
}

fs::path scratch_keep(const std::string& name) { return fs::path(ARRAYCAP_SCRATCH_DIR) / name; }

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "arraycap");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

CapacityMap read_map(const fs::path& p) {
  std::ifstream in(p);
  return read_capacity_map(in);
}

fs::path write_config(const std::string& name, const std::string& text) {
  const auto p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

const std::string kDiffuseLine = R"({
  "geometry": {"builder": "linear", "count": 3, "spacing_m": 0.03},
  "noise": {"model": "spherical", "sigma2": 1.0, "epsilon": 0.0},
  "snr_db": 6,
  "freq_hz": 1000,
  "azimuth_grid": {"count": 8},
  "frequency_grid": {"values": [0, 500, 1000]}
})";

}  // namespace

TEST_CASE("white noise azimuth scans are flat for every example array") {
  const double snr = db_to_linear(6.0);
  for (const auto& [name, m] : std::vector<std::pair<std::string, int>>{
           {"linear3_white", 3}, {"rect2x3_white", 6}, {"circular6_white", 6}}) {
    const auto out = scratch(name + ".csv");
    const auto r = invoke({"azimuth-scan", "--config", (kConfigs / (name + ".json")).string(), "--out", out.string()});
    REQUIRE(r.code == 0);
    const auto map = read_map(out);
    CHECK(map.values.size() == 360);
    for (double v : map.values) CHECK(std::abs(v - std::log2(1.0 + snr * m)) < 1e-10);
    CHECK(*map.find_metadata("snr_db") == "6");
  }
}

TEST_CASE("circular array scan has the sixfold symmetry") {
  const auto out = scratch("circ.csv");
  const auto svg = scratch("circ.svg");
  REQUIRE(invoke({"azimuth-scan", "--config", (kConfigs / "circular6_diffuse.json").string(), "--out", out.string(),
                  "--svg", svg.string()})
              .code == 0);
  const auto map = read_map(out);
  for (std::size_t i = 0; i < 360; ++i) CHECK(std::abs(map.values[i] - map.values[(i + 60) % 360]) < 1e-9);
  CHECK(slurp(svg).rfind("<svg", 0) == 0);
}

TEST_CASE("frequency scan end point matches an independent evaluation") {
  const auto out = scratch("freq.csv");
  REQUIRE(invoke({"frequency-scan", "--config", (kConfigs / "linear3_diffuse.json").string(), "--out", out.string()})
              .code == 0);
  const auto map = read_map(out);
  CHECK(map.axis.back() == 8000.0);
  // Endfire at 8 kHz, linear-3 at 3 cm, epsilon 0.01, from a NumPy dense solve.
  // Coherence at 3 cm is still about -0.22 here, so the white-noise limit is
  // only approached within 0.02 bits.
  CHECK(std::abs(map.values.back() - 3.6739260040458346) < 1e-9);
  CHECK(std::abs(map.values.back() - std::log2(1.0 + db_to_linear(6.0) * 3.0)) < 0.021);
}

TEST_CASE("frequency grid containing f = 0 with epsilon = 0 fails naming the frequency") {
  const auto cfg = write_config("zero.json", kDiffuseLine);
  const auto out = scratch("zero.csv");
  const auto r = invoke({"frequency-scan", "--config", cfg.string(), "--out", out.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("f = 0 Hz") != std::string::npos);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("flags override file values") {
  const auto cfg = write_config("override.json", kDiffuseLine);
  const auto a = scratch("override_a.csv");
  REQUIRE(invoke({"azimuth-scan", "--config", cfg.string(), "--out", a.string(), "--snr-db", "0", "--freq-hz", "2000"})
              .code == 0);
  const auto map = read_map(a);
  CHECK(*map.find_metadata("snr_db") == "0");
  CHECK(*map.find_metadata("freq_hz") == "2000");
}

TEST_CASE("broadband") {
  const auto weights = scratch("onehot.csv");
  std::ofstream(weights) << "freq_hz,weight\n1000,1\n";
  const std::string base = R"({
  "geometry": {"builder": "circular", "count": 6, "spacing_m": 0.03},
  "noise": {"model": "spherical", "epsilon": 0.01},
  "snr_db": 6, "freq_hz": 1000, "azimuth_grid": {"count": 24},
  "weights_file": "onehot.csv"
})";
  const auto cfg = write_config("bb.json", base);
  const auto bb = scratch("bb.csv");
  const auto az = scratch("bb_az.csv");
  REQUIRE(invoke({"broadband", "--config", cfg.string(), "--out", bb.string()}).code == 0);
  REQUIRE(invoke({"azimuth-scan", "--config", cfg.string(), "--out", az.string()}).code == 0);
  CHECK(read_map(bb).values == read_map(az).values);

  std::ofstream(weights) << "freq_hz,weight\n500,2\n1000,2\n";
  const auto r = invoke({"broadband", "--config", cfg.string(), "--out", bb.string()});
  CHECK(r.code == 0);
  CHECK(r.err.find("renormalized") != std::string::npos);

  const auto white = write_config("bb_white.json", R"({
  "geometry": {"builder": "linear", "count": 3, "spacing_m": 0.03},
  "noise": {"model": "incoherent"},
  "snr_db": 6, "azimuth_grid": {"count": 12},
  "frequency_grid": {"count": 5}
})");
  REQUIRE(invoke({"broadband", "--config", white.string(), "--out", bb.string()}).code == 0);
  for (double v : read_map(bb).values) CHECK(v == doctest::Approx(std::log2(1.0 + 3.0 * db_to_linear(6.0))).epsilon(1e-13));
}

TEST_CASE("config validation errors exit 2 and name the field") {
  const auto out = scratch("invalid.csv");
  auto check = [&](const std::string& text, const std::string& field) {
    const auto cfg = write_config("invalid.json", text);
    const auto r = invoke({"azimuth-scan", "--config", cfg.string(), "--out", out.string()});
    CHECK(r.code == 2);
    CHECK_MESSAGE(r.err.find(field) != std::string::npos, r.err);
    CHECK_FALSE(fs::exists(out));
  };
  check(R"({"geometry": {"builder": "linear", "count": 3, "spacing_m": 0.03}, "noise": {"model": "incoherent"},
            "snr_db": 6, "freq_hz": 1000, "azimuth_grid": {"count": 0}})",
        "azimuth_grid.count");
  check(R"({"geometry": {"builder": "linear", "count": 3, "spacing_m": 0.03}, "noise": {"model": "incoherent"},
            "snr_db": 6, "freq_hz": 1000, "azimuth_grid": {"values": []}})",
        "azimuth_grid.values");
  check(R"({"geometry": {"builder": "linear", "count": 3, "spacing_m": 0.03}, "noise": {"model": "pink"},
            "snr_db": 6, "freq_hz": 1000})",
        "noise.model");
  check(R"({"geometry": {"builder": "linear", "count": 3, "spacing_m": 0.03}, "noise": {"model": "incoherent"},
            "snr_db": 6, "freq_hz": 1000, "colour": 1})",
        "colour");
  check(R"({"geometry": {"builder": "linear", "count": 3, "spacing_m": -0.03}, "noise": {"model": "incoherent"},
            "snr_db": 6, "freq_hz": 1000})",
        "geometry");
  check(R"({"geometry": {"builder": "linear", "count": 3, "spacing_m": 0.03, "file": "g.json"},
            "noise": {"model": "incoherent"}, "snr_db": 6, "freq_hz": 1000})",
        "geometry");
  check(R"({"geometry": {"builder": "linear", "count": 3, "spacing_m": 0.03}, "noise": {"model": "spherical"},
            "freq_hz": 1000})",
        "snr_db");
  check("{not json", "JSON");
}

TEST_CASE("missing inputs exit 3") {
  CHECK(invoke({"azimuth-scan", "--config", scratch("nope.json").string()}).code == 3);
  const auto cfg = write_config("missing_geo.json", R"({"geometry": {"file": "no_such_geometry.json"},
    "noise": {"model": "incoherent"}, "snr_db": 6, "freq_hz": 1000})");
  const auto r = invoke({"azimuth-scan", "--config", cfg.string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("no_such_geometry.json") != std::string::npos);
}

TEST_CASE("geometry files, custom noise and interferers from config") {
  const auto geo = scratch("tri.json");
  std::ofstream(geo) << R"({"microphones": [
    {"label": "a", "x_m": 0.0, "y_m": 0.0, "z_m": 0.0},
    {"label": "b", "x_m": 0.03, "y_m": 0.0, "z_m": 0.0},
    {"label": "c", "x_m": 0.0, "y_m": 0.03, "z_m": 0.0}]})";
  const auto density = scratch("iso.csv");
  std::ofstream(density) << "freq_hz,azimuth_rad,polar_rad,power\n0,0,0,0.0795774715459\n0,0,3.14159265358979,0.0795774715459\n";
  const auto cfg = write_config("custom.json", R"({
    "geometry": {"file": "tri.json"},
    "noise": {"model": "custom", "density_file": "iso.csv", "epsilon": 0.01,
              "resolution": {"azimuth": 32, "polar": 16},
              "interferers": [{"azimuth_rad": 1.0, "power": 0.5}]},
    "snr_db": 3, "freq_hz": 1500, "azimuth_grid": {"count": 6}})");
  const auto r = invoke({"azimuth-scan", "--config", cfg.string()});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  const auto map = read_capacity_map(in);
  CHECK(map.values.size() == 6);
  CHECK(*map.find_metadata("geometry") == "tri");
  for (double v : map.values) CHECK(v > 0.0);
}

TEST_CASE("optimize writes a trace and geometry deterministically") {
  const auto trace_a = scratch("opt_a.csv");
  const auto trace_b = scratch("opt_b.csv");
  const auto cfg = (kConfigs / "pair_optimize.json").string();
  auto ra = invoke({"optimize", "--config", cfg, "--out", trace_a.string()});
  REQUIRE(ra.code == 0);
  auto rb = invoke({"optimize", "--config", cfg, "--out", trace_b.string()});
  REQUIRE(rb.code == 0);
  CHECK(slurp(trace_a) == slurp(trace_b));
  CHECK(slurp(scratch_keep("opt_a.geometry.json")) == slurp(scratch_keep("opt_b.geometry.json")));
}

TEST_CASE("validate") {
  const auto ok = invoke({"validate"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  const auto bad = invoke({"validate", "--inject-sinc-fault"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("FAIL sinc oracle") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"azimuth-scan"}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}
