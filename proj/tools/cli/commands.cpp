#include "commands.hpp"

#include <filesystem>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "arraycap/error.hpp"
#include "arraycap/special.hpp"
#include "arraycap/text_io.hpp"
#include "arraycap/validation.hpp"
#include "config.hpp"
#include "svg.hpp"

namespace arraycap::cli {

namespace {

struct Options {
  std::string config;
  Overrides overrides;
  std::string svg;
  bool inject_sinc_fault = false;
};

ArraySetup make_setup(const RunConfig& cfg) {
  return ArraySetup{cfg.geometry, cfg.noise, cfg.speed_of_sound, cfg.scattering, cfg.geometry_id};
}

double require_snr_db(const RunConfig& cfg) {
  if (!cfg.snr_db) throw InvalidArgument("config field 'snr_db' is required (or pass --snr-db)");
  return *cfg.snr_db;
}

double require_freq(const RunConfig& cfg) {
  if (!cfg.freq_hz) throw InvalidArgument("config field 'freq_hz' is required (or pass --freq-hz)");
  return *cfg.freq_hz;
}

// Writes to `path` when set, else to stdout. Progress notes go to stderr so
// stdout carries only data.
void emit(const std::optional<std::filesystem::path>& path, const std::string& contents, const std::string& what,
          std::ostream& out, std::ostream& err) {
  if (path) {
    write_file_atomically(*path, contents);
    err << "wrote " << what << " to " << path->string() << '\n';
  } else {
    out << contents;
  }
}

int finish_map(CapacityMap map, double snr_db, const RunConfig& cfg, const Options& opt, std::ostream& out,
               std::ostream& err) {
  map.set_metadata("snr_db", format_number(snr_db));
  const std::string csv = capacity_map_csv(map);
  const std::string svg = opt.svg.empty() ? std::string() : render_svg(map);
  emit(cfg.output, csv, std::to_string(map.values.size()) + " rows", out, err);
  if (!opt.svg.empty()) emit(std::filesystem::path(opt.svg), svg, "plot", out, err);
  return kExitOk;
}

RunConfig load(const Options& opt) { return load_config(opt.config, opt.overrides); }

int cmd_azimuth_scan(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto cfg = load(opt);
  const double snr_db = require_snr_db(cfg);
  const double f = require_freq(cfg);
  const auto map = azimuth_scan(make_setup(cfg), f, cfg.source, cfg.azimuths, db_to_linear(snr_db));
  return finish_map(map, snr_db, cfg, opt, out, err);
}

int cmd_frequency_scan(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto cfg = load(opt);
  const double snr_db = require_snr_db(cfg);
  const auto map = frequency_scan(make_setup(cfg), cfg.source, cfg.frequencies, db_to_linear(snr_db));
  return finish_map(map, snr_db, cfg, opt, out, err);
}

SpectralWeights broadband_weights(const RunConfig& cfg, std::ostream& err) {
  if (cfg.weights) {
    if (cfg.weights_renormalized) err << "warning: spectral weights did not sum to 1; renormalized\n";
    return *cfg.weights;
  }
  return SpectralWeights::uniform(cfg.frequencies);
}

int cmd_broadband(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto cfg = load(opt);
  const double snr_db = require_snr_db(cfg);
  const auto weights = broadband_weights(cfg, err);
  const auto map = broadband_scan(make_setup(cfg), cfg.source, cfg.azimuths, weights, db_to_linear(snr_db));
  return finish_map(map, snr_db, cfg, opt, out, err);
}

int cmd_optimize(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto cfg = load(opt);
  const double snr_db = require_snr_db(cfg);
  if (cfg.scattering) throw InvalidArgument("config field 'scattering_file' cannot be used with optimize");
  if (!opt.svg.empty()) throw InvalidArgument("--svg is not available for optimize");

  DesignObjective objective;
  objective.aggregation = cfg.optimize.aggregation;
  objective.azimuths = cfg.azimuths;
  if (cfg.weights)
    objective.weights = broadband_weights(cfg, err);
  else if (cfg.freq_hz)
    objective.weights = SpectralWeights::one_hot(*cfg.freq_hz);
  else
    objective.weights = SpectralWeights::uniform(cfg.frequencies);
  objective.noise = cfg.noise;
  objective.snr_linear = db_to_linear(snr_db);
  objective.polar = direction_of(cfg.source).polar();

  std::optional<std::filesystem::path> geometry_out = cfg.optimize.geometry_out;
  if (!geometry_out && cfg.output) {
    geometry_out = *cfg.output;
    geometry_out->replace_extension(".geometry.json");
  }

  const auto report =
      optimize_geometry(cfg.geometry, cfg.optimize.constraints, objective, cfg.optimize.settings, cfg.speed_of_sound);

  std::ostringstream trace;
  write_optimization_trace(trace, report);
  std::ostringstream geometry;
  write_geometry(geometry, report.final);
  emit(cfg.output, trace.str(), "trace", out, err);
  if (geometry_out) emit(geometry_out, geometry.str(), "optimized geometry", out, err);
  err << "objective " << format_number(report.initial_objective()) << " -> "
      << format_number(report.final_objective()) << " bits/s/Hz after " << report.evaluations << " evaluations\n";
  return kExitOk;
}

int cmd_validate(const Options& opt, std::ostream& out) {
  auto options = default_validation_options();
  if (opt.inject_sinc_fault) options.sinc = [](double x) { return special::sinc(x) * (1.0 + 1e-6); };
  const auto results = run_validation(options);
  std::size_t passed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    passed += r.passed ? 1 : 0;
  }
  out << passed << '/' << results.size() << " checks passed\n";
  return passed == results.size() ? kExitOk : kExitCheckFailed;
}

void add_run_options(CLI::App* sub, Options& opt, bool with_svg) {
  sub->add_option("--config", opt.config, "JSON run configuration")->required();
  sub->add_option("--snr-db", opt.overrides.snr_db, "per-microphone SNR in dB (overrides config)");
  sub->add_option("--freq-hz", opt.overrides.freq_hz, "narrowband frequency in Hz (overrides config)");
  sub->add_option("--out", opt.overrides.output, "output path (overrides config; stdout when unset)");
  sub->add_option("--seed", opt.overrides.seed, "random seed (overrides config)");
  if (with_svg) sub->add_option("--svg", opt.svg, "also write an SVG plot here");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Microphone array SIMO channel capacity"};
  app.name(args.empty() ? "arraycap" : std::filesystem::path(args.front()).filename().string());
  app.require_subcommand(1);
  Options opt;

  auto* azimuth = app.add_subcommand("azimuth-scan", "capacity over source azimuth at one frequency");
  auto* frequency = app.add_subcommand("frequency-scan", "capacity over frequency for one source");
  auto* broadband = app.add_subcommand("broadband", "spectrally weighted capacity over source azimuth");
  auto* optimize = app.add_subcommand("optimize", "search microphone positions for higher capacity");
  auto* validate = app.add_subcommand("validate", "run the built-in oracle checks");
  add_run_options(azimuth, opt, true);
  add_run_options(frequency, opt, true);
  add_run_options(broadband, opt, true);
  add_run_options(optimize, opt, false);
  validate->add_flag("--inject-sinc-fault", opt.inject_sinc_fault, "corrupt sinc to exercise failure reporting")
      ->group("");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*azimuth) return cmd_azimuth_scan(opt, out, err);
    if (*frequency) return cmd_frequency_scan(opt, out, err);
    if (*broadband) return cmd_broadband(opt, out, err);
    if (*optimize) return cmd_optimize(opt, out, err);
    return cmd_validate(opt, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace arraycap::cli
