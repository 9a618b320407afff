#include "arraycap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "arraycap/error.hpp"
#include "arraycap/hermitian_eigen.hpp"
#include "compensated_sum.hpp"
#include "text_io.hpp"

namespace arraycap {

Whitener::Whitener(Eigen::MatrixXcd basis, Eigen::VectorXd singular_values, double frequency)
    : basis_(std::move(basis)), singular_values_(std::move(singular_values)), frequency_(frequency) {
  if (basis_.rows() != basis_.cols() || basis_.rows() != singular_values_.size())
    throw InvalidArgument("whitener: basis and singular values disagree in size");
}

Whitener whiten(const NoiseCovariance& covariance) {
  auto eig = hermitian_eigen(covariance.matrix());
  const auto n = eig.values.size();
  const double top = eig.values(0);
  const double bottom = eig.values(n - 1);
  const double ratio = top > 0.0 ? bottom / top : 0.0;
  if (!(top > 0.0) || ratio < kRankTolerance)
    throw SingularCovariance("noise covariance is rank deficient (min/max eigenvalue ratio " +
                                 detail::format_number(ratio) + "); add an incoherent component epsilon > 0",
                             ratio);
  return Whitener(std::move(eig.vectors), std::move(eig.values), covariance.frequency());
}

Eigen::VectorXcd whitened_channel(const Whitener& whitener, const SteeringVector& steering) {
  if (static_cast<std::size_t>(steering.entries.size()) != whitener.size())
    throw InvalidArgument("steering vector and whitener sizes differ");
  Eigen::VectorXcd h = whitener.basis().adjoint() * steering.entries;
  for (Eigen::Index i = 0; i < h.size(); ++i) h(i) /= std::sqrt(whitener.singular_values()(i));
  return h;
}

double whitened_gain(const Whitener& whitener, const SteeringVector& steering) {
  return whitened_channel(whitener, steering).squaredNorm();
}

double capacity_bits(double snr_linear, double noise_power, double gain) {
  if (!(snr_linear >= 0.0) || !std::isfinite(snr_linear))
    throw InvalidArgument("SNR must be nonnegative and finite");
  return std::log1p(snr_linear * noise_power * gain) / std::log(2.0);
}

CapacityResult narrowband_capacity(const SteeringVector& steering, const NoiseCovariance& covariance,
                                   double snr_linear) {
  const auto w = whiten(covariance);
  const double value = capacity_bits(snr_linear, covariance.noise_power(), whitened_gain(w, steering));
  return {value, snr_linear, steering.frequency, steering.source};
}

double wiener_mmse(const SteeringVector& steering, const NoiseCovariance& covariance, double source_power) {
  if (!(source_power >= 0.0) || !std::isfinite(source_power))
    throw InvalidArgument("source power must be nonnegative and finite");
  if (source_power == 0.0) return 0.0;
  const double q = whitened_gain(whiten(covariance), steering);
  return source_power / (1.0 + source_power * q);
}

// ---------------------------------------------------------------------------

SpectralWeights::SpectralWeights(std::vector<double> frequencies, std::vector<double> weights)
    : frequencies_(std::move(frequencies)), weights_(std::move(weights)) {
  if (frequencies_.empty()) throw InvalidArgument("spectral weights: frequency grid is empty");
  if (frequencies_.size() != weights_.size())
    throw InvalidArgument("spectral weights: frequency and weight counts differ");
  for (std::size_t i = 0; i < frequencies_.size(); ++i) {
    if (!std::isfinite(frequencies_[i])) throw InvalidArgument("spectral weights: non-finite frequency");
    if (i > 0 && !(frequencies_[i] > frequencies_[i - 1]))
      throw InvalidArgument("spectral weights: frequencies must be strictly ascending");
    if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i]))
      throw InvalidArgument("spectral weights: weights must be nonnegative");
  }
  detail::CompensatedSum total;
  for (double w : weights_) total.add(w);
  if (std::abs(total.value() - 1.0) > 1e-12)
    throw InvalidArgument("spectral weights must sum to 1, got " + detail::format_number(total.value()));
}

SpectralWeights SpectralWeights::uniform(std::vector<double> frequencies) {
  std::sort(frequencies.begin(), frequencies.end());
  const std::size_t n = frequencies.size();
  std::vector<double> w(n, n ? 1.0 / static_cast<double>(n) : 0.0);
  return SpectralWeights(std::move(frequencies), std::move(w));
}

SpectralWeights SpectralWeights::one_hot(double frequency) { return SpectralWeights({frequency}, {1.0}); }

SpectralWeights SpectralWeights::normalized(std::vector<double> frequencies, std::vector<double> raw_weights,
                                            bool* renormalized) {
  if (frequencies.size() != raw_weights.size())
    throw InvalidArgument("spectral weights: frequency and weight counts differ");
  std::vector<std::size_t> order(frequencies.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frequencies[a] < frequencies[b]; });
  std::vector<double> f, w;
  detail::CompensatedSum total;
  for (std::size_t i : order) {
    f.push_back(frequencies[i]);
    w.push_back(raw_weights[i]);
    if (!(raw_weights[i] >= 0.0) || !std::isfinite(raw_weights[i]))
      throw InvalidArgument("spectral weights: weights must be nonnegative");
    total.add(raw_weights[i]);
  }
  const double sum = total.value();
  if (!(sum > 0.0)) throw InvalidArgument("spectral weights: weights sum to zero");
  const bool off = std::abs(sum - 1.0) > 1e-12;
  if (renormalized) *renormalized = off;
  if (off)
    for (double& x : w) x /= sum;
  return SpectralWeights(std::move(f), std::move(w));
}

SpectralWeights read_spectral_weights(std::istream& in, bool* renormalized) {
  const auto rows = detail::read_csv(in, {"freq_hz", "weight"}, "weights file");
  if (rows.empty()) throw ParseError("weights file: no data rows");
  std::vector<double> f, w;
  for (const auto& row : rows) {
    const std::string ctx = "weights file line " + std::to_string(row.line);
    f.push_back(detail::parse_number(row.fields[0], ctx));
    w.push_back(detail::parse_number(row.fields[1], ctx));
    if (w.back() < 0.0) throw ParseError(ctx + ": weight must be nonnegative");
    if (f.back() < 0.0) throw ParseError(ctx + ": frequency must be nonnegative");
  }
  try {
    return SpectralWeights::normalized(std::move(f), std::move(w), renormalized);
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("weights file: ") + e.what());
  }
}

SpectralWeights load_spectral_weights(const std::filesystem::path& path, bool* renormalized) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open weights file " + path.string());
  return read_spectral_weights(in, renormalized);
}

// ---------------------------------------------------------------------------

SteeringVector ArraySetup::steering_at(double frequency, const SourceSpec& source) const {
  auto d = steering(geometry, frequency, source, speed_of_sound);
  if (scattering) return total_steering(d, *scattering);
  return d;
}

NoiseCovariance ArraySetup::covariance_at(double frequency) const {
  return noise_covariance(noise, geometry, frequency, speed_of_sound);
}

namespace {

// Whitening factors for one frequency, reused across directions.
struct FrequencyContext {
  Whitener whitener;
  double noise_power;
};

FrequencyContext prepare(const ArraySetup& setup, double frequency) {
  try {
    const auto gamma = setup.covariance_at(frequency);
    return {whiten(gamma), gamma.noise_power()};
  } catch (const SingularCovariance& e) {
    throw SingularCovariance("at f = " + detail::format_number(frequency) + " Hz: " + e.what(), e.eigenvalue_ratio());
  } catch (const DegenerateCovariance& e) {
    throw DegenerateCovariance("at f = " + detail::format_number(frequency) + " Hz: " + e.what());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument("at f = " + detail::format_number(frequency) + " Hz: " + e.what());
  }
}

double capacity_with(const ArraySetup& setup, const FrequencyContext& ctx, double frequency,
                     const SourceSpec& source, double snr_linear) {
  const auto d = setup.steering_at(frequency, source);
  return capacity_bits(snr_linear, ctx.noise_power, whitened_gain(ctx.whitener, d));
}

void require_snr(double snr_linear) {
  if (!(snr_linear >= 0.0) || !std::isfinite(snr_linear))
    throw InvalidArgument("SNR must be nonnegative and finite");
}

std::string snr_db_text(double snr_linear) {
  return snr_linear > 0.0 ? detail::format_number(10.0 * std::log10(snr_linear)) : "-inf";
}

CapacityMap base_map(const ArraySetup& setup, std::string axis_name, double snr_linear) {
  CapacityMap map;
  map.axis_name = std::move(axis_name);
  map.metadata = {{"geometry", setup.geometry_id}, {"noise", setup.noise.id()}, {"snr_db", snr_db_text(snr_linear)}};
  return map;
}

}  // namespace

CapacityResult narrowband_capacity(const ArraySetup& setup, double frequency, const SourceSpec& source,
                                   double snr_linear) {
  require_snr(snr_linear);
  const auto ctx = prepare(setup, frequency);
  return {capacity_with(setup, ctx, frequency, source, snr_linear), snr_linear, frequency, source};
}

std::vector<double> broadband_azimuth_profile(const ArraySetup& setup, const SourceSpec& nominal,
                                              const std::vector<double>& azimuths, const SpectralWeights& weights,
                                              double snr_linear) {
  require_snr(snr_linear);
  std::vector<detail::CompensatedSum> sums(azimuths.size());
  std::vector<SourceSpec> sources;
  sources.reserve(azimuths.size());
  const double polar = direction_of(nominal).polar();
  for (double az : azimuths) sources.push_back(with_direction(nominal, Direction::wrapped(az, polar)));

  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double f = weights.frequencies()[i];
    const double w = weights.weights()[i];
    if (w == 0.0) continue;
    const auto ctx = prepare(setup, f);
    for (std::size_t a = 0; a < sources.size(); ++a) sums[a].add(w * capacity_with(setup, ctx, f, sources[a], snr_linear));
  }
  std::vector<double> out;
  out.reserve(sums.size());
  for (const auto& s : sums) out.push_back(s.value());
  return out;
}

double broadband_capacity(const ArraySetup& setup, const SourceSpec& source, const SpectralWeights& weights,
                          double snr_linear) {
  require_snr(snr_linear);
  detail::CompensatedSum sum;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights.weights()[i];
    if (w == 0.0) continue;
    const double f = weights.frequencies()[i];
    sum.add(w * capacity_with(setup, prepare(setup, f), f, source, snr_linear));
  }
  return sum.value();
}

GaussHermiteRule gauss_hermite(int points) {
  if (points < 1) throw InvalidArgument("Gauss-Hermite rule needs at least one point");
  const auto n = static_cast<Eigen::Index>(points);
  // Jacobi matrix of the probabilists' Hermite polynomials.
  Eigen::MatrixXcd jacobi = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) {
    jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
    jacobi(k, k - 1) = jacobi(k - 1, k);
  }
  const auto eig = hermitian_eigen(jacobi);
  GaussHermiteRule rule;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    rule.nodes.push_back(eig.values(i));
    rule.weights.push_back(std::norm(eig.vectors(0, i)));
  }
  // Snap the symmetric structure: nodes come in +/- pairs.
  for (std::size_t i = 0, j = rule.nodes.size() - 1; i < j; ++i, --j) {
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (points % 2 == 1) rule.nodes[rule.nodes.size() / 2] = 0.0;
  detail::CompensatedSum total;
  for (double w : rule.weights) total.add(w);
  for (double& w : rule.weights) w /= total.value();
  return rule;
}

double expected_capacity_under_position_uncertainty(const ArraySetup& setup, const SourceSpec& nominal,
                                                    const SpectralWeights& weights,
                                                    const AzimuthUncertainty& uncertainty, double snr_linear) {
  if (!(uncertainty.stddev >= 0.0) || !std::isfinite(uncertainty.stddev))
    throw InvalidArgument("azimuth error standard deviation must be nonnegative");
  if (uncertainty.points < 1 || uncertainty.points % 2 == 0)
    throw InvalidArgument("azimuth quadrature order must be a positive odd number");
  if (uncertainty.stddev == 0.0) return broadband_capacity(setup, nominal, weights, snr_linear);

  const auto rule = gauss_hermite(uncertainty.points);
  std::vector<double> azimuths;
  for (double x : rule.nodes) azimuths.push_back(direction_of(nominal).azimuth() + uncertainty.stddev * x);
  const auto profile = broadband_azimuth_profile(setup, nominal, azimuths, weights, snr_linear);
  detail::CompensatedSum sum;
  for (std::size_t i = 0; i < profile.size(); ++i) sum.add(rule.weights[i] * profile[i]);
  return sum.value();
}

// ---------------------------------------------------------------------------

CapacityMap azimuth_scan(const ArraySetup& setup, double frequency, const SourceSpec& nominal,
                         const std::vector<double>& azimuths, double snr_linear) {
  if (azimuths.empty()) throw InvalidArgument("azimuth scan: grid is empty");
  require_snr(snr_linear);
  auto map = base_map(setup, "azimuth_rad", snr_linear);
  map.metadata.emplace_back("freq_hz", detail::format_number(frequency));
  map.metadata.emplace_back("polar_rad", detail::format_number(direction_of(nominal).polar()));
  if (const auto* near = std::get_if<NearField>(&nominal))
    map.metadata.emplace_back("range_m", detail::format_number(near->range));
  const auto ctx = prepare(setup, frequency);
  const double polar = direction_of(nominal).polar();
  map.axis = azimuths;
  map.values.reserve(azimuths.size());
  for (double az : azimuths)
    map.values.push_back(
        capacity_with(setup, ctx, frequency, with_direction(nominal, Direction::wrapped(az, polar)), snr_linear));
  return map;
}

CapacityMap frequency_scan(const ArraySetup& setup, const SourceSpec& source, const std::vector<double>& frequencies,
                           double snr_linear) {
  if (frequencies.empty()) throw InvalidArgument("frequency scan: grid is empty");
  require_snr(snr_linear);
  auto map = base_map(setup, "freq_hz", snr_linear);
  map.metadata.emplace_back("source", describe(source));
  map.axis = frequencies;
  map.values.reserve(frequencies.size());
  for (double f : frequencies) map.values.push_back(capacity_with(setup, prepare(setup, f), f, source, snr_linear));
  return map;
}

CapacityMap broadband_scan(const ArraySetup& setup, const SourceSpec& nominal, const std::vector<double>& azimuths,
                           const SpectralWeights& weights, double snr_linear) {
  if (azimuths.empty()) throw InvalidArgument("broadband scan: azimuth grid is empty");
  auto map = base_map(setup, "azimuth_rad", snr_linear);
  map.metadata.emplace_back("freq_hz", detail::format_number(weights.frequencies().front()) + ".." +
                                           detail::format_number(weights.frequencies().back()) + "(" +
                                           std::to_string(weights.size()) + " weighted)");
  map.metadata.emplace_back("polar_rad", detail::format_number(direction_of(nominal).polar()));
  map.axis = azimuths;
  map.values = broadband_azimuth_profile(setup, nominal, azimuths, weights, snr_linear);
  return map;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace arraycap
