#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "arraycap/capacity.hpp"
#include "arraycap/geometry.hpp"
#include "arraycap/noisefield.hpp"

namespace arraycap {

/// Feasible region for microphone placement. Axes where box_min == box_max
/// are frozen; the remaining axes are searched.
struct DesignConstraints {
  Vec3 box_min = Vec3::Constant(-0.1);
  Vec3 box_max = Vec3::Constant(0.1);
  double min_spacing = 0.01;
  std::vector<std::size_t> fixed;  ///< indices of immovable microphones

  /// Throws InvalidArgument on an inverted box, no free axis, or min_spacing <= 0.
  void validate() const;
  bool admits(const ArrayGeometry& geometry) const;
  std::vector<int> free_axes() const;
};

enum class Aggregation { MeanOverAzimuth, MinOverAzimuth };

struct DesignObjective {
  Aggregation aggregation = Aggregation::MeanOverAzimuth;
  std::vector<double> azimuths;
  SpectralWeights weights = SpectralWeights::one_hot(1000.0);
  NoiseModel noise;
  double snr_linear = 1.0;
  double polar = Direction::kHorizontal;
};

/// Broadband capacity per azimuth, reduced by mean or minimum over the grid.
double evaluate_objective(const ArrayGeometry& geometry, const DesignObjective& objective,
                          double speed_of_sound = kDefaultSpeedOfSound);

struct OptimizerSettings {
  std::size_t budget = 2000;  ///< maximum objective evaluations, including the initial one
  std::uint64_t seed = 1;
  double initial_step = 0.0;  ///< 0 selects a quarter of the largest free box extent
  double min_step = 1e-4;
  int restarts = 2;           ///< jittered restarts from the incumbent after the step collapses
};

struct TraceEntry {
  std::size_t evaluation;  ///< 1-based evaluation count when the improvement was found
  double step;
  double objective;
};

struct OptimizationReport {
  ArrayGeometry initial;
  ArrayGeometry final;
  std::vector<TraceEntry> trace;  ///< strictly increasing objective; trace[0] is the initial point
  std::size_t evaluations = 0;
  std::uint64_t seed = 0;

  double initial_objective() const { return trace.front().objective; }
  double final_objective() const { return trace.back().objective; }
};

/// Coordinate pattern search over microphone positions.
///
/// Each round tries +/- step along every free axis for every movable
/// microphone in a seeded random order and moves to any strictly better
/// feasible point. A round without an improvement halves the step. When the
/// step drops below `min_step` the search restarts from a jittered copy of
/// the incumbent while restarts remain, then stops. Infeasible proposals are
/// rejected without being evaluated.
OptimizationReport optimize_geometry(const ArrayGeometry& initial, const DesignConstraints& constraints,
                                     const DesignObjective& objective, const OptimizerSettings& settings,
                                     double speed_of_sound = kDefaultSpeedOfSound);

struct SpacingOptimum {
  double spacing;
  double objective;
};

/// Two microphones at (-s/2, 0, 0) and (+s/2, 0, 0).
ArrayGeometry pair_on_x(double spacing);

/// Exhaustive argmax of the objective over `spacings`; ties go to the smaller spacing.
SpacingOptimum brute_force_best_spacing(const std::vector<double>& spacings, const DesignObjective& objective,
                                        double speed_of_sound = kDefaultSpeedOfSound,
                                        const std::function<ArrayGeometry(double)>& family = pair_on_x);

/// CSV trace: metadata comments, then `accepted,evaluation,step_m,objective`.
void write_optimization_trace(std::ostream& out, const OptimizationReport& report);

}  // namespace arraycap
