#include "arraycap/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <ostream>

#include "arraycap/error.hpp"
#include "compensated_sum.hpp"
#include "text_io.hpp"

namespace arraycap {

void DesignConstraints::validate() const {
  if (!box_min.allFinite() || !box_max.allFinite()) throw InvalidArgument("design box must be finite");
  for (int k = 0; k < 3; ++k)
    if (box_max[k] < box_min[k]) throw InvalidArgument("design box is inverted along axis " + std::to_string(k));
  if (free_axes().empty()) throw InvalidArgument("design box has no free axis");
  if (!(min_spacing > 0.0) || !std::isfinite(min_spacing))
    throw InvalidArgument("minimum microphone spacing must be positive");
}

std::vector<int> DesignConstraints::free_axes() const {
  std::vector<int> axes;
  for (int k = 0; k < 3; ++k)
    if (box_max[k] > box_min[k]) axes.push_back(k);
  return axes;
}

bool DesignConstraints::admits(const ArrayGeometry& geometry) const {
  for (const auto& p : geometry.positions())
    for (int k = 0; k < 3; ++k)
      if (p[k] < box_min[k] || p[k] > box_max[k]) return false;
  const auto& pos = geometry.positions();
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = i + 1; j < pos.size(); ++j)
      if ((pos[i] - pos[j]).norm() < min_spacing) return false;
  return true;
}

double evaluate_objective(const ArrayGeometry& geometry, const DesignObjective& objective, double speed_of_sound) {
  if (objective.azimuths.empty()) throw InvalidArgument("design objective: azimuth grid is empty");
  ArraySetup setup{geometry, objective.noise, speed_of_sound, nullptr, "candidate"};
  const SourceSpec nominal = FarField{Direction::wrapped(objective.azimuths.front(), objective.polar)};
  const auto profile =
      broadband_azimuth_profile(setup, nominal, objective.azimuths, objective.weights, objective.snr_linear);
  if (objective.aggregation == Aggregation::MinOverAzimuth) return *std::min_element(profile.begin(), profile.end());
  detail::CompensatedSum sum;
  for (double v : profile) sum.add(v);
  return sum.value() / static_cast<double>(profile.size());
}

namespace {

struct Move {
  std::size_t mic;
  int axis;
  double sign;
};

// Portable Fisher-Yates; std::shuffle's draw sequence is implementation defined.
template <typename T>
void shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw;
    do {
      draw = rng();
    } while (draw >= limit);
    std::swap(items[i - 1], items[static_cast<std::size_t>(draw % bound)]);
  }
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

OptimizationReport optimize_geometry(const ArrayGeometry& initial, const DesignConstraints& constraints,
                                     const DesignObjective& objective, const OptimizerSettings& settings,
                                     double speed_of_sound) {
  constraints.validate();
  if (settings.budget < 1) throw InvalidArgument("optimizer budget must be at least 1");
  if (!constraints.admits(initial)) throw InvalidArgument("initial geometry violates the design constraints");
  for (std::size_t idx : constraints.fixed)
    if (idx >= initial.size()) throw InvalidArgument("fixed microphone index out of range");

  const auto axes = constraints.free_axes();
  double extent = 0.0;
  for (int k : axes) extent = std::max(extent, constraints.box_max[k] - constraints.box_min[k]);
  const double initial_step = settings.initial_step > 0.0 ? settings.initial_step : 0.25 * extent;

  std::vector<Move> moves;
  for (std::size_t m = 0; m < initial.size(); ++m) {
    if (std::find(constraints.fixed.begin(), constraints.fixed.end(), m) != constraints.fixed.end()) continue;
    for (int k : axes) {
      moves.push_back({m, k, +1.0});
      moves.push_back({m, k, -1.0});
    }
  }

  std::mt19937_64 rng(settings.seed);
  OptimizationReport report{initial, initial, {}, 0, settings.seed};

  auto evaluate = [&](const ArrayGeometry& g) {
    ++report.evaluations;
    return evaluate_objective(g, objective, speed_of_sound);
  };

  double step = initial_step;
  ArrayGeometry current = initial;
  double current_value = evaluate(current);
  double best_value = current_value;
  report.trace.push_back({report.evaluations, step, best_value});
  int restarts_left = settings.restarts;

  auto consider = [&](const ArrayGeometry& candidate, double value) {
    if (value > current_value) {
      current = candidate;
      current_value = value;
    }
    if (value > best_value) {
      best_value = value;
      report.final = candidate;
      report.trace.push_back({report.evaluations, step, value});
    }
  };

  while (!moves.empty() && report.evaluations < settings.budget) {
    shuffle(moves, rng);
    bool improved = false;
    for (const auto& mv : moves) {
      if (report.evaluations >= settings.budget) break;
      Vec3 p = current.position(mv.mic);
      p[mv.axis] += mv.sign * step;
      if (p[mv.axis] < constraints.box_min[mv.axis] || p[mv.axis] > constraints.box_max[mv.axis]) continue;
      bool clear = true;
      for (std::size_t j = 0; j < current.size() && clear; ++j)
        if (j != mv.mic && (current.position(j) - p).norm() < constraints.min_spacing) clear = false;
      if (!clear) continue;
      const auto candidate = current.with_position(mv.mic, p);
      const double value = evaluate(candidate);
      if (value > current_value) improved = true;
      consider(candidate, value);
    }
    if (improved) continue;
    step *= 0.5;
    if (step >= settings.min_step) continue;
    if (restarts_left-- <= 0 || report.evaluations >= settings.budget) break;

    // Restart: jitter every movable microphone of the incumbent by up to one
    // initial step, retrying until the result is feasible.
    step = initial_step;
    bool placed = false;
    for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
      std::vector<Vec3> pos = report.final.positions();
      for (std::size_t m = 0; m < pos.size(); ++m) {
        if (std::find(constraints.fixed.begin(), constraints.fixed.end(), m) != constraints.fixed.end()) continue;
        for (int k : axes) pos[m][k] += (2.0 * unit_uniform(rng) - 1.0) * initial_step;
      }
      bool distinct = true;
      for (std::size_t i = 0; i < pos.size() && distinct; ++i)
        for (std::size_t j = i + 1; j < pos.size() && distinct; ++j)
          if ((pos[i] - pos[j]).norm() == 0.0) distinct = false;
      if (!distinct) continue;
      ArrayGeometry jittered(std::move(pos), report.final.labels());
      if (!constraints.admits(jittered)) continue;
      current = jittered;
      current_value = evaluate(current);
      consider(current, current_value);
      placed = true;
    }
    if (!placed) break;
  }
  return report;
}

ArrayGeometry pair_on_x(double spacing) {
  if (!(spacing > 0.0)) throw InvalidArgument("pair spacing must be positive");
  return ArrayGeometry({Vec3(-0.5 * spacing, 0.0, 0.0), Vec3(0.5 * spacing, 0.0, 0.0)});
}

SpacingOptimum brute_force_best_spacing(const std::vector<double>& spacings, const DesignObjective& objective,
                                        double speed_of_sound, const std::function<ArrayGeometry(double)>& family) {
  if (spacings.empty()) throw InvalidArgument("spacing grid is empty");
  std::vector<double> sorted = spacings;
  std::sort(sorted.begin(), sorted.end());
  SpacingOptimum best{sorted.front(), -std::numeric_limits<double>::infinity()};
  for (double s : sorted) {
    const double value = evaluate_objective(family(s), objective, speed_of_sound);
    if (value > best.objective) best = {s, value};
  }
  return best;
}

void write_optimization_trace(std::ostream& out, const OptimizationReport& report) {
  out << "# seed=" << report.seed << '\n'
      << "# evaluations=" << report.evaluations << '\n'
      << "# initial_objective=" << detail::format_number(report.initial_objective()) << '\n'
      << "# final_objective=" << detail::format_number(report.final_objective()) << '\n'
      << "accepted,evaluation,step_m,objective\n";
  for (std::size_t i = 0; i < report.trace.size(); ++i) {
    const auto& t = report.trace[i];
    out << i << ',' << t.evaluation << ',' << detail::format_number(t.step) << ','
        << detail::format_number(t.objective) << '\n';
  }
}

}  // namespace arraycap
