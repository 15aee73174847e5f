#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spinctl/fidelity.hpp"
#include "spinctl/propagator.hpp"
#include "spinctl/spin_system.hpp"

namespace spinctl {

struct RfScalePoint {
  double multiplier = 1.0;
  double weight = 1.0;
};

// One incoherent-averaging point: per-spin Z shifts in Hz. The common case of
// a uniform offset on designated spins is a special case of the map.
struct FreqOffsetPoint {
  double weight = 1.0;
  std::map<std::string, double> shifts_hz;

  static FreqOffsetPoint uniform(double offset_hz, double weight,
                                 const std::vector<std::string>& spins);
};

struct RobustnessDistribution {
  std::vector<RfScalePoint> rf_scales;     // empty = single nominal point
  std::vector<FreqOffsetPoint> freq_offsets;
  void validate() const;                   // weights sum to 1 per axis

  static RobustnessDistribution rf3(double spread = 0.05);  // {1-s, 1, 1+s}
};

struct GuessSpec {
  std::size_t knot_spacing = 25;  // steps between random knots
  double knot_range = 0.05;       // fraction of max power
  unsigned seed = 0;
};

struct SubsystemGoal {
  std::vector<std::string> spins;
  double weight = 1.0;
  Matrix goal;
};

struct GrapeConfig {
  std::size_t n_steps = 100;
  double initial_dt_s = 1e-5;
  bool optimize_durations = false;
  double time_penalty_weight = 0.0;
  double edge_penalty_weight = 0.0;
  std::size_t edge_steps = 3;
  std::size_t max_iterations = 500;
  double convergence_threshold = 1e-9;
  double target_fidelity = 1.0;    // stop early once the ensemble fitness reaches this
  GuessSpec guess;
  std::vector<SubsystemGoal> subsystems;  // empty = single full-system goal
  double dt_floor_s = 5e-7;
  double step_angle_warn = 0.3;    // rad; Eq.-10-style gradients degrade beyond this
  double smoothing_window = 3;     // moving-average width (steps) for smoothing
  double bandwidth_cap_hz = 0.0;   // 0 = no check
};

struct GrapeResult {
  PulseShape pulse;
  std::vector<double> fitness_history;  // objective after each accepted iterate
  double final_fidelity = 0.0;          // ensemble fitness of the returned pulse
  std::map<std::string, double> point_fidelities;
  bool converged = false;
  std::size_t iterations = 0;
  std::vector<std::string> warnings;
};

// Smooth low-power random guess: knots every knot_spacing steps (plus the last
// step) uniform in +/- knot_range * cap, cubic-spline interpolated between.
PulseShape initial_guess(const GuessSpec& spec, std::size_t n_steps, double dt_s,
                         const SpinSystem& sys,
                         std::vector<std::string> channel_species = {});

double ensemble_fitness(const PulseShape& pulse, const SpinSystem& sys,
                        const Matrix& goal, const RobustnessDistribution& dist,
                        const std::vector<SubsystemGoal>& subsystems = {});

std::map<std::string, double> ensemble_point_fidelities(
    const PulseShape& pulse, const SpinSystem& sys, const Matrix& goal,
    const RobustnessDistribution& dist,
    const std::vector<SubsystemGoal>& subsystems = {});

struct ControlGradient {
  std::vector<std::vector<double>> d_u_x;  // [step][channel]
  std::vector<std::vector<double>> d_u_y;
  bool large_step_angle = false;
};

// First-order analytic gradient of the ensemble fitness: forward and backward
// propagator products are built once per ensemble point and reused.
ControlGradient gradient(const PulseShape& pulse, const SpinSystem& sys,
                         const Matrix& goal, const RobustnessDistribution& dist,
                         const std::vector<SubsystemGoal>& subsystems = {},
                         double step_angle_warn = 0.3);

// d(ensemble fitness)/d(dt_j) minus the linear time penalty. Exact for
// piecewise-constant steps.
std::vector<double> duration_gradient(const PulseShape& pulse, const SpinSystem& sys,
                                      const Matrix& goal,
                                      const RobustnessDistribution& dist,
                                      double time_penalty_weight = 0.0,
                                      const std::vector<SubsystemGoal>& subsystems = {});

// Polak-Ribiere conjugate-gradient ascent with Armijo backtracking on
// ensemble fitness minus penalties. Amplitudes are clipped to channel caps
// after every update; durations (when optimized) are floored at dt_floor_s.
GrapeResult optimize(const GrapeConfig& config, const SpinSystem& sys,
                     const Matrix& goal, const RobustnessDistribution& dist = {},
                     const std::optional<PulseShape>& initial = std::nullopt);

// Resample at target_dt (moving average + spline), check bandwidth, use as the
// new initial guess and re-optimize; repeated `rounds` times.
GrapeResult smooth_and_reoptimize(const GrapeResult& result, const GrapeConfig& config,
                                  const SpinSystem& sys, const Matrix& goal,
                                  const RobustnessDistribution& dist,
                                  double target_dt_s, std::size_t rounds);

// Resampling alone (exposed for tests).
PulseShape resample_pulse(const PulseShape& pulse, double target_dt_s,
                          std::size_t smoothing_window);

// Largest |frequency| (Hz) carrying at least `floor_fraction` of total power,
// per channel; 0 for an all-zero pulse.
double pulse_bandwidth_hz(const PulseShape& pulse, double floor_fraction = 1e-3);

}  // namespace spinctl
