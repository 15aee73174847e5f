#include "spinctl/grape.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "spinctl/spline.hpp"

namespace spinctl {

namespace {

double uniform01(std::mt19937_64& rng) {
  return double(rng() >> 11) * (1.0 / 9007199254740992.0);
}

// One independent simulation: an (optionally restricted) system at one
// RF-scale/offset point with its own goal.
struct SimUnit {
  SpinSystem sys;
  Matrix goal;
  double weight = 1.0;
  double rf_scale = 1.0;
  Matrix h_int;  // includes the point's frequency offsets
  ControlOperators ops;
  std::vector<int> chan_map;  // pulse channel -> unit channel (-1 if absent)
  std::string label;
};

std::vector<int> map_channels(const std::vector<std::string>& pulse_species,
                              const SpinSystem& sys) {
  std::vector<int> map(pulse_species.size(), -1);
  for (std::size_t c = 0; c < pulse_species.size(); ++c)
    for (std::size_t sc = 0; sc < sys.channels().size(); ++sc)
      if (sys.channels()[sc].species == pulse_species[c]) map[c] = int(sc);
  return map;
}

std::vector<SimUnit> build_units(const PulseShape& pulse, const SpinSystem& sys,
                                 const Matrix& goal, const RobustnessDistribution& dist,
                                 const std::vector<SubsystemGoal>& subsystems) {
  dist.validate();
  std::vector<RfScalePoint> rf = dist.rf_scales;
  if (rf.empty()) rf.push_back({1.0, 1.0});
  std::vector<FreqOffsetPoint> off = dist.freq_offsets;
  if (off.empty()) off.push_back({1.0, {}});

  struct SubEntry {
    SpinSystem sys;
    Matrix goal;
    double weight;
    std::string label;
  };
  std::vector<SubEntry> subs;
  if (subsystems.empty()) {
    if (goal.rows() != Eigen::Index(sys.dim()))
      throw std::invalid_argument("goal dimension does not match system");
    subs.push_back({sys, goal, 1.0, ""});
  } else {
    double wsum = 0.0;
    for (const auto& s : subsystems) wsum += s.weight;
    if (!(wsum > 0.0)) throw std::invalid_argument("subsystem weights sum to zero");
    for (std::size_t i = 0; i < subsystems.size(); ++i) {
      SpinSystem sub = sys.restrict_to_subsystem(subsystems[i].spins);
      if (subsystems[i].goal.rows() != Eigen::Index(sub.dim()))
        throw std::invalid_argument("subsystem goal dimension mismatch");
      subs.push_back({std::move(sub), subsystems[i].goal,
                      subsystems[i].weight / wsum, "sub" + std::to_string(i)});
    }
  }

  std::vector<SimUnit> units;
  for (const auto& se : subs) {
    Matrix h0 = build_internal_hamiltonian(se.sys);
    ControlOperators ops = build_control_operators(se.sys);
    auto cmap = map_channels(pulse.channel_species, se.sys);
    for (const auto& r : rf) {
      for (const auto& o : off) {
        SimUnit u;
        u.sys = se.sys;
        u.goal = se.goal;
        u.weight = se.weight * r.weight * o.weight;
        u.rf_scale = r.multiplier;
        u.h_int = h0;
        if (!o.shifts_hz.empty()) {
          std::vector<double> shifts(se.sys.n_spins(), 0.0);
          for (std::size_t i = 0; i < se.sys.n_spins(); ++i) {
            auto it = o.shifts_hz.find(se.sys.spin(i).name);
            if (it != o.shifts_hz.end()) shifts[i] = it->second;
          }
          u.h_int += shift_generator(se.sys, shifts);
        }
        u.ops = ops;
        u.chan_map = cmap;
        std::ostringstream lbl;
        if (!se.label.empty()) lbl << se.label << ";";
        lbl << "rf=" << r.multiplier;
        if (!o.shifts_hz.empty()) {
          lbl << ";off=";
          bool first = true;
          for (const auto& [k, v] : o.shifts_hz) {
            if (!first) lbl << ",";
            lbl << k << ":" << v;
            first = false;
          }
        }
        u.label = lbl.str();
        units.push_back(std::move(u));
      }
    }
  }
  return units;
}

Matrix unit_step_generator(const SimUnit& u, const PulseStep& step) {
  Matrix h = u.h_int;
  for (std::size_t c = 0; c < u.chan_map.size(); ++c) {
    if (u.chan_map[c] < 0) continue;
    double ux = step.u_x_hz[c] * u.rf_scale;
    double uy = step.u_y_hz[c] * u.rf_scale;
    if (!std::isfinite(ux) || !std::isfinite(uy))
      throw std::invalid_argument("non-finite control amplitude");
    if (ux != 0.0) h += ux * u.ops.h_x[u.chan_map[c]];
    if (uy != 0.0) h += uy * u.ops.h_y[u.chan_map[c]];
  }
  return h;
}

double unit_fitness(const SimUnit& u, const PulseShape& pulse) {
  Matrix utot = Matrix::Identity(u.sys.dim(), u.sys.dim());
  for (const auto& step : pulse.steps)
    utot = expm_hermitian(unit_step_generator(u, step), step.duration_s) * utot;
  return hs_fidelity(u.goal, utot);
}

// tr(A * G) as an elementwise sum.
Complex trace_prod(const Matrix& a, const Matrix& g) {
  return (a.transpose().cwiseProduct(g)).sum();
}

struct UnitGradient {
  double fitness = 0.0;
  std::vector<std::vector<double>> d_u_x, d_u_y;  // [step][pulse channel]
  std::vector<double> d_dt;
  double max_step_angle = 0.0;
};

UnitGradient unit_gradient(const SimUnit& u, const PulseShape& pulse,
                           bool want_durations) {
  std::size_t m = pulse.n_steps();
  std::size_t nc = pulse.n_channels();
  std::size_t dim = u.sys.dim();
  double n2 = double(dim) * double(dim);

  std::vector<Matrix> h(m), prop(m);
  std::vector<Matrix> fwd(m + 1);
  fwd[0] = Matrix::Identity(dim, dim);
  UnitGradient out;
  for (std::size_t j = 0; j < m; ++j) {
    h[j] = unit_step_generator(u, pulse.steps[j]);
    // Gershgorin bound on the step rotation angle.
    double hnorm = 0.0;
    for (Eigen::Index r = 0; r < h[j].rows(); ++r)
      hnorm = std::max(hnorm, h[j].row(r).cwiseAbs().sum());
    out.max_step_angle = std::max(out.max_step_angle, hnorm * pulse.steps[j].duration_s);
    prop[j] = expm_hermitian(h[j], pulse.steps[j].duration_s);
    fwd[j + 1] = prop[j] * fwd[j];
  }
  Complex t = (u.goal.adjoint() * fwd[m]).trace();
  out.fitness = std::norm(t) / n2;
  out.d_u_x.assign(m, std::vector<double>(nc, 0.0));
  out.d_u_y.assign(m, std::vector<double>(nc, 0.0));
  if (want_durations) out.d_dt.assign(m, 0.0);

  Matrix back = u.goal.adjoint();
  for (std::size_t jj = m; jj-- > 0;) {
    Matrix g = fwd[jj + 1] * back;  // F_j * (U_goal^dag U_M ... U_{j+1})
    double dt = pulse.steps[jj].duration_s;
    for (std::size_t c = 0; c < nc; ++c) {
      if (u.chan_map[c] < 0) continue;
      Complex tx = trace_prod(u.ops.h_x[u.chan_map[c]], g);
      Complex ty = trace_prod(u.ops.h_y[u.chan_map[c]], g);
      double common = 2.0 * dt * u.rf_scale / n2;
      out.d_u_x[jj][c] = common * std::imag(std::conj(t) * tx);
      out.d_u_y[jj][c] = common * std::imag(std::conj(t) * ty);
    }
    if (want_durations)
      out.d_dt[jj] = (2.0 / n2) * std::imag(std::conj(t) * trace_prod(h[jj], g));
    back = back * prop[jj];
  }
  return out;
}

}  // namespace

FreqOffsetPoint FreqOffsetPoint::uniform(double offset_hz, double weight,
                                         const std::vector<std::string>& spins) {
  FreqOffsetPoint p;
  p.weight = weight;
  for (const auto& s : spins) p.shifts_hz[s] = offset_hz;
  return p;
}

void RobustnessDistribution::validate() const {
  auto check = [](double sum, const char* what) {
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument(std::string(what) + " weights must sum to 1");
  };
  if (!rf_scales.empty()) {
    double s = 0.0;
    for (const auto& p : rf_scales) {
      if (p.weight < 0.0) throw std::invalid_argument("negative rf weight");
      s += p.weight;
    }
    check(s, "rf scale");
  }
  if (!freq_offsets.empty()) {
    double s = 0.0;
    for (const auto& p : freq_offsets) {
      if (p.weight < 0.0) throw std::invalid_argument("negative offset weight");
      s += p.weight;
    }
    check(s, "frequency offset");
  }
}

RobustnessDistribution RobustnessDistribution::rf3(double spread) {
  RobustnessDistribution d;
  d.rf_scales = {{1.0 - spread, 1.0 / 3.0}, {1.0, 1.0 / 3.0}, {1.0 + spread, 1.0 / 3.0}};
  return d;
}

PulseShape initial_guess(const GuessSpec& spec, std::size_t n_steps, double dt_s,
                         const SpinSystem& sys,
                         std::vector<std::string> channel_species) {
  if (spec.knot_spacing < 1) throw std::invalid_argument("knot_spacing must be >= 1");
  if (spec.knot_range < 0.0 || spec.knot_range > 1.0)
    throw std::invalid_argument("knot_range must lie in [0, 1]");
  if (n_steps < 2) throw std::invalid_argument("need at least 2 steps");
  if (channel_species.empty())
    for (const auto& c : sys.channels()) channel_species.push_back(c.species);

  std::vector<double> knot_idx;
  for (std::size_t k = 0; k < n_steps; k += spec.knot_spacing)
    knot_idx.push_back(double(k));
  if (knot_idx.back() != double(n_steps - 1)) knot_idx.push_back(double(n_steps - 1));

  PulseShape pulse;
  pulse.channel_species = channel_species;
  pulse.steps.assign(n_steps, PulseStep{dt_s,
                                        std::vector<double>(channel_species.size(), 0.0),
                                        std::vector<double>(channel_species.size(), 0.0)});
  std::mt19937_64 rng(spec.seed);
  for (std::size_t c = 0; c < channel_species.size(); ++c) {
    double cap = sys.channel_for(channel_species[c]).max_amplitude_hz;
    for (int q = 0; q < 2; ++q) {
      std::vector<double> vals(knot_idx.size());
      for (auto& v : vals)
        v = (2.0 * uniform01(rng) - 1.0) * spec.knot_range * cap;
      CubicSpline sp(knot_idx, vals);
      for (std::size_t j = 0; j < n_steps; ++j) {
        double v = sp(double(j));
        (q == 0 ? pulse.steps[j].u_x_hz[c] : pulse.steps[j].u_y_hz[c]) = v;
      }
    }
    for (std::size_t j = 0; j < n_steps; ++j) {
      double ux = pulse.steps[j].u_x_hz[c], uy = pulse.steps[j].u_y_hz[c];
      double amp = std::hypot(ux, uy);
      if (amp > cap) {
        pulse.steps[j].u_x_hz[c] *= cap / amp;
        pulse.steps[j].u_y_hz[c] *= cap / amp;
      }
    }
  }
  return pulse;
}

double ensemble_fitness(const PulseShape& pulse, const SpinSystem& sys,
                        const Matrix& goal, const RobustnessDistribution& dist,
                        const std::vector<SubsystemGoal>& subsystems) {
  double f = 0.0;
  for (const auto& u : build_units(pulse, sys, goal, dist, subsystems))
    f += u.weight * unit_fitness(u, pulse);
  return f;
}

std::map<std::string, double> ensemble_point_fidelities(
    const PulseShape& pulse, const SpinSystem& sys, const Matrix& goal,
    const RobustnessDistribution& dist, const std::vector<SubsystemGoal>& subsystems) {
  std::map<std::string, double> out;
  for (const auto& u : build_units(pulse, sys, goal, dist, subsystems))
    out[u.label] = unit_fitness(u, pulse);
  return out;
}

ControlGradient gradient(const PulseShape& pulse, const SpinSystem& sys,
                         const Matrix& goal, const RobustnessDistribution& dist,
                         const std::vector<SubsystemGoal>& subsystems,
                         double step_angle_warn) {
  std::size_t m = pulse.n_steps(), nc = pulse.n_channels();
  ControlGradient g;
  g.d_u_x.assign(m, std::vector<double>(nc, 0.0));
  g.d_u_y.assign(m, std::vector<double>(nc, 0.0));
  for (const auto& u : build_units(pulse, sys, goal, dist, subsystems)) {
    UnitGradient ug = unit_gradient(u, pulse, false);
    if (ug.max_step_angle > step_angle_warn) g.large_step_angle = true;
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t c = 0; c < nc; ++c) {
        g.d_u_x[j][c] += u.weight * ug.d_u_x[j][c];
        g.d_u_y[j][c] += u.weight * ug.d_u_y[j][c];
      }
  }
  return g;
}

std::vector<double> duration_gradient(const PulseShape& pulse, const SpinSystem& sys,
                                      const Matrix& goal,
                                      const RobustnessDistribution& dist,
                                      double time_penalty_weight,
                                      const std::vector<SubsystemGoal>& subsystems) {
  std::vector<double> g(pulse.n_steps(), 0.0);
  for (const auto& u : build_units(pulse, sys, goal, dist, subsystems)) {
    UnitGradient ug = unit_gradient(u, pulse, true);
    for (std::size_t j = 0; j < pulse.n_steps(); ++j)
      g[j] += u.weight * ug.d_dt[j];
  }
  for (auto& v : g) v -= time_penalty_weight;
  return g;
}

namespace {

// Scaled optimizer coordinates: amplitudes in units of the channel cap,
// durations in units of the initial dt.
struct Packing {
  std::size_t m, nc;
  bool durations;
  std::vector<double> caps;
  double dt_scale;

  std::size_t size() const { return 2 * m * nc + (durations ? m : 0); }
  std::size_t ix(std::size_t j, std::size_t c) const { return j * nc + c; }
  std::size_t iy(std::size_t j, std::size_t c) const { return m * nc + j * nc + c; }
  std::size_t it(std::size_t j) const { return 2 * m * nc + j; }

  std::vector<double> pack(const PulseShape& p) const {
    std::vector<double> x(size(), 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t c = 0; c < nc; ++c) {
        x[ix(j, c)] = p.steps[j].u_x_hz[c] / caps[c];
        x[iy(j, c)] = p.steps[j].u_y_hz[c] / caps[c];
      }
      if (durations) x[it(j)] = p.steps[j].duration_s / dt_scale;
    }
    return x;
  }
  void unpack(const std::vector<double>& x, PulseShape& p) const {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t c = 0; c < nc; ++c) {
        p.steps[j].u_x_hz[c] = x[ix(j, c)] * caps[c];
        p.steps[j].u_y_hz[c] = x[iy(j, c)] * caps[c];
      }
      if (durations) p.steps[j].duration_s = x[it(j)] * dt_scale;
    }
  }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

GrapeResult optimize(const GrapeConfig& config, const SpinSystem& sys,
                     const Matrix& goal, const RobustnessDistribution& dist,
                     const std::optional<PulseShape>& initial) {
  if (config.n_steps < 2) throw std::invalid_argument("n_steps must be >= 2");
  if (config.time_penalty_weight < 0 || config.edge_penalty_weight < 0 ||
      !std::isfinite(config.time_penalty_weight) ||
      !std::isfinite(config.edge_penalty_weight))
    throw std::invalid_argument("penalty weights must be finite and nonnegative");

  PulseShape pulse = initial ? *initial
                             : initial_guess(config.guess, config.n_steps,
                                             config.initial_dt_s, sys);
  std::size_t m = pulse.n_steps(), nc = pulse.n_channels();

  Packing pk;
  pk.m = m;
  pk.nc = nc;
  pk.durations = config.optimize_durations;
  for (const auto& s : pulse.channel_species)
    pk.caps.push_back(sys.channel_for(s).max_amplitude_hz);
  pk.dt_scale = config.initial_dt_s;

  auto units = build_units(pulse, sys, goal, dist, config.subsystems);

  auto clip = [&](std::vector<double>& x) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t c = 0; c < nc; ++c) {
        double ux = x[pk.ix(j, c)], uy = x[pk.iy(j, c)];
        double amp = std::hypot(ux, uy);
        if (amp > 1.0) {
          x[pk.ix(j, c)] = ux / amp;
          x[pk.iy(j, c)] = uy / amp;
        }
      }
      if (pk.durations)
        x[pk.it(j)] = std::max(x[pk.it(j)], config.dt_floor_s / pk.dt_scale);
    }
  };

  PulseShape work = pulse;
  auto penalties = [&](const PulseShape& p) {
    double pen = 0.0;
    if (config.time_penalty_weight > 0)
      pen += config.time_penalty_weight * p.total_duration();
    if (config.edge_penalty_weight > 0) {
      for (std::size_t j = 0; j < m; ++j) {
        if (j >= config.edge_steps && j < m - config.edge_steps) continue;
        for (std::size_t c = 0; c < nc; ++c) {
          double s = (p.steps[j].u_x_hz[c] * p.steps[j].u_x_hz[c] +
                      p.steps[j].u_y_hz[c] * p.steps[j].u_y_hz[c]) /
                     (pk.caps[c] * pk.caps[c]);
          pen += config.edge_penalty_weight * s;
        }
      }
    }
    return pen;
  };

  auto eval_value = [&](const std::vector<double>& x, double* fitness_out = nullptr) {
    pk.unpack(x, work);
    double f = 0.0;
    for (const auto& u : units) f += u.weight * unit_fitness(u, work);
    if (fitness_out) *fitness_out = f;
    return f - penalties(work);
  };

  bool warned_angle = false;
  GrapeResult result;

  auto eval_grad = [&](const std::vector<double>& x, double& value, double& fitness) {
    pk.unpack(x, work);
    std::vector<double> g(pk.size(), 0.0);
    double f = 0.0;
    for (const auto& u : units) {
      UnitGradient ug = unit_gradient(u, work, pk.durations);
      if (ug.max_step_angle > config.step_angle_warn && !warned_angle) {
        warned_angle = true;
        result.warnings.push_back("step angle exceeds " +
                                  std::to_string(config.step_angle_warn) +
                                  " rad; first-order gradients may be inaccurate");
      }
      f += u.weight * ug.fitness;
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t c = 0; c < nc; ++c) {
          g[pk.ix(j, c)] += u.weight * ug.d_u_x[j][c] * pk.caps[c];
          g[pk.iy(j, c)] += u.weight * ug.d_u_y[j][c] * pk.caps[c];
        }
        if (pk.durations) g[pk.it(j)] += u.weight * ug.d_dt[j] * pk.dt_scale;
      }
    }
    // penalty gradients
    if (config.edge_penalty_weight > 0) {
      for (std::size_t j = 0; j < m; ++j) {
        if (j >= config.edge_steps && j < m - config.edge_steps) continue;
        for (std::size_t c = 0; c < nc; ++c) {
          g[pk.ix(j, c)] -= 2.0 * config.edge_penalty_weight * x[pk.ix(j, c)];
          g[pk.iy(j, c)] -= 2.0 * config.edge_penalty_weight * x[pk.iy(j, c)];
        }
      }
    }
    if (pk.durations && config.time_penalty_weight > 0)
      for (std::size_t j = 0; j < m; ++j)
        g[pk.it(j)] -= config.time_penalty_weight * pk.dt_scale;
    fitness = f;
    value = f - penalties(work);
    return g;
  };

  std::vector<double> x = pk.pack(pulse);
  clip(x);
  double value, fitness;
  std::vector<double> g = eval_grad(x, value, fitness);
  result.fitness_history.push_back(value);

  std::vector<double> best_x = x;
  double best_value = value;
  std::vector<double> d = g;
  double alpha = 1.0;
  std::size_t restart_period = pk.size();
  std::size_t since_restart = 0;
  bool tried_steepest = false;

  std::size_t iter = 0;
  for (; iter < config.max_iterations; ++iter) {
    if (fitness >= config.target_fidelity) { result.converged = true; break; }
    if (dot(d, g) <= 0.0) { d = g; since_restart = 0; }

    double slope = dot(g, d);
    if (slope <= 0.0) { result.converged = true; break; }

    double step = alpha;
    bool accepted = false;
    std::vector<double> xn;
    double vn = 0.0;
    for (int bt = 0; bt < 50; ++bt) {
      xn = x;
      for (std::size_t i = 0; i < x.size(); ++i) xn[i] += step * d[i];
      clip(xn);
      vn = eval_value(xn);
      if (vn > value && vn >= value + 1e-4 * step * slope) { accepted = true; break; }
      step *= 0.5;
    }
    if (!accepted) {
      if (!tried_steepest) {  // retry once along the raw gradient
        d = g;
        since_restart = 0;
        tried_steepest = true;
        continue;
      }
      result.converged = true;
      break;
    }
    tried_steepest = false;
    double improvement = vn - value;
    x = xn;
    alpha = std::min(step * 2.0, 1e6);

    std::vector<double> g_old = g;
    g = eval_grad(x, value, fitness);
    result.fitness_history.push_back(value);
    if (value > best_value) { best_value = value; best_x = x; }

    double beta = 0.0;
    double denom = dot(g_old, g_old);
    if (denom > 0) {
      std::vector<double> diff(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) diff[i] = g[i] - g_old[i];
      beta = std::max(0.0, dot(g, diff) / denom);
    }
    if (++since_restart >= restart_period) { beta = 0.0; since_restart = 0; }
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = g[i] + beta * d[i];

    if (improvement < config.convergence_threshold) { result.converged = true; break; }
  }
  result.iterations = iter;
  if (iter >= config.max_iterations && !result.converged)
    result.warnings.push_back("stopped at max_iterations without meeting the "
                              "convergence threshold");

  pk.unpack(best_x, work);
  result.pulse = work;
  result.final_fidelity = 0.0;
  for (const auto& u : units)
    result.final_fidelity += u.weight * unit_fitness(u, work);
  result.point_fidelities =
      ensemble_point_fidelities(work, sys, goal, dist, config.subsystems);
  return result;
}

PulseShape resample_pulse(const PulseShape& pulse, double target_dt_s,
                          std::size_t smoothing_window) {
  if (pulse.n_steps() < 2) throw std::invalid_argument("need >= 2 steps to resample");
  double total = pulse.total_duration();
  if (!(target_dt_s > 0) || target_dt_s >= total)
    throw std::invalid_argument("target_dt must be positive and below total duration");
  std::size_t m_new = std::max<std::size_t>(2, std::llround(total / target_dt_s));
  double dt_new = total / double(m_new);

  std::size_t m = pulse.n_steps(), nc = pulse.n_channels();
  std::vector<double> t_mid(m);
  double t = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    t_mid[j] = t + pulse.steps[j].duration_s / 2.0;
    t += pulse.steps[j].duration_s;
  }

  PulseShape out;
  out.channel_species = pulse.channel_species;
  out.steps.assign(m_new, PulseStep{dt_new, std::vector<double>(nc, 0.0),
                                    std::vector<double>(nc, 0.0)});
  std::size_t half = smoothing_window / 2;
  for (std::size_t c = 0; c < nc; ++c) {
    for (int q = 0; q < 2; ++q) {
      std::vector<double> smoothed(m);
      for (std::size_t j = 0; j < m; ++j) {
        std::size_t lo = j >= half ? j - half : 0;
        std::size_t hi = std::min(m - 1, j + half);
        double acc = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) {
          const auto& st = pulse.steps[k];
          acc += (q == 0 ? st.u_x_hz[c] : st.u_y_hz[c]);
        }
        smoothed[j] = acc / double(hi - lo + 1);
      }
      CubicSpline sp(t_mid, smoothed);
      for (std::size_t j = 0; j < m_new; ++j) {
        double tj = (double(j) + 0.5) * dt_new;
        tj = std::clamp(tj, t_mid.front(), t_mid.back());
        (q == 0 ? out.steps[j].u_x_hz[c] : out.steps[j].u_y_hz[c]) = sp(tj);
      }
    }
  }
  return out;
}

double pulse_bandwidth_hz(const PulseShape& pulse, double floor_fraction) {
  std::size_t m = pulse.n_steps();
  if (m == 0) return 0.0;
  double dt = pulse.total_duration() / double(m);
  double bw = 0.0;
  for (std::size_t c = 0; c < pulse.n_channels(); ++c) {
    std::vector<Complex> a(m);
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      a[j] = Complex(pulse.steps[j].u_x_hz[c], pulse.steps[j].u_y_hz[c]);
      total += std::norm(a[j]);
    }
    if (total == 0.0) continue;
    for (std::size_t f = 0; f < m; ++f) {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        acc += a[j] * std::exp(Complex(0, -2.0 * M_PI * double(f) * double(j) / double(m)));
      double power = std::norm(acc) / double(m);
      if (power < floor_fraction * total) continue;
      double fs = double(f) / double(m);  // cycles per sample
      if (fs > 0.5) fs -= 1.0;
      bw = std::max(bw, std::abs(fs) / dt);
    }
  }
  return bw;
}

GrapeResult smooth_and_reoptimize(const GrapeResult& result, const GrapeConfig& config,
                                  const SpinSystem& sys, const Matrix& goal,
                                  const RobustnessDistribution& dist,
                                  double target_dt_s, std::size_t rounds) {
  GrapeResult current = result;
  for (std::size_t r = 0; r < rounds; ++r) {
    PulseShape smoothed = resample_pulse(current.pulse, target_dt_s,
                                         std::size_t(config.smoothing_window));
    std::vector<std::string> carried = current.warnings;
    if (config.bandwidth_cap_hz > 0) {
      double bw = pulse_bandwidth_hz(smoothed);
      if (bw > config.bandwidth_cap_hz)
        carried.push_back("smoothed pulse bandwidth " + std::to_string(bw) +
                          " Hz exceeds cap " + std::to_string(config.bandwidth_cap_hz));
    }
    GrapeConfig round_cfg = config;
    round_cfg.n_steps = smoothed.n_steps();
    round_cfg.initial_dt_s = target_dt_s;
    round_cfg.optimize_durations = false;  // keep the uniform smoothed grid
    current = optimize(round_cfg, sys, goal, dist, smoothed);
    current.warnings.insert(current.warnings.begin(), carried.begin(), carried.end());
  }
  return current;
}

}  // namespace spinctl
