#pragma once

#include <string>
#include <vector>

#include "spinctl/hamiltonian.hpp"

namespace spinctl {

struct Propagator {
  Matrix u;
  std::string system_tag;

  std::size_t dim() const { return std::size_t(u.rows()); }
  // max-entry norm of U^dag U - I
  double unitarity_defect() const;
};

// exp(-i t H) for Hermitian H via eigendecomposition.
Matrix expm_hermitian(const Matrix& h, double t);

// Unitary of one pulse step: exp(-i dt (H_int + controls)).
Propagator step_propagator(const Matrix& h_int, const SpinSystem& sys,
                           const ControlOperators& ops,
                           const std::vector<std::size_t>& channel_index,
                           const PulseStep& step,
                           const std::string& tag = {});

// Time-ordered product U_M ... U_1 (steps[0] acts first).
Propagator total_propagator(const std::vector<Propagator>& steps);

struct SimulateOptions {
  double rf_scale = 1.0;                 // multiplies all control amplitudes
  std::vector<double> freq_offsets_hz;   // per-spin Z shifts, empty = none
  double extra_phase_rad = 0.0;          // rotates all controls: u -> u*e^{i phase}
};

// Simulate a full pulse on a system (channels of the pulse matched by species).
Propagator simulate_pulse(const SpinSystem& sys, const PulseShape& pulse,
                          const SimulateOptions& opt = {});

}  // namespace spinctl
