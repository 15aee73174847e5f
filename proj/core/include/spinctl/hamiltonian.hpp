#pragma once

#include "spinctl/pauli.hpp"
#include "spinctl/spin_system.hpp"

namespace spinctl {

// Internal Hamiltonian in angular units (rad/s):
//   H_int = sum_i pi*nu_i*Z_i + sum_{i<j} (pi/2)*J_ij*Z_i*Z_j
// full_exchange adds (pi/2)*J_ij*(X_i X_j + Y_i Y_j).
Matrix build_internal_hamiltonian(const SpinSystem& sys);

// Control operators per channel, in the order sys.channels() lists them:
//   H_x[c] = pi * sum_{k in species(c)} X_k, likewise H_y.
// A constant u_x of a Hz applied for t seconds rotates an on-resonance spin
// by 2*pi*a*t about x.
struct ControlOperators {
  std::vector<Matrix> h_x;  // one per channel, WITHOUT the u amplitude
  std::vector<Matrix> h_y;
};
ControlOperators build_control_operators(const SpinSystem& sys);

// Full generator of one step: H_int + sum_c (u_x[c]*H_x[c] + u_y[c]*H_y[c]).
// channel_index maps pulse channel slots to system channel slots.
Matrix step_generator(const Matrix& h_int, const ControlOperators& ops,
                      const std::vector<std::size_t>& channel_index,
                      const PulseStep& step);

// Per-spin Z-shift term sum_i pi*offset_i*Z_i for robustness scans.
Matrix shift_generator(const SpinSystem& sys, const std::vector<double>& offsets_hz);

}  // namespace spinctl
