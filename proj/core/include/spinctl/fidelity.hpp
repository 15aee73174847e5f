#pragma once

#include "spinctl/pauli.hpp"

namespace spinctl {

// Hilbert-Schmidt fidelity |tr(U_goal^dag U_sim)|^2 / N^2, global-phase invariant.
double hs_fidelity(const Matrix& u_goal, const Matrix& u_sim);

// min over pure states of |<psi| U_goal^dag U_sim |psi>|^2. For a unitary
// M = U_goal^dag U_sim this is the squared distance from the origin to the
// convex hull of M's eigenvalues (0 when the hull contains the origin).
double worst_case_fidelity(const Matrix& u_goal, const Matrix& u_sim);

// Average state fidelity (N*Phi_hs + 1)/(N + 1); an upper bound on the worst case.
double average_state_fidelity(const Matrix& u_goal, const Matrix& u_sim);

// Max of hs_fidelity(u_goal, Zs * u_sim) over per-spin Z rotations Zs on the
// listed spins (all spins when empty). Used for up-to-local-Z equivalence.
double max_fidelity_over_local_z(const Matrix& u_goal, const Matrix& u_sim,
                                 std::size_t n_spins,
                                 const std::vector<std::size_t>& spins = {});

}  // namespace spinctl
