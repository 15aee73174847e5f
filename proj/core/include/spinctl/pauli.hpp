#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>

namespace spinctl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Basis convention: spin 0 is the leftmost tensor factor, i.e. the most
// significant bit of the basis index. |0> is the +1 eigenvector of Z.
namespace pauli {

Matrix identity(std::size_t n_spins);

// Single-spin Pauli embedded at position `spin` of an n-spin register.
Matrix x(std::size_t spin, std::size_t n_spins);
Matrix y(std::size_t spin, std::size_t n_spins);
Matrix z(std::size_t spin, std::size_t n_spins);

// Z eigenvalue (+1/-1) of spin `spin` in basis state `state`.
inline int z_sign(std::size_t state, std::size_t spin, std::size_t n_spins) {
  return (state >> (n_spins - 1 - spin)) & 1 ? -1 : +1;
}

// exp(-i a Z_i) and exp(-i b Z_i Z_j) as diagonal vectors, multiplied into d.
void apply_z_phase(Eigen::VectorXcd& d, std::size_t spin, std::size_t n_spins, double a);
void apply_zz_phase(Eigen::VectorXcd& d, std::size_t i, std::size_t j,
                    std::size_t n_spins, double b);

}  // namespace pauli

// R_phi(theta) = exp(-i theta/2 (cos(phi) X + sin(phi) Y)) on one qubit.
Eigen::Matrix2cd rotation_xy(double phase, double angle);
// R_z(theta) = exp(-i theta/2 Z) on one qubit.
Eigen::Matrix2cd rotation_z(double angle);

// Embed a gate acting on the listed spins (in that order) into an n-spin
// register, identity elsewhere.
Matrix embed(const Matrix& gate, const std::vector<std::size_t>& targets,
             std::size_t n_spins);

// Canonicalize an angle to (-pi, pi].
double wrap_angle(double a);

}  // namespace spinctl
