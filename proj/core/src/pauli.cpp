#include "spinctl/pauli.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace spinctl {
namespace pauli {

Matrix identity(std::size_t n_spins) {
  std::size_t dim = std::size_t{1} << n_spins;
  return Matrix::Identity(dim, dim);
}

Matrix x(std::size_t spin, std::size_t n_spins) {
  std::size_t dim = std::size_t{1} << n_spins;
  std::size_t bit = std::size_t{1} << (n_spins - 1 - spin);
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t s = 0; s < dim; ++s) m(s ^ bit, s) = 1.0;
  return m;
}

Matrix y(std::size_t spin, std::size_t n_spins) {
  std::size_t dim = std::size_t{1} << n_spins;
  std::size_t bit = std::size_t{1} << (n_spins - 1 - spin);
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t s = 0; s < dim; ++s) {
    // Y|0> = i|1>, Y|1> = -i|0>
    bool is_one = (s & bit) != 0;
    m(s ^ bit, s) = is_one ? Complex(0, -1) : Complex(0, 1);
  }
  return m;
}

Matrix z(std::size_t spin, std::size_t n_spins) {
  std::size_t dim = std::size_t{1} << n_spins;
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t s = 0; s < dim; ++s) m(s, s) = z_sign(s, spin, n_spins);
  return m;
}

void apply_z_phase(Eigen::VectorXcd& d, std::size_t spin, std::size_t n_spins, double a) {
  for (std::size_t s = 0; s < std::size_t(d.size()); ++s)
    d(s) *= std::exp(Complex(0, -a * z_sign(s, spin, n_spins)));
}

void apply_zz_phase(Eigen::VectorXcd& d, std::size_t i, std::size_t j,
                    std::size_t n_spins, double b) {
  for (std::size_t s = 0; s < std::size_t(d.size()); ++s) {
    int zz = z_sign(s, i, n_spins) * z_sign(s, j, n_spins);
    d(s) *= std::exp(Complex(0, -b * zz));
  }
}

}  // namespace pauli

Eigen::Matrix2cd rotation_xy(double phase, double angle) {
  double c = std::cos(angle / 2), s = std::sin(angle / 2);
  Complex e_minus(std::cos(phase), -std::sin(phase));
  Complex e_plus = std::conj(e_minus);
  Eigen::Matrix2cd m;
  m << c, Complex(0, -s) * e_minus,
       Complex(0, -s) * e_plus, c;
  return m;
}

Eigen::Matrix2cd rotation_z(double angle) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = std::exp(Complex(0, -angle / 2));
  m(1, 1) = std::exp(Complex(0, angle / 2));
  return m;
}

Matrix embed(const Matrix& gate, const std::vector<std::size_t>& targets,
             std::size_t n_spins) {
  std::size_t k = targets.size();
  if (gate.rows() != Eigen::Index(std::size_t{1} << k))
    throw std::invalid_argument("gate dimension does not match target count");
  std::size_t dim = std::size_t{1} << n_spins;
  Matrix out = Matrix::Zero(dim, dim);
  std::size_t gdim = std::size_t{1} << k;
  for (std::size_t col = 0; col < dim; ++col) {
    // extract target sub-index of col
    std::size_t sub_col = 0;
    for (std::size_t t = 0; t < k; ++t) {
      int bit = (col >> (n_spins - 1 - targets[t])) & 1;
      sub_col = (sub_col << 1) | std::size_t(bit);
    }
    for (std::size_t sub_row = 0; sub_row < gdim; ++sub_row) {
      Complex v = gate(sub_row, sub_col);
      if (v == Complex(0, 0)) continue;
      std::size_t row = col;
      for (std::size_t t = 0; t < k; ++t) {
        std::size_t bit = std::size_t{1} << (n_spins - 1 - targets[t]);
        bool want = (sub_row >> (k - 1 - t)) & 1;
        row = want ? (row | bit) : (row & ~bit);
      }
      out(row, col) += v;
    }
  }
  return out;
}

double wrap_angle(double a) {
  double two_pi = 2.0 * M_PI;
  double w = std::fmod(a, two_pi);
  if (w <= -M_PI) w += two_pi;
  if (w > M_PI) w -= two_pi;
  return w;
}

}  // namespace spinctl
