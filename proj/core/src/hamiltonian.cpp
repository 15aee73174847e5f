#include "spinctl/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace spinctl {

Matrix build_internal_hamiltonian(const SpinSystem& sys) {
  std::size_t n = sys.n_spins();
  std::size_t dim = sys.dim();
  Matrix h = Matrix::Zero(dim, dim);
  for (std::size_t s = 0; s < dim; ++s) {
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      diag += M_PI * sys.spin(i).shift_hz * pauli::z_sign(s, i, n);
    for (const auto& [pair, j] : sys.couplings()) {
      std::size_t i = sys.index_of(pair.a), k = sys.index_of(pair.b);
      diag += (M_PI / 2.0) * j * pauli::z_sign(s, i, n) * pauli::z_sign(s, k, n);
    }
    h(s, s) = diag;
  }
  if (sys.coupling_model() == CouplingModel::full_exchange) {
    for (const auto& [pair, j] : sys.couplings()) {
      std::size_t i = sys.index_of(pair.a), k = sys.index_of(pair.b);
      h += (M_PI / 2.0) * j *
           (pauli::x(i, n) * pauli::x(k, n) + pauli::y(i, n) * pauli::y(k, n));
    }
  }
  return h;
}

ControlOperators build_control_operators(const SpinSystem& sys) {
  std::size_t n = sys.n_spins();
  std::size_t dim = sys.dim();
  ControlOperators ops;
  for (const auto& chan : sys.channels()) {
    Matrix hx = Matrix::Zero(dim, dim), hy = Matrix::Zero(dim, dim);
    for (std::size_t k : sys.spins_of_species(chan.species)) {
      hx += M_PI * pauli::x(k, n);
      hy += M_PI * pauli::y(k, n);
    }
    ops.h_x.push_back(std::move(hx));
    ops.h_y.push_back(std::move(hy));
  }
  return ops;
}

Matrix step_generator(const Matrix& h_int, const ControlOperators& ops,
                      const std::vector<std::size_t>& channel_index,
                      const PulseStep& step) {
  Matrix h = h_int;
  for (std::size_t c = 0; c < channel_index.size(); ++c) {
    double ux = step.u_x_hz[c], uy = step.u_y_hz[c];
    if (!std::isfinite(ux) || !std::isfinite(uy))
      throw std::invalid_argument("non-finite control amplitude");
    std::size_t sc = channel_index[c];
    if (ux != 0.0) h += ux * ops.h_x.at(sc);
    if (uy != 0.0) h += uy * ops.h_y.at(sc);
  }
  return h;
}

Matrix shift_generator(const SpinSystem& sys, const std::vector<double>& offsets_hz) {
  std::size_t n = sys.n_spins();
  if (offsets_hz.size() != n)
    throw std::invalid_argument("offset count must match spin count");
  Matrix h = Matrix::Zero(sys.dim(), sys.dim());
  for (std::size_t s = 0; s < sys.dim(); ++s) {
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      diag += M_PI * offsets_hz[i] * pauli::z_sign(s, i, n);
    h(s, s) = diag;
  }
  return h;
}

}  // namespace spinctl
