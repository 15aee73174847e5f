#include "spinctl/propagator.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace spinctl {

double Propagator::unitarity_defect() const {
  Matrix d = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

Matrix expm_hermitian(const Matrix& h, double t) {
  // Diagonal (weak-coupling, no controls) generators exponentiate directly.
  if (h.cwiseAbs().sum() == h.diagonal().cwiseAbs().sum()) {
    Matrix u = Matrix::Zero(h.rows(), h.cols());
    for (Eigen::Index i = 0; i < h.rows(); ++i)
      u(i, i) = std::exp(Complex(0, -t * h(i, i).real()));
    return u;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  Eigen::VectorXcd phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    phases(i) = std::exp(Complex(0, -t * es.eigenvalues()(i)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Propagator step_propagator(const Matrix& h_int, const SpinSystem& sys,
                           const ControlOperators& ops,
                           const std::vector<std::size_t>& channel_index,
                           const PulseStep& step, const std::string& tag) {
  if (!(step.duration_s > 0.0))
    throw std::invalid_argument("step duration must be > 0");
  Matrix h = step_generator(h_int, ops, channel_index, step);
  (void)sys;
  return Propagator{expm_hermitian(h, step.duration_s), tag};
}

Propagator total_propagator(const std::vector<Propagator>& steps) {
  if (steps.empty()) return Propagator{Matrix::Identity(1, 1), {}};
  Matrix u = Matrix::Identity(steps[0].u.rows(), steps[0].u.cols());
  for (const auto& s : steps) {
    if (s.u.rows() != u.rows())
      throw std::invalid_argument("propagator dimension mismatch");
    u = s.u * u;
  }
  return Propagator{std::move(u), steps[0].system_tag};
}

Propagator simulate_pulse(const SpinSystem& sys, const PulseShape& pulse,
                          const SimulateOptions& opt) {
  Matrix h_int = build_internal_hamiltonian(sys);
  if (!opt.freq_offsets_hz.empty())
    h_int += shift_generator(sys, opt.freq_offsets_hz);
  ControlOperators ops = build_control_operators(sys);
  // Map pulse channels onto system channels by species; channels the system
  // does not have are ignored (their spins are absent from this subsystem).
  std::vector<int> chan_map(pulse.n_channels(), -1);
  for (std::size_t c = 0; c < pulse.n_channels(); ++c)
    for (std::size_t sc = 0; sc < sys.channels().size(); ++sc)
      if (sys.channels()[sc].species == pulse.channel_species[c]) chan_map[c] = int(sc);

  Matrix u = Matrix::Identity(sys.dim(), sys.dim());
  double cph = opt.extra_phase_rad;
  for (const auto& step : pulse.steps) {
    Matrix h = h_int;
    for (std::size_t c = 0; c < pulse.n_channels(); ++c) {
      if (chan_map[c] < 0) continue;
      double ux = step.u_x_hz[c] * opt.rf_scale;
      double uy = step.u_y_hz[c] * opt.rf_scale;
      if (cph != 0.0) {
        double rx = ux * std::cos(cph) - uy * std::sin(cph);
        double ry = ux * std::sin(cph) + uy * std::cos(cph);
        ux = rx; uy = ry;
      }
      if (!std::isfinite(ux) || !std::isfinite(uy))
        throw std::invalid_argument("non-finite control amplitude");
      if (ux != 0.0) h += ux * ops.h_x[chan_map[c]];
      if (uy != 0.0) h += uy * ops.h_y[chan_map[c]];
    }
    u = expm_hermitian(h, step.duration_s) * u;
  }
  return Propagator{std::move(u), {}};
}

}  // namespace spinctl
