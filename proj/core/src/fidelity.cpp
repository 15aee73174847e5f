#include "spinctl/fidelity.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spinctl/direct_search.hpp"

namespace spinctl {

namespace {

void check_dims(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("unitary dimension mismatch");
}

double dist2_to_segment(Complex p, Complex q) {
  // squared distance from the origin to segment [p, q]
  Complex d = q - p;
  double len2 = std::norm(d);
  if (len2 < 1e-30) return std::norm(p);
  double t = -(p.real() * d.real() + p.imag() * d.imag()) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::norm(p + t * d);
}

}  // namespace

double hs_fidelity(const Matrix& u_goal, const Matrix& u_sim) {
  check_dims(u_goal, u_sim);
  double n = double(u_goal.rows());
  Complex tr = (u_goal.adjoint() * u_sim).trace();
  return std::norm(tr) / (n * n);
}

double worst_case_fidelity(const Matrix& u_goal, const Matrix& u_sim) {
  check_dims(u_goal, u_sim);
  Matrix m = u_goal.adjoint() * u_sim;
  Eigen::ComplexEigenSolver<Matrix> es(m, false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");

  // Eigenvalues of a unitary lie on the unit circle; the numerical range is
  // their convex hull.
  std::vector<double> angles;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    angles.push_back(std::arg(es.eigenvalues()(i)));
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-13; }),
               angles.end());
  if (angles.size() >= 2 &&
      std::abs((angles.back() - 2 * M_PI) - angles.front()) < 1e-13)
    angles.pop_back();
  if (angles.size() == 1) return 1.0;

  // Origin is inside the hull iff no angular gap exceeds pi.
  double max_gap = 0.0;
  std::size_t gap_at = 0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    double next = (i + 1 < angles.size()) ? angles[i + 1] : angles[0] + 2 * M_PI;
    double gap = next - angles[i];
    if (gap > max_gap) { max_gap = gap; gap_at = i; }
  }
  if (max_gap <= M_PI + 1e-13) return 0.0;

  // Closest hull point lies on the chord closing the largest gap.
  Complex p = std::polar(1.0, angles[gap_at]);
  Complex q = std::polar(1.0, angles[(gap_at + 1) % angles.size()]);
  double d2 = dist2_to_segment(p, q);
  return std::clamp(d2, 0.0, 1.0);
}

double average_state_fidelity(const Matrix& u_goal, const Matrix& u_sim) {
  double n = double(u_goal.rows());
  return (n * hs_fidelity(u_goal, u_sim) + 1.0) / (n + 1.0);
}

double max_fidelity_over_local_z(const Matrix& u_goal, const Matrix& u_sim,
                                 std::size_t n_spins,
                                 const std::vector<std::size_t>& spins) {
  std::vector<std::size_t> which = spins;
  if (which.empty())
    for (std::size_t i = 0; i < n_spins; ++i) which.push_back(i);

  auto fitness = [&](const std::vector<double>& angles) {
    Eigen::VectorXcd d = Eigen::VectorXcd::Ones(u_sim.rows());
    for (std::size_t k = 0; k < which.size(); ++k)
      pauli::apply_z_phase(d, which[k], n_spins, angles[k] / 2.0);
    Matrix v = d.asDiagonal() * u_sim;
    return hs_fidelity(u_goal, v);
  };

  DirectSearchOptions opt;
  opt.n_starts = 8;
  opt.seed = 17;
  auto res = maximize_on_torus(fitness, which.size(), opt);
  return res.value;
}

}  // namespace spinctl
