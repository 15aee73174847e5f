#include "spinctl/spline.hpp"

#include <algorithm>
#include <stdexcept>

namespace spinctl {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  std::size_t n = x_.size();
  if (n != y_.size() || n < 2) throw std::invalid_argument("spline needs >= 2 knots");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("spline knots must increase");
  m_.assign(n, 0.0);
  if (n == 2) return;

  // Tridiagonal solve for natural boundary conditions (Thomas algorithm).
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
    a[i] = h0;
    b[i] = 2.0 * (h0 + h1);
    c[i] = h1;
    d[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
  }
  for (std::size_t i = 2; i + 1 < n; ++i) {
    double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = (d[i] - c[i] * (i + 2 < n ? m_[i + 1] : 0.0)) / b[i];
    if (i == 1) break;
  }
}

double CubicSpline::operator()(double x) const {
  std::size_t n = x_.size();
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t hi = std::size_t(it - x_.begin());
  hi = std::clamp<std::size_t>(hi, 1, n - 1);
  std::size_t lo = hi - 1;
  double h = x_[hi] - x_[lo];
  double A = (x_[hi] - x) / h, B = (x - x_[lo]) / h;
  return A * y_[lo] + B * y_[hi] +
         ((A * A * A - A) * m_[lo] + (B * B * B - B) * m_[hi]) * h * h / 6.0;
}

}  // namespace spinctl
