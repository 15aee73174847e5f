#pragma once

#include <vector>

namespace spinctl {

// Natural cubic spline through (x_k, y_k); x strictly increasing.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;

 private:
  std::vector<double> x_, y_, m_;  // m_: second derivatives at knots
};

}  // namespace spinctl
