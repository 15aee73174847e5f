#pragma once

#include <functional>
#include <vector>

namespace spinctl {

struct DirectSearchOptions {
  int n_starts = 8;          // start 0 is the origin, the rest random on the torus
  int max_evals = 4000;      // per start
  double simplex_scale = 0.4;
  double tol = 1e-12;        // simplex value spread at convergence
  unsigned seed = 1;
};

struct DirectSearchResult {
  std::vector<double> x;
  double value = 0.0;
};

// Multi-start Nelder-Mead maximization over angle vectors (2pi-periodic).
DirectSearchResult maximize_on_torus(
    const std::function<double(const std::vector<double>&)>& f, std::size_t dim,
    const DirectSearchOptions& opt = {});

}  // namespace spinctl
