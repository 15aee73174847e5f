#include "spinctl/direct_search.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace spinctl {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

// Single Nelder-Mead run (maximization).
Vertex nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                   std::vector<double> x0, double scale, int max_evals, double tol) {
  std::size_t n = x0.size();
  std::vector<Vertex> s(n + 1);
  s[0] = {x0, f(x0)};
  for (std::size_t i = 0; i < n; ++i) {
    auto x = x0;
    x[i] += scale;
    s[i + 1] = {x, f(x)};
  }
  int evals = int(n) + 1;
  auto by_f = [](const Vertex& a, const Vertex& b) { return a.f > b.f; };

  while (evals < max_evals) {
    std::sort(s.begin(), s.end(), by_f);
    if (std::abs(s.front().f - s.back().f) < tol) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += s[i].x[k] / double(n);
    const Vertex& worst = s.back();

    auto point = [&](double coef) {
      std::vector<double> x(n);
      for (std::size_t k = 0; k < n; ++k)
        x[k] = centroid[k] + coef * (centroid[k] - worst.x[k]);
      return x;
    };

    auto xr = point(1.0);
    double fr = f(xr); ++evals;
    if (fr > s[0].f) {
      auto xe = point(2.0);
      double fe = f(xe); ++evals;
      s.back() = fe > fr ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr > s[n - 1].f) {
      s.back() = {xr, fr};
    } else {
      auto xc = point(-0.5);
      double fc = f(xc); ++evals;
      if (fc > worst.f) {
        s.back() = {xc, fc};
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t k = 0; k < n; ++k)
            s[i].x[k] = s[0].x[k] + 0.5 * (s[i].x[k] - s[0].x[k]);
          s[i].f = f(s[i].x); ++evals;
        }
      }
    }
  }
  std::sort(s.begin(), s.end(), by_f);
  return s.front();
}

}  // namespace

DirectSearchResult maximize_on_torus(
    const std::function<double(const std::vector<double>&)>& f, std::size_t dim,
    const DirectSearchOptions& opt) {
  if (dim == 0) return {{}, f({})};
  std::mt19937_64 rng(opt.seed);
  auto uniform = [&rng]() {
    return double(rng() >> 11) * (1.0 / 9007199254740992.0);  // [0,1)
  };

  Vertex best{{}, -1e300};
  for (int start = 0; start < opt.n_starts; ++start) {
    std::vector<double> x0(dim, 0.0);
    if (start > 0)
      for (auto& v : x0) v = (2.0 * uniform() - 1.0) * M_PI;
    Vertex v = nelder_mead(f, x0, opt.simplex_scale, opt.max_evals, opt.tol);
    if (v.f > best.f) best = v;
  }
  return {best.x, best.f};
}

}  // namespace spinctl
