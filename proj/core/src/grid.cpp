#include "cxtomo/grid.hpp"

#include <cmath>
#include <sstream>

namespace cxtomo {

GridSpec make_grid(int n, double extent, double t_final, int n_slices) {
  if (n < 3) throw std::invalid_argument("make_grid: n must be >= 3");
  if (!(extent > 0.0)) throw std::invalid_argument("make_grid: extent must be positive");
  if (!(t_final > 0.0)) throw std::invalid_argument("make_grid: t_final must be positive");
  if (n_slices < 1) throw std::invalid_argument("make_grid: n_slices must be >= 1");

  GridSpec g;
  g.n = n;
  g.extent = extent;
  g.t_final = t_final;
  g.n_slices = n_slices;
  g.dx = 2.0 * extent / (n - 1);
  g.dt = t_final / n_slices;
  g.courant = g.dt / g.dx;

  const double cfl = g.courant * std::sqrt(2.0);
  if (cfl > 1.0) {
    std::ostringstream msg;
    msg << "make_grid: CFL violation, courant*sqrt(2) = " << cfl
        << " exceeds 1 (dt = " << g.dt << ", dx = " << g.dx << ")";
    throw std::invalid_argument(msg.str());
  }
  return g;
}

BilinearWeights bilinear_weights(const GridSpec& spec, double px, double py) {
  BilinearWeights w;
  if (!spec.inside(px, py)) return w;

  auto cell = [&](double p) {
    int c = static_cast<int>(std::floor((p + spec.extent) / spec.dx));
    if (c < 0) c = 0;
    if (c > spec.n - 2) c = spec.n - 2;
    return c;
  };
  const int i0 = cell(px);
  const int j0 = cell(py);
  // Fractions recomputed against the clamped cell corner; the extra clamp to
  // [0, 1] guards against rounding at the hull edge producing negative weights.
  auto frac = [](double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); };
  const double fx = frac((px - spec.x(i0)) / spec.dx);
  const double fy = frac((py - spec.y(j0)) / spec.dx);

  const double wx[2] = {1.0 - fx, fx};
  const double wy[2] = {1.0 - fy, fy};
  for (int b = 0; b < 2; ++b) {
    for (int a = 0; a < 2; ++a) {
      const double weight = wx[a] * wy[b];
      if (weight != 0.0) {
        w.entries[w.count++] = WeightPair{spec.flat_index(i0 + a, j0 + b), weight};
      }
    }
  }
  return w;
}

}  // namespace cxtomo
