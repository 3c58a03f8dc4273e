#pragma once

// Shared test oracles. Everything here is built independently of the library
// paths it checks: dense operators come straight from their defining formulas,
// not from the production stencils.

#include <random>

#include "cxtomo/grid.hpp"
#include "cxtomo/model.hpp"
#include "cxtomo/wave.hpp"

namespace cxtomo::testing {

inline GridSpec desk_grid() { return make_grid(9, 2.0, 1.0, 6); }

/// Dense one-step map from its Kronecker-product definition
/// T = I + (c/2)(I (x) T_x) + (c/2)(T_y (x) I), zero Dirichlet boundary.
inline Matrix dense_step_matrix(const GridSpec& g) {
  const int n = g.n;
  const int np = n * n;
  const double c = 0.5 * g.courant * g.courant;
  Matrix t = Matrix::Zero(np, np);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int r = j * n + i;
      t(r, r) = 1.0 - 4.0 * c;
      if (i > 0) t(r, r - 1) = c;
      if (i < n - 1) t(r, r + 1) = c;
      if (j > 0) t(r, r - n) = c;
      if (j < n - 1) t(r, r + n) = c;
    }
  }
  return t;
}

/// Dense solution matrix from the recursion on dense powers:
/// P_0 = I, P_1 = T, P_tau = 2 T P_{tau-1} - P_{tau-2}; slice block tau is
/// (P_{tau-1} + P_tau)/2.
inline Matrix dense_solution_matrix(const GridSpec& g) {
  const int np = g.n * g.n;
  const Matrix t = dense_step_matrix(g);
  Matrix p_prev = Matrix::Identity(np, np);
  Matrix p_curr = t;
  Matrix s(static_cast<Eigen::Index>(np) * g.n_slices, np);
  s.topRows(np) = 0.5 * (p_prev + p_curr);
  for (int tau = 2; tau <= g.n_slices; ++tau) {
    Matrix p_next = 2.0 * (t * p_curr) - p_prev;
    p_prev.swap(p_curr);
    p_curr.swap(p_next);
    s.middleRows(static_cast<Eigen::Index>(tau - 1) * np, np) = 0.5 * (p_prev + p_curr);
  }
  return s;
}

inline Vector random_vector(Eigen::Index size, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = gauss(rng);
  return v;
}

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = gauss(rng);
  }
  return m;
}

}  // namespace cxtomo::testing
