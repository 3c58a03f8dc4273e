#pragma once

#include "cxtomo/common.hpp"
#include "cxtomo/grid.hpp"

namespace cxtomo {

/// Discrete wave-equation solution operator.
///
/// The one-step map is T = I + (c/2)(I (x) T_x) + (c/2)(T_y (x) I) with
/// c = courant^2 and T_x = T_y = tridiag(1, -2, 1), applied as a 5-point
/// stencil. Neighbors outside the grid are taken to be 0 (zero Dirichlet
/// values on the lateral boundary). T is symmetric, which makes the exact
/// adjoint of the full evolution a reverse-time recursion with the same
/// stencil.
///
/// solve_forward runs the leapfrog recursion u^0 = f, u^1 = T f,
/// u^tau = 2 T u^{tau-1} - u^{tau-2}, and stores slice tau as the midpoint
/// average (u^{tau-1} + u^tau)/2, approximating the field at t = (tau-1/2)*dt.
class WavePropagator {
 public:
  explicit WavePropagator(GridSpec spec);

  const GridSpec& spec() const { return spec_; }

  /// One application of T. Throws std::invalid_argument on size mismatch.
  Image apply(const Image& u) const;

  /// Full evolution S f as the concatenation of midpoint slices.
  SpaceTimeField solve_forward(const Image& f) const;

  /// Exact transpose S^T r of the evolution (reverse sweep of the recursion).
  Image solve_adjoint(const SpaceTimeField& r) const;

  /// Dense S of shape (n^2 * n_slices) x n^2; column j is the forward solve of
  /// the j-th unit image. Intended for small grids; warns on stderr for n > 64.
  Matrix assemble_solution_matrix() const;

 private:
  void step(const double* in, double* out) const;

  GridSpec spec_;
  double half_c2_;  // courant^2 / 2, the off-center stencil coefficient
};

}  // namespace cxtomo
