#pragma once

#include <array>
#include <utility>

#include "cxtomo/common.hpp"

namespace cxtomo {

/// Uniform space-time mesh on [-extent, extent]^2 x [0, t_final].
///
/// Pixels are flattened with x varying fastest: flat = j*n + i for node
/// (x_i, y_j), so an operator of the form I (x) T_x acts along x within each
/// contiguous block of n values. Time slices are stored at the midpoints
/// t = (tau - 1/2)*dt of the n_slices subintervals of [0, t_final].
struct GridSpec {
  int n = 0;
  double extent = 0.0;
  double t_final = 0.0;
  int n_slices = 0;
  double dx = 0.0;
  double dt = 0.0;
  double courant = 0.0;  // dt/dx, shared by both axes

  int num_pixels() const { return n * n; }
  std::int64_t num_voxels() const { return static_cast<std::int64_t>(n) * n * n_slices; }

  int flat_index(int i, int j) const { return j * n + i; }
  std::pair<int, int> coords(int flat) const { return {flat % n, flat / n}; }

  double x(int i) const { return -extent + i * dx; }
  double y(int j) const { return -extent + j * dx; }
  double slice_time(int tau) const { return (tau - 0.5) * dt; }  // tau in [1, n_slices]

  bool inside(double px, double py) const {
    return px >= -extent && px <= extent && py >= -extent && py <= extent;
  }
};

/// Validates arguments, derives spacings, and enforces the leapfrog CFL bound
/// courant*sqrt(2) <= 1. Throws std::invalid_argument otherwise.
GridSpec make_grid(int n, double extent, double t_final, int n_slices);

/// Flattened n^2 scalar field on the t = 0 plane.
struct Image {
  Vector values;

  Image() = default;
  explicit Image(Vector v) : values(std::move(v)) {}
  static Image zero(const GridSpec& g) { return Image(Vector::Zero(g.num_pixels())); }

  Eigen::Index size() const { return values.size(); }
};

/// Flattened n^2 * n_slices field, slice-major: slice tau (1-based) occupies
/// [(tau-1)*n^2, tau*n^2).
struct SpaceTimeField {
  Vector values;

  SpaceTimeField() = default;
  explicit SpaceTimeField(Vector v) : values(std::move(v)) {}
  static SpaceTimeField zero(const GridSpec& g) {
    return SpaceTimeField(Vector::Zero(g.num_voxels()));
  }

  Eigen::Index size() const { return values.size(); }
};

struct WeightPair {
  int index = 0;
  double weight = 0.0;
};

/// Up to four (flat index, weight) pairs; weights of retained pairs are > 0
/// except for the single exact-node case which carries weight 1.
struct BilinearWeights {
  int count = 0;
  std::array<WeightPair, 4> entries{};

  const WeightPair* begin() const { return entries.data(); }
  const WeightPair* end() const { return entries.data() + count; }
};

/// Bilinear deposition weights of a point into its enclosing cell. Weights of
/// an in-hull point sum to 1; points outside the closed hull yield count == 0
/// (the field is taken to vanish outside the computational box). Exact zero
/// weights are dropped, so a point on a node yields the single pair
/// (flat_index, 1).
BilinearWeights bilinear_weights(const GridSpec& spec, double px, double py);

}  // namespace cxtomo
