#include "cxtomo/wave.hpp"

#include <iostream>

namespace cxtomo {

WavePropagator::WavePropagator(GridSpec spec) : spec_(spec) {
  if (spec_.n < 3 || spec_.dx <= 0.0 || spec_.dt <= 0.0) {
    throw std::invalid_argument("WavePropagator: spec must come from make_grid");
  }
  half_c2_ = 0.5 * spec_.courant * spec_.courant;
}

void WavePropagator::step(const double* in, double* out) const {
  const int n = spec_.n;
  const double c = half_c2_;
  for (int j = 0; j < n; ++j) {
    const double* row = in + j * n;
    double* orow = out + j * n;
    const double* below = j > 0 ? row - n : nullptr;
    const double* above = j < n - 1 ? row + n : nullptr;
    for (int i = 0; i < n; ++i) {
      const double left = i > 0 ? row[i - 1] : 0.0;
      const double right = i < n - 1 ? row[i + 1] : 0.0;
      const double down = below ? below[i] : 0.0;
      const double up = above ? above[i] : 0.0;
      orow[i] = row[i] + c * (left + right - 2.0 * row[i]) + c * (down + up - 2.0 * row[i]);
    }
  }
}

Image WavePropagator::apply(const Image& u) const {
  if (u.size() != spec_.num_pixels()) {
    throw std::invalid_argument("WavePropagator::apply: image size mismatch");
  }
  Image out(Vector(u.size()));
  step(u.values.data(), out.values.data());
  return out;
}

SpaceTimeField WavePropagator::solve_forward(const Image& f) const {
  if (f.size() != spec_.num_pixels()) {
    throw std::invalid_argument("solve_forward: image size mismatch");
  }
  const int np = spec_.num_pixels();
  SpaceTimeField out(Vector(spec_.num_voxels()));

  Vector prev = f.values;   // u^{tau-1}
  Vector curr(np);          // u^tau
  step(prev.data(), curr.data());
  out.values.head(np) = 0.5 * (prev + curr);

  Vector next(np);
  for (int tau = 2; tau <= spec_.n_slices; ++tau) {
    step(curr.data(), next.data());
    next = 2.0 * next - prev;
    prev.swap(curr);
    curr.swap(next);
    out.values.segment(static_cast<std::int64_t>(tau - 1) * np, np) = 0.5 * (prev + curr);
  }
  return out;
}

Image WavePropagator::solve_adjoint(const SpaceTimeField& r) const {
  if (r.size() != spec_.num_voxels()) {
    throw std::invalid_argument("solve_adjoint: field size mismatch");
  }
  const int np = spec_.num_pixels();
  const int N = spec_.n_slices;

  // Midpoint averaging first: state source w_tau = (r_tau + r_{tau+1})/2 with
  // r_0 = r_{N+1} = 0, where r_tau is the tau-th stored slice of r.
  auto slice = [&](int tau) { return r.values.segment(static_cast<std::int64_t>(tau - 1) * np, np); };
  auto state_source = [&](int tau) -> Vector {
    if (tau == 0) return 0.5 * slice(1);
    if (tau == N) return 0.5 * slice(N);
    return 0.5 * (slice(tau) + slice(tau + 1));
  };

  // Reverse sweep of u^1 = T u^0, u^tau = 2 T u^{tau-1} - u^{tau-2}; since T
  // is symmetric the transposed recursion reuses the same stencil.
  if (N == 1) {
    Vector a1 = state_source(1);
    Vector t_a1(np);
    step(a1.data(), t_a1.data());
    return Image(state_source(0) + t_a1);
  }

  Vector a_next = state_source(N);            // a_N
  Vector a_curr(np);                          // a_{N-1}
  step(a_next.data(), a_curr.data());
  a_curr = state_source(N - 1) + 2.0 * a_curr;

  Vector tmp(np);
  for (int tau = N - 2; tau >= 1; --tau) {
    step(a_curr.data(), tmp.data());
    tmp = state_source(tau) + 2.0 * tmp - a_next;
    a_next.swap(a_curr);
    a_curr.swap(tmp);
  }

  step(a_curr.data(), tmp.data());
  return Image(state_source(0) + tmp - a_next);
}

Matrix WavePropagator::assemble_solution_matrix() const {
  if (spec_.n > 64) {
    std::cerr << "assemble_solution_matrix: dense assembly at n = " << spec_.n
              << " needs " << (spec_.num_voxels() * spec_.num_pixels() * 8.0 / (1 << 30))
              << " GiB; intended for small grids\n";
  }
  const int np = spec_.num_pixels();
  Matrix S(spec_.num_voxels(), np);
  Image unit = Image::zero(spec_);
  for (int j = 0; j < np; ++j) {
    unit.values[j] = 1.0;
    S.col(j) = solve_forward(unit).values;
    unit.values[j] = 0.0;
  }
  return S;
}

}  // namespace cxtomo
