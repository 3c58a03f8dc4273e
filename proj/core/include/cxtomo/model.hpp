#pragma once

#include <cstdint>
#include <utility>

#include "cxtomo/common.hpp"
#include "cxtomo/grid.hpp"
#include "cxtomo/raytrace.hpp"
#include "cxtomo/wave.hpp"

namespace cxtomo {

/// Composed forward operator A = H S mapping an initial image to the
/// observation vector, applied matrix-free.
struct ForwardModel {
  WavePropagator propagator;
  RaySystem rays;

  ForwardModel(WavePropagator p, RaySystem r);

  std::int64_t rows() const { return rays.m(); }
  int cols() const { return propagator.spec().num_pixels(); }
  const GridSpec& spec() const { return propagator.spec(); }

  Vector apply(const Vector& f) const;          // A f = H (S f)
  Vector apply_adjoint(const Vector& b) const;  // A^T b = S^T (H^T b)
};

ForwardModel make_forward_model(const GridSpec& spec, const DetectorMask& mask);

/// Gaussian noise rescaled so that ||e|| / ||b_clean|| equals level exactly.
struct NoiseSpec {
  double level = 0.0;
  std::uint64_t seed = 0;
};

struct Box2 {
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;

  bool contains(double px, double py) const {
    return px >= xmin && px <= xmax && py >= ymin && py <= ymax;
  }
};

enum class PhantomKind { dots, lines };

struct PhantomSpec {
  PhantomKind kind = PhantomKind::dots;
  int count = 0;
  Box2 support_box{};
  double amplitude = 1.0;
  std::uint64_t seed = 0;
};

/// Dots: `count` distinct single-pixel spikes at uniform-random nodes inside
/// the support box. Lines: `count` distinct axis-aligned 1-pixel-wide segments
/// spanning the box. Deterministic given the seed.
Image make_phantom(const PhantomSpec& phantom, const GridSpec& grid);

/// Returns (b, e) with e = level * ||b_clean|| * g / ||g||, g i.i.d. standard
/// Gaussian drawn from the seed. Throws NumericError for level > 0 on zero
/// clean data.
std::pair<Vector, Vector> add_noise(const Vector& b_clean, const NoiseSpec& noise);

/// ||fhat - ftrue|| / ||ftrue||; throws NumericError on zero ftrue.
double relative_error(const Image& fhat, const Image& ftrue);

/// Dense A assembled column-by-column through the forward solve. Guarded by a
/// byte budget (default 512 MiB); throws NumericError with guidance when the
/// assembly would exceed it.
Matrix assemble_forward_matrix(const ForwardModel& model,
                               std::int64_t budget_bytes = std::int64_t{512} << 20);

/// Gram matrix A^T A, one column per unit image, computed matrix-free and in
/// parallel over columns (each column owned by one worker, so the result is
/// thread-count independent).
Matrix assemble_gram(const ForwardModel& model);

/// A^T b for the same access pattern.
Vector assemble_normal_rhs(const ForwardModel& model, const Vector& b);

}  // namespace cxtomo
